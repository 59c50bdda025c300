#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cl12/composition.hpp"
#include "cl12/corpus.hpp"
#include "cl12/counterstrategy.hpp"
#include "cl12/extraction.hpp"

using namespace cl12;

namespace {

// Exit codes: 0 success, 1 semantic failure, 2 unknown, 3 usage.
constexpr int kUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_pool(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

Json record_to_json(const RunRecord &rec) {
  Json moves = Json::array();
  for (std::size_t i = 0; i < rec.run.size(); ++i) {
    const auto &m = rec.moves[i];
    moves.push_back({{"labmove", to_string(rec.run[i])},
                     {"tick", m.tick},
                     {"magnitude", m.magnitude},
                     {"background", m.background},
                     {"timecost", m.timecost},
                     {"antecedent", m.antecedent},
                     {"replicative", m.replicative},
                     {"focused", m.focused}});
  }
  Json j{{"initial_position", to_string(rec.initial)},
         {"final_position", to_string(rec.final_state)},
         {"run", run_to_json(rec.run)},
         {"moves", moves},
         {"winner", player_name(rec.winner)},
         {"ticks", rec.ticks},
         {"meters",
          {{"amplitude", rec.meters.amplitude},
           {"time", rec.meters.time},
           {"space", rec.meters.space},
           {"background", rec.meters.background}}},
         {"flags", rec.flags},
         {"rejected", rec.rejected}};
  if (rec.illegal) j["illegal"] = {{"offender", player_name(rec.offender)}, {"reason", rec.reason}};
  return j;
}

void print_record(const RunRecord &rec, bool json) {
  if (json) {
    std::cout << record_to_json(rec).dump(2) << "\n";
    return;
  }
  std::cout << "run: " << to_string(rec.run) << "\n";
  std::cout << "final position: " << to_string(rec.final_state) << "\n";
  if (rec.illegal) std::cout << "illegal move by " << player_name(rec.offender) << ": " << rec.reason << "\n";
  for (const auto &f : rec.flags) std::cout << "flag: " << f << "\n";
  std::cout << "meters: amplitude " << rec.meters.amplitude << ", space " << rec.meters.space << ", time "
            << rec.meters.time << ", background " << rec.meters.background << "\n";
  std::cout << "winner: " << player_name(rec.winner) << "\n";
}

// Game source shared by several subcommands.
struct GameArgs {
  std::string sequent, formula, interp;
  std::string pool = "0,1";
  bool branching = false;

  void add(CLI::App *app, bool with_branching = false) {
    app->add_option("--sequent,-s", sequent, "sequent text, e.g. \"p & q => p | q\"");
    app->add_option("--formula,-f", formula, "formula text, played as a formula game");
    app->add_option("--interp,-i", interp, "interpretation file (default: arithmetic on {0..15})");
    app->add_option("--pool", pool, "comma-separated constants offered for # moves")->capture_default_str();
    if (with_branching) app->add_flag("--branching", branching, "play the formula under branching recurrence");
  }
  GameState state() const {
    if (sequent.empty() == formula.empty()) throw UsageError("exactly one of --sequent and --formula is required");
    if (!sequent.empty()) return initial_state(parse_sequent(sequent));
    auto f = parse_formula(formula);
    return branching ? initial_branching_state(f) : initial_formula_state(f);
  }
  Interpretation interpretation() const {
    return interp.empty() ? Interpretation::arithmetic(4) : load_interpretation(interp);
  }
  std::vector<std::string> pool_list() const { return split_pool(pool); }
};

// Environment choice shared by the playing subcommands.
struct EnvArgs {
  std::string env = "random";
  std::uint64_t seed = 0;
  std::size_t max_ticks = 1000;
  std::size_t max_moves = 16;
  bool clean = false;

  void add(CLI::App *app) {
    app->add_option("--env", env, "do-nothing | random | interactive | script:<file>")->capture_default_str();
    app->add_option("--seed", seed, "random environment seed")->capture_default_str();
    app->add_option("--max-ticks", max_ticks, "tick budget")->capture_default_str();
    app->add_option("--max-moves", max_moves, "random environment move budget")->capture_default_str();
    app->add_flag("--clean-env", clean, "refuse illegal environment moves instead of forfeiting them");
  }
  PlayOptions options() const {
    PlayOptions o;
    o.max_ticks = max_ticks;
    o.clean_environment = clean;
    return o;
  }
  std::unique_ptr<EnvironmentAgent> make(const std::vector<std::string> &pool) const;
};

// Human plays the environment: one move per prompt, "wait" to let the machine think, "quit" to stop.
std::optional<std::vector<std::string>> repl_turn(const GameState &st, const RunView &run, std::size_t &shown) {
  for (; shown < run.size(); ++shown)
    std::cout << "  " << player_char(run.label(shown)) << " " << run.move(shown) << "\n";
  for (;;) {
    std::cout << "position: " << to_string(st) << "\n> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return std::nullopt;
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t") - b + 1);
    if (line == "quit") return std::nullopt;
    if (line == "wait") return std::vector<std::string>{};
    auto r = check_move(st, {Player::Bot, line});
    if (r.legal) return std::vector<std::string>{line};
    std::cout << "illegal: " << r.reason << "\n";
  }
}

std::unique_ptr<EnvironmentAgent> EnvArgs::make(const std::vector<std::string> &pool) const {
  if (env == "do-nothing") return std::make_unique<ScriptedEnvironment>(std::vector<ScriptEntry>{});
  if (env == "random") {
    RandomEnvOptions o;
    o.pool = pool;
    o.max_moves = max_moves;
    return std::make_unique<RandomEnvironment>(seed, o);
  }
  if (env == "interactive") {
    auto shown = std::make_shared<std::size_t>(0);
    return std::make_unique<InteractiveEnvironment>(
        [shown](const GameState &st, const RunView &run) { return repl_turn(st, run, *shown); });
  }
  if (env.rfind("script:", 0) == 0) return std::make_unique<ScriptedEnvironment>(parse_script(read_file(env.substr(7))));
  throw UsageError("unknown environment " + env);
}

int winner_code(const RunRecord &rec) { return rec.winner == Player::Top ? 0 : 1; }

std::unique_ptr<Strategy> make_machine(const std::string &name, const std::string &proof_path) {
  if (name == "do-nothing") return std::make_unique<DoNothingStrategy>();
  if (name == "doubling") return std::make_unique<DoublingStrategy>();
  if (name == "proof") {
    if (proof_path.empty()) throw UsageError("--machine proof needs --proof");
    return extract(load_proof(proof_path));
  }
  throw UsageError("unknown machine " + name);
}

std::string verdict_line(const Verdict &v) {
  std::string s = to_string(v.kind);
  if (!v.certificate.empty()) s += " (" + v.certificate + ")";
  return s;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Games, proofs and strategies for sequents of choice, parallel and recurrence operators"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  GameArgs parse_args;
  auto *parse_cmd = app.add_subcommand("parse", "parse and print a formula or sequent");
  parse_cmd->add_option("--sequent,-s", parse_args.sequent);
  parse_cmd->add_option("--formula,-f", parse_args.formula);

  std::string elem_seq;
  auto *elem_cmd = app.add_subcommand("elementarize", "elementarization and stability of a sequent");
  elem_cmd->add_option("--sequent,-s", elem_seq)->required();

  GameArgs runs_args;
  std::size_t max_runs = 100000;
  auto *runs_cmd = app.add_subcommand("legal-runs", "enumerate the maximal legal runs with their winners");
  runs_args.add(runs_cmd, true);
  runs_cmd->add_option("--max-runs", max_runs, "explosion guard")->capture_default_str();

  GameArgs play_args;
  EnvArgs play_env;
  std::string machine = "do-nothing", machine_proof;
  auto *play_cmd = app.add_subcommand("play", "play a machine against an environment");
  play_args.add(play_cmd, true);
  play_env.add(play_cmd);
  play_cmd->add_option("--machine", machine, "do-nothing | doubling | proof")->capture_default_str();
  play_cmd->add_option("--proof", machine_proof, "proof file for --machine proof");

  std::string prove_seq, prove_out;
  ProverOptions prover;
  auto *prove_cmd = app.add_subcommand("prove", "search for a proof");
  prove_cmd->add_option("--sequent,-s", prove_seq)->required();
  prove_cmd->add_option("--out,-o", prove_out, "write the proof file here");
  prove_cmd->add_option("--replicate-cap", prover.replicate_cap, "Replicate steps per branch")->capture_default_str();
  prove_cmd->add_option("--budget", prover.goal_budget, "goal budget")->capture_default_str();

  std::string check_path;
  auto *check_cmd = app.add_subcommand("check-proof", "check a proof file");
  check_cmd->add_option("proof", check_path)->required();

  std::string xp_proof, xp_interp, xp_pool = "0,1";
  EnvArgs xp_env;
  auto *xp_cmd = app.add_subcommand("extract-play", "extract a strategy from a proof and play it");
  xp_cmd->add_option("--proof,-p", xp_proof)->required();
  xp_cmd->add_option("--interp,-i", xp_interp, "interpretation file (default: arithmetic on {0..15})");
  xp_cmd->add_option("--pool", xp_pool)->capture_default_str();
  xp_env.add(xp_cmd);

  std::string cp_proof, cp_interp, cp_pool = "0,1", cp_mode = "direct";
  std::vector<std::string> cp_solutions;
  EnvArgs cp_env;
  auto *cp_cmd = app.add_subcommand("compose", "compose a proof's strategy with solutions of its antecedent");
  cp_cmd->add_option("--proof,-p", cp_proof)->required();
  cp_cmd->add_option("--solution", cp_solutions,
                     "i=<do-nothing|doubling|fn:<letter>:<arity>|table.json>, i counts antecedent members from 0");
  cp_cmd->add_option("--mode", cp_mode, "direct | recompute")->capture_default_str();
  cp_cmd->add_option("--interp,-i", cp_interp, "interpretation file (default: arithmetic on {0..15})");
  cp_cmd->add_option("--pool", cp_pool)->capture_default_str();
  cp_env.add(cp_cmd);

  std::string ct_seq, ct_machine = "do-nothing", ct_proof;
  RefuteOptions ct_opt;
  auto *ct_cmd = app.add_subcommand("counter", "refute a machine on an unprovable sequent");
  ct_cmd->add_option("--sequent,-s", ct_seq)->required();
  ct_cmd->add_option("--machine", ct_machine, "do-nothing | doubling | proof")->capture_default_str();
  ct_cmd->add_option("--proof", ct_proof, "proof file for --machine proof");
  ct_cmd->add_option("--max-ticks", ct_opt.max_ticks)->capture_default_str();
  ct_cmd->add_option("--replication-budget", ct_opt.replication_budget)->capture_default_str();

  GameArgs or_args;
  OracleOptions or_opt;
  auto *or_cmd = app.add_subcommand("oracle", "classical validity of a formula, or stability of a sequent");
  or_cmd->add_option("--sequent,-s", or_args.sequent);
  or_cmd->add_option("--formula,-f", or_args.formula);
  or_cmd->add_option("--budget", or_opt.budget)->capture_default_str();
  or_cmd->add_option("--max-domain", or_opt.max_domain)->capture_default_str();

  std::string manifest = "tests/corpus/corpus.json";
  SuiteOptions suite;
  std::vector<int> only;
  auto *corpus_cmd = app.add_subcommand("corpus", "golden corpus");
  corpus_cmd->require_subcommand(1);
  auto *corpus_run = corpus_cmd->add_subcommand("run", "run the acceptance suite over a corpus manifest");
  corpus_run->add_option("--manifest,-m", manifest)->capture_default_str();
  corpus_run->add_option("--jobs,-j", suite.jobs, "criteria run in parallel")->capture_default_str();
  corpus_run->add_option("--only", only, "criterion ids to run");
  corpus_run->add_option("--seeds", suite.extraction_seeds, "random environments per proof and interpretation")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*parse_cmd) {
      if (parse_args.sequent.empty() == parse_args.formula.empty())
        throw UsageError("exactly one of --sequent and --formula is required");
      if (!parse_args.sequent.empty()) {
        auto s = parse_sequent(parse_args.sequent);
        if (json)
          std::cout << Json{{"sequent", to_string(s)},
                            {"free_variables", free_vars(s)},
                            {"native_magnitude", native_magnitude(s)},
                            {"elementary", is_elementary(s)}}
                           .dump(2)
                    << "\n";
        else
          std::cout << to_string(s) << "\n";
      } else {
        auto f = parse_formula(parse_args.formula);
        if (json)
          std::cout << Json{{"formula", to_string(f)}, {"free_variables", free_vars(f)}, {"elementary", is_elementary(f)}}
                           .dump(2)
                    << "\n";
        else
          std::cout << to_string(f) << "\n";
      }
      return 0;
    }

    if (*elem_cmd) {
      auto s = parse_sequent(elem_seq);
      auto e = elementarize_sequent(s);
      auto v = is_stable(s);
      if (json) {
        Json j{{"elementarization", to_string(e)}, {"stable", to_string(v.kind)}};
        if (v.model) j["countermodel"] = interpretation_to_json(v.model->interp);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << to_string(e) << "\nstable: " << verdict_line(v) << "\n";
      }
      return v.kind == VerdictKind::Valid ? 0 : v.kind == VerdictKind::Invalid ? 1 : 2;
    }

    if (*runs_cmd) {
      auto st = runs_args.state();
      auto I = runs_args.interpretation();
      MoveOptions mo;
      mo.pool = runs_args.pool_list();
      auto runs = legal_runs(st, I, mo, max_runs);
      if (json) {
        Json arr = Json::array();
        for (const auto &e : runs) arr.push_back({{"run", run_to_json(e.run)}, {"winner", player_name(e.winner)}});
        std::cout << Json{{"count", runs.size()}, {"runs", arr}}.dump(2) << "\n";
      } else {
        for (std::size_t i = 0; i < runs.size(); ++i)
          std::cout << i + 1 << ". " << to_string(runs[i].run) << "  " << player_name(runs[i].winner) << "\n";
        std::cout << runs.size() << " runs\n";
      }
      return 0;
    }

    if (*play_cmd) {
      auto st = play_args.state();
      auto I = play_args.interpretation();
      auto m = make_machine(machine, machine_proof);
      auto env = play_env.make(play_args.pool_list());
      auto rec = play(*m, *env, st, I, play_env.options());
      print_record(rec, json);
      return winner_code(rec);
    }

    if (*prove_cmd) {
      auto s = parse_sequent(prove_seq);
      auto r = prove(s, prover);
      if (!prove_out.empty() && r.status == ProveStatus::Proved) write_file(prove_out, proof_to_json(r.proof).dump(2) + "\n");
      if (json) {
        Json j{{"status", to_string(r.status)}, {"goals", r.goals}};
        if (r.status == ProveStatus::Proved) j["proof"] = proof_to_json(r.proof);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << to_string(r.status) << " (" << r.goals << " goals)\n";
        if (r.status == ProveStatus::Proved)
          for (std::size_t i = 0; i < r.proof.size(); ++i) {
            const auto &step = r.proof[i];
            std::cout << i + 1 << ". " << to_string(step.seq) << "   " << rule_name(step.rule.kind);
            for (std::size_t k = 0; k < step.premises.size(); ++k)
              std::cout << (k ? ", " : ": ") << step.premises[k] + 1;
            std::cout << "\n";
          }
      }
      return r.status == ProveStatus::Proved ? 0 : r.status == ProveStatus::Unprovable ? 1 : 2;
    }

    if (*check_cmd) {
      auto p = load_proof(check_path);
      auto r = check_proof(p);
      if (json)
        std::cout << Json{{"ok", r.ok}, {"step", r.step + 1}, {"violation", r.violation}}.dump(2) << "\n";
      else if (r.ok)
        std::cout << "ok: " << p.size() << " steps, conclusion " << to_string(p.back().seq) << "\n";
      else
        std::cout << "rejected at step " << r.step + 1 << ": " << r.violation << "\n";
      return r.ok ? 0 : 1;
    }

    if (*xp_cmd) {
      auto p = load_proof(xp_proof);
      auto k = extract(p);
      auto I = xp_interp.empty() ? Interpretation::arithmetic(4) : load_interpretation(xp_interp);
      auto env = xp_env.make(split_pool(xp_pool));
      auto rec = play(*k, *env, initial_state(p.back().seq), I, xp_env.options());
      print_record(rec, json);
      return winner_code(rec);
    }

    if (*cp_cmd) {
      auto p = load_proof(cp_proof);
      const Sequent &s = p.back().seq;
      auto I = cp_interp.empty() ? Interpretation::arithmetic(4) : load_interpretation(cp_interp);
      std::vector<std::unique_ptr<Strategy>> owned(s.antecedent.size());
      for (const auto &desc : cp_solutions) {
        auto eq = desc.find('=');
        if (eq == std::string::npos) throw UsageError("--solution expects i=<solution>, got " + desc);
        std::size_t i = std::stoul(desc.substr(0, eq));
        if (i >= owned.size()) throw UsageError("--solution index " + std::to_string(i) + " exceeds the antecedent");
        owned[i] = make_solution(desc.substr(eq + 1), I);
      }
      std::vector<const Strategy *> sols;
      for (std::size_t i = 0; i < owned.size(); ++i) {
        if (!owned[i]) throw UsageError("no --solution for antecedent member " + std::to_string(i));
        sols.push_back(owned[i].get());
      }
      auto k = extract(p);
      std::unique_ptr<Strategy> m;
      RecomputeComposition *re = nullptr;
      if (cp_mode == "direct") {
        m = compose_direct(*k, sols, s);
      } else if (cp_mode == "recompute") {
        auto r = compose_recompute(*k, sols, s, compute_b(p));
        re = r.get();
        m = std::move(r);
      } else {
        throw UsageError("--mode must be direct or recompute");
      }
      auto env = cp_env.make(split_pool(cp_pool));
      auto rec = play(*m, *env, initial_formula_state(s.succedent), I, cp_env.options());
      if (json) {
        Json j = record_to_json(rec);
        j["b"] = compute_b(p);
        if (re) {
          const auto &st = re->stats();
          j["recompute"] = {{"history_max", st.history_max}, {"restarts", st.restarts},
                            {"iterations", st.iterations},   {"fetch_calls", st.fetch_calls},
                            {"update_calls", st.update_calls}, {"max_depth", st.max_depth},
                            {"max_hindex", st.max_hindex},   {"retained_strings", st.retained_strings},
                            {"violations", st.violations}};
        }
        std::cout << j.dump(2) << "\n";
      } else {
        print_record(rec, false);
        std::cout << "b: " << compute_b(p) << "\n";
        if (re) {
          const auto &st = re->stats();
          std::cout << "history " << st.history_max << ", restarts " << st.restarts << ", depth " << st.max_depth
                    << ", fetch calls " << st.fetch_calls << ", violations " << st.violations.size() << "\n";
        }
      }
      return winner_code(rec);
    }

    if (*ct_cmd) {
      auto s = parse_sequent(ct_seq);
      auto pr = prove(s, ct_opt.counter.prover);
      if (pr.status == ProveStatus::Unknown) {
        std::cout << Json{{"ok", false}, {"reason", "refused: prove returned Unknown"}}.dump(2) << "\n";
        return 2;
      }
      auto m = make_machine(ct_machine, ct_proof);
      auto r = refute(s, *m, ct_opt);
      std::cout << refutation_to_json(r).dump(2) << "\n";
      return r.ok ? 0 : 1;
    }

    if (*or_cmd) {
      if (or_args.sequent.empty() == or_args.formula.empty())
        throw UsageError("exactly one of --sequent and --formula is required");
      auto v = or_args.sequent.empty() ? decide_validity(parse_formula(or_args.formula), or_opt)
                                       : is_stable(parse_sequent(or_args.sequent), or_opt);
      if (json) {
        Json j{{"verdict", to_string(v.kind)}, {"certificate", v.certificate}, {"steps", v.steps}};
        if (v.model) {
          j["countermodel"] = interpretation_to_json(v.model->interp);
          j["valuation"] = v.model->valuation;
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << verdict_line(v) << "\n";
        if (v.model) std::cout << interpretation_to_json(v.model->interp).dump() << "\n";
      }
      return v.kind == VerdictKind::Valid ? 0 : v.kind == VerdictKind::Invalid ? 1 : 2;
    }

    if (*corpus_run) {
      auto c = load_corpus(manifest);
      auto results = run_suite(c, suite, only);
      bool all = true;
      for (const auto &r : results) {
        std::cout << format_result(r) << "\n";
        all = all && r.pass;
      }
      return all ? 0 : 1;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError &e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
