#include "cl12/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "cl12/counterstrategy.hpp"
#include "cl12/extraction.hpp"

namespace cl12 {

namespace fs = std::filesystem;

const CorpusProof &Corpus::proof(const std::string &name) const {
  for (const auto &p : proofs)
    if (p.name == name) return p;
  throw CorpusError("no proof named " + name);
}

namespace {

std::string resolve(const fs::path &base, const std::string &p) {
  fs::path q(p);
  return q.is_absolute() ? p : (base / q).string();
}

std::vector<std::string> numerals(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(numeral_of(i));
  return out;
}

std::vector<std::string> read_pool(const Json &j) {
  if (!j.contains("pool")) return {"0", "1"};
  const auto &p = j.at("pool");
  if (p.is_number()) return numerals(p.get<std::size_t>());
  return p.get<std::vector<std::string>>();
}

}  // namespace

Corpus load_corpus(const std::string &manifest) {
  Json j;
  try {
    j = Json::parse(read_file(manifest));
  } catch (const std::exception &e) {
    throw CorpusError(manifest + ": " + e.what());
  }
  fs::path base = fs::path(manifest).parent_path();
  Corpus c;
  const Json interps = j.value("interpretations", Json::object());
  for (const auto &[name, path] : interps.items())
    c.interpretations[name] = load_interpretation(resolve(base, path.get<std::string>()));
  const Json proofs = j.value("proofs", Json::array());
  for (const auto &p : proofs) {
    CorpusProof cp;
    cp.name = p.at("name").get<std::string>();
    cp.proof = load_proof(resolve(base, p.at("file").get<std::string>()));
    cp.interpretations = p.value("interpretations", std::vector<std::string>{});
    for (const auto &i : cp.interpretations)
      if (!c.interpretations.count(i)) throw CorpusError("proof " + cp.name + " names unknown interpretation " + i);
    cp.pool = read_pool(p);
    c.proofs.push_back(std::move(cp));
  }
  c.provable = j.value("provable", std::vector<std::string>{});
  c.unprovable = j.value("unprovable", std::vector<std::string>{});
  c.elementary = j.value("elementary", std::vector<std::string>{});
  const Json comps = j.value("compositions", Json::array());
  for (const auto &m : comps) {
    CorpusComposition cc;
    cc.name = m.at("name").get<std::string>();
    cc.proof = m.at("proof").get<std::string>();
    c.proof(cc.proof);
    for (const auto &s : m.at("solutions")) {
      std::string desc = s.get<std::string>();
      if (desc.find(':') == std::string::npos && desc != "do-nothing" && desc != "doubling")
        desc = resolve(base, desc);
      cc.solutions.push_back(desc);
    }
    cc.interpretation = m.at("interpretation").get<std::string>();
    if (!c.interpretations.count(cc.interpretation))
      throw CorpusError("composition " + cc.name + " names unknown interpretation " + cc.interpretation);
    cc.pool = read_pool(m);
    c.compositions.push_back(std::move(cc));
  }
  const Json mism = j.value("mismatches", Json::array());
  for (const auto &m : mism) {
    Mismatch mm{m.at("proof").get<std::string>(), m.at("sequent").get<std::string>()};
    c.proof(mm.proof);
    c.mismatches.push_back(std::move(mm));
  }
  return c;
}

std::unique_ptr<Strategy> make_solution(const std::string &desc, const Interpretation &I, const std::string &base_dir) {
  if (desc == "do-nothing") return std::make_unique<DoNothingStrategy>();
  if (desc == "doubling") return std::make_unique<DoublingStrategy>();
  if (desc.rfind("fn:", 0) == 0) {
    auto colon = desc.rfind(':');
    if (colon <= 3) throw CorpusError("solution fn:<letter>:<arity> expected, got " + desc);
    std::string f = desc.substr(3, colon - 3);
    std::size_t arity = std::stoul(desc.substr(colon + 1));
    return std::make_unique<TableSolution>(table_from_function(I, f, arity));
  }
  return std::make_unique<TableSolution>(table_from_json(Json::parse(read_file(resolve(base_dir, desc)))));
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failures; a criterion passes when none were recorded.
struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::string first;
  void expect(bool ok, const std::string &what) {
    ++checks;
    if (!ok && failed++ == 0) first = what;
  }
  bool ok() const { return failed == 0; }
  std::string summary(const std::string &extra = "") const {
    std::ostringstream o;
    o << checks << " checks";
    if (!extra.empty()) o << ", " << extra;
    if (failed) o << ", " << failed << " failed, first: " << first;
    return o.str();
  }
};

LabMove T(const std::string &m) { return {Player::Top, m}; }
LabMove B(const std::string &m) { return {Player::Bot, m}; }

CriterionResult census(const Corpus &) {
  Tally t;
  auto t0 = Clock::now();
  auto st = initial_formula_state(parse_formula("(0 = 0 & 0 = 1) -> (10 = 11 & 10 = 10)"));
  auto I = Interpretation::arithmetic(2);
  auto runs = legal_runs(st, I);
  double secs = since(t0);
  std::map<std::string, Player> expected{
      {to_string(Run{}), Player::Top},
      {to_string(Run{T("0.0")}), Player::Top},
      {to_string(Run{T("0.1")}), Player::Top},
      {to_string(Run{B("1.0")}), Player::Bot},
      {to_string(Run{B("1.1")}), Player::Top},
      {to_string(Run{T("0.0"), B("1.0")}), Player::Bot},
      {to_string(Run{B("1.0"), T("0.0")}), Player::Bot},
      {to_string(Run{T("0.1"), B("1.0")}), Player::Top},
      {to_string(Run{B("1.0"), T("0.1")}), Player::Top},
      {to_string(Run{T("0.0"), B("1.1")}), Player::Top},
      {to_string(Run{B("1.1"), T("0.0")}), Player::Top},
      {to_string(Run{T("0.1"), B("1.1")}), Player::Top},
      {to_string(Run{B("1.1"), T("0.1")}), Player::Top},
  };
  t.expect(runs.size() == 13, "run count " + std::to_string(runs.size()));
  std::set<std::string> seen;
  for (const auto &e : runs) {
    auto key = to_string(e.run);
    seen.insert(key);
    auto it = expected.find(key);
    t.expect(it != expected.end(), "unexpected run " + key);
    if (it != expected.end()) t.expect(it->second == e.winner, "verdict of " + key);
  }
  t.expect(seen.size() == expected.size(), "distinct runs");
  t.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
  return {1, "legal-run census", t.ok(), t.summary(std::to_string(runs.size()) + " runs"), secs};
}

CriterionResult branching(const Corpus &) {
  Tally t;
  auto G = parse_formula("p | (q & (r & (s | t)))");
  GameState st = initial_branching_state(G);
  Run gamma{B(":"), T(".1"), B("0.0"), B("1.1"), B(":1"), B("10.0"), B("11.1"), T("11.0")};
  // Trees displayed after each move; the sixth is shown only together with the seventh.
  std::vector<std::string> shown{
      "(p | q & r & (s | t)) o (p | q & r & (s | t))",
      "(q & r & (s | t)) o (q & r & (s | t))",
      "q o (q & r & (s | t))",
      "q o (r & (s | t))",
      "q o ((r & (s | t)) o (r & (s | t)))",
      "",
      "q o (r o (s | t))",
      "q o (r o s)",
  };
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    auto r = check_move(st, gamma[i]);
    t.expect(r.legal, "move " + std::to_string(i + 1) + " illegal: " + r.reason);
    if (!r.legal) break;
    st = r.next;
    if (!shown[i].empty()) t.expect(tree_to_string(st.antecedent[0]) == shown[i], "tree after move " + std::to_string(i + 1));
  }
  std::map<std::string, std::pair<Run, std::string>> proj{
      {"0", {{T("1"), B("0")}, "q"}},
      {"10", {{T("1"), B("1"), B("0")}, "r"}},
      {"11", {{T("1"), B("1"), B("1"), T("0")}, "s"}},
  };
  for (const auto &[v, want] : proj) {
    auto got = projection_bits(gamma, v);
    t.expect(got == want.first, "projection " + v + " = " + to_string(got));
    auto a = apply_run(initial_formula_state(G), got);
    t.expect(a.legal && to_string(a.state.succedent) == want.second, "projection " + v + " leaf");
  }
  return {2, "branching-recurrence trace", t.ok(), t.summary(), 0};
}

CriterionResult sequent_trace(const Corpus &) {
  Tally t;
  GameState st = initial_state(parse_sequent("Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)"));
  Run run{T("0.1.:"), B("1.#10"), T("0.1.0.#10"), T("0.1.0.#10"), B("0.1.0.#100"),
          T("0.1.1.#100"), T("0.1.1.#10"), B("0.1.1.#1000"), T("1.#1000")};
  const std::string ax = "Ax: cube(x) = (x*x)*x, ";
  const std::string mul = "(!x: !y: ?z: z = x*y)";
  std::vector<std::string> shown{
      ax + mul + " o " + mul + " => !x: ?y: y = cube(x)",
      ax + mul + " o " + mul + " => ?y: y = cube(10)",
      ax + "(!y: ?z: z = 10*y) o " + mul + " => ?y: y = cube(10)",
      ax + "(?z: z = 10*10) o " + mul + " => ?y: y = cube(10)",
      ax + "(100 = 10*10) o " + mul + " => ?y: y = cube(10)",
      ax + "(100 = 10*10) o (!y: ?z: z = 100*y) => ?y: y = cube(10)",
      ax + "(100 = 10*10) o (?z: z = 100*10) => ?y: y = cube(10)",
      ax + "(100 = 10*10) o (1000 = 100*10) => ?y: y = cube(10)",
      ax + "(100 = 10*10) o (1000 = 100*10) => 1000 = cube(10)",
  };
  const GameState start = st;
  for (std::size_t i = 0; i < run.size(); ++i) {
    auto r = check_move(st, run[i]);
    t.expect(r.legal, "move " + std::to_string(i + 1) + " illegal: " + r.reason);
    if (!r.legal) break;
    st = r.next;
    t.expect(to_string(st) == shown[i], "position after move " + std::to_string(i + 1) + ": " + to_string(st));
  }
  t.expect(winner(start, run, Interpretation::arithmetic(4)) == Player::Top, "verdict");
  return {3, "sequent-game trace", t.ok(), t.summary(), 0};
}

CriterionResult proof_corpus(const Corpus &c) {
  Tally t;
  double worst = 0;
  for (const auto &[name, lines] : std::vector<std::pair<std::string, std::size_t>>{{"cube", 10}, {"choose-exists", 3}}) {
    const auto &p = c.proof(name).proof;
    t.expect(p.size() == lines, name + " has " + std::to_string(p.size()) + " lines");
    auto chk = check_proof(p);
    t.expect(chk.ok, name + " rejected at step " + std::to_string(chk.step + 1) + ": " + chk.violation);
    auto t0 = Clock::now();
    auto r = prove(p.back().seq);
    double secs = since(t0);
    worst = std::max(worst, secs);
    t.expect(r.status == ProveStatus::Proved, name + " not rediscovered: " + to_string(r.status));
    t.expect(r.status != ProveStatus::Proved || check_proof(r.proof).ok, name + " rediscovered proof rejected");
    t.expect(secs < 10.0, name + " search took " + std::to_string(secs) + " s");
  }
  std::ostringstream o;
  o.precision(3);
  o << "slowest search " << worst << " s";
  return {4, "proof corpus", t.ok(), t.summary(o.str()), 0};
}

CriterionResult boundary(const Corpus &c) {
  Tally t;
  for (const auto &s : c.provable) {
    auto r = prove(parse_sequent(s));
    t.expect(r.status == ProveStatus::Proved, s + ": " + to_string(r.status));
  }
  for (const auto &s : c.unprovable) {
    auto r = prove(parse_sequent(s));
    t.expect(r.status == ProveStatus::Unprovable, s + ": " + to_string(r.status));
  }
  t.expect(!c.provable.empty() && !c.unprovable.empty(), "empty boundary lists");
  return {5, "provability boundary", t.ok(),
          t.summary(std::to_string(c.provable.size()) + " provable, " + std::to_string(c.unprovable.size()) + " unprovable"),
          0};
}

CriterionResult conservativity(const Corpus &c) {
  Tally t;
  std::size_t unknown = 0;
  for (const auto &text : c.elementary) {
    auto s = parse_sequent(text);
    t.expect(is_elementary(s), text + " is not elementary");
    auto v = is_stable(s);
    auto r = prove(s);
    if (v.kind == VerdictKind::Unknown || r.status == ProveStatus::Unknown) ++unknown;
    bool agree = (v.kind == VerdictKind::Valid && r.status == ProveStatus::Proved) ||
                 (v.kind == VerdictKind::Invalid && r.status == ProveStatus::Unprovable);
    t.expect(agree, text + ": oracle " + to_string(v.kind) + ", prover " + to_string(r.status));
  }
  t.expect(c.elementary.size() == 20, "suite has " + std::to_string(c.elementary.size()) + " items");
  return {6, "conservativity on elementary sequents", t.ok(), t.summary(std::to_string(unknown) + " unknown"), 0};
}

CriterionResult extraction(const Corpus &c, const SuiteOptions &opt) {
  Tally t;
  std::size_t plays = 0;
  for (const auto &cp : c.proofs) {
    auto chk = check_proof(cp.proof);
    t.expect(chk.ok, cp.name + " rejected");
    if (!chk.ok) continue;
    const Sequent &s = cp.proof.back().seq;
    std::size_t native = native_magnitude(s);
    std::size_t cap = replicate_count(cp.proof);
    auto h = [&](std::size_t l) { return std::max(l, native); };
    RandomEnvOptions o;
    o.pool = cp.pool;
    for (const auto &iname : cp.interpretations) {
      const auto &I = c.interpretations.at(iname);
      for (std::uint64_t seed = 0; seed < opt.extraction_seeds; ++seed) {
        auto k = extract(cp.proof, false);
        RandomEnvironment env(seed, o);
        auto rec = play(*k, env, initial_state(s), I);
        ++plays;
        std::string tag = cp.name + "/" + iname + "/seed " + std::to_string(seed);
        t.expect(rec.winner == Player::Top, tag + " lost: " + to_string(rec.run));
        t.expect(rec.flags.empty(), tag + " flagged");
        t.expect(check_amplitude(rec, h), tag + " amplitude");
        auto wb = well_behaved_monitor(rec, cap);
        t.expect(wb.unfocused == 0, tag + " unfocused antecedent move");
        t.expect(wb.replications_within_cap, tag + " replications");
      }
    }
  }
  return {7, "extraction soundness and minimal amplitude", t.ok(), t.summary(std::to_string(plays) + " plays"), 0};
}

struct Built {
  std::unique_ptr<ProofStrategy> k;
  std::vector<std::unique_ptr<Strategy>> owned;
  std::vector<const Strategy *> solutions;
  Sequent seq;
  std::size_t b = 0;
};

Built build(const Corpus &c, const CorpusComposition &cc) {
  Built out;
  const auto &p = c.proof(cc.proof).proof;
  out.k = extract(p);
  out.seq = p.back().seq;
  out.b = compute_b(p);
  for (const auto &desc : cc.solutions) {
    out.owned.push_back(make_solution(desc, c.interpretations.at(cc.interpretation)));
    out.solutions.push_back(out.owned.back().get());
  }
  return out;
}

CriterionResult composition(const Corpus &c, const SuiteOptions &opt) {
  Tally t;
  std::size_t plays = 0;
  bool cube_seen = false;
  for (const auto &cc : c.compositions) {
    auto bt = build(c, cc);
    const auto &I = c.interpretations.at(cc.interpretation);
    GameState game = initial_formula_state(bt.seq.succedent);
    std::size_t b = bt.b;
    auto bound = [&](std::size_t l) { return l + 4 * b; };
    if (cc.name == "cube") {
      cube_seen = true;
      for (unsigned v = 0; v < I.size(); ++v) {
        ScriptedEnvironment env({{0, "#" + numeral_of(v)}});
        auto m = compose_direct(*bt.k, bt.solutions, bt.seq);
        auto rec = play(*m, env, game, I);
        ++plays;
        std::string want = "#" + numeral_of((static_cast<unsigned long long>(v) * v * v) % I.size());
        t.expect(rec.run.size() == 2 && rec.run[1].move == want, "cube of " + std::to_string(v) + ": " + to_string(rec.run));
        t.expect(rec.winner == Player::Top, "cube of " + std::to_string(v) + " lost");
        t.expect(check_amplitude(rec, bound), "cube of " + std::to_string(v) + " amplitude");
      }
    }
    RandomEnvOptions o;
    o.pool = cc.pool;
    for (std::uint64_t seed = 0; seed < opt.composition_seeds; ++seed) {
      RandomEnvironment env(seed, o);
      auto m = compose_direct(*bt.k, bt.solutions, bt.seq);
      auto rec = play(*m, env, game, I);
      ++plays;
      std::string tag = cc.name + "/seed " + std::to_string(seed);
      t.expect(rec.winner == Player::Top, tag + " lost: " + to_string(rec.run));
      t.expect(rec.flags.empty() && !m->aborted(), tag + " flagged");
      t.expect(check_amplitude(rec, bound), tag + " amplitude");
    }
  }
  t.expect(cube_seen, "no cube composition in the corpus");
  return {8, "composition", t.ok(), t.summary(std::to_string(plays) + " plays"), 0};
}

CriterionResult recompute(const Corpus &c, const SuiteOptions &opt) {
  Tally t;
  std::size_t plays = 0, max_depth = 0, max_history = 0, max_restarts = 0;
  for (const auto &cc : c.compositions) {
    auto bt = build(c, cc);
    const auto &I = c.interpretations.at(cc.interpretation);
    GameState game = initial_formula_state(bt.seq.succedent);
    RandomEnvOptions o;
    o.pool = cc.pool;
    for (std::uint64_t seed = 0; seed < opt.composition_seeds; ++seed) {
      RandomEnvironment e1(seed, o), e2(seed, o);
      auto d = compose_direct(*bt.k, bt.solutions, bt.seq);
      auto r = compose_recompute(*bt.k, bt.solutions, bt.seq, bt.b);
      auto rd = play(*d, e1, game, I);
      auto rr = play(*r, e2, game, I);
      ++plays;
      std::string tag = cc.name + "/seed " + std::to_string(seed);
      t.expect(rd.run == rr.run, tag + " runs differ: " + to_string(rd.run) + " vs " + to_string(rr.run));
      const auto &st = r->stats();
      t.expect(st.history_max <= bt.b, tag + " history " + std::to_string(st.history_max));
      t.expect(st.restarts <= bt.b, tag + " restarts " + std::to_string(st.restarts));
      t.expect(st.max_depth <= bt.b, tag + " depth " + std::to_string(st.max_depth));
      t.expect(st.retained_strings == 0, tag + " retained strings");
      t.expect(st.violations.empty(), tag + ": " + (st.violations.empty() ? "" : st.violations.front()));
      t.expect(!r->aborted(), tag + " aborted");
      max_depth = std::max(max_depth, st.max_depth);
      max_history = std::max(max_history, st.history_max);
      max_restarts = std::max(max_restarts, st.restarts);
    }
  }
  t.expect(!c.compositions.empty(), "no compositions");
  std::ostringstream o;
  o << plays << " paired plays, max history " << max_history << ", max restarts " << max_restarts << ", max depth "
    << max_depth;
  return {9, "recompute mode", t.ok(), t.summary(o.str()), 0};
}

void check_refutation(Tally &t, const std::string &tag, const Refutation &r) {
  t.expect(r.ok, tag + ": " + r.reason);
  if (!r.ok) return;
  auto a = apply_run(r.initial, r.run);
  t.expect(a.legal || (r.machine_illegal && a.offender == Player::Top), tag + " run does not re-verify");
  t.expect(r.interpretation.size() <= 3, tag + " domain " + std::to_string(r.interpretation.size()));
  t.expect(winner(r.initial, r.run, r.interpretation) == Player::Bot, tag + " not won by the counterstrategy");
}

CriterionResult counter(const Corpus &c) {
  Tally t;
  for (const auto &text : c.unprovable) {
    auto s = parse_sequent(text);
    DoNothingStrategy idle;
    check_refutation(t, "do-nothing on " + text, refute(s, idle));
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto &m : c.mismatches) {
    auto s = parse_sequent(m.sequent);
    const auto &p = c.proof(m.proof).proof;
    t.expect(!sequent_equal(s, p.back().seq), m.proof + " is not mismatched");
    auto k = extract(p);
    check_refutation(t, m.proof + " on " + m.sequent, refute(s, *k));
    pairs.insert({m.proof, m.sequent});
  }
  t.expect(pairs.size() >= 5, "only " + std::to_string(pairs.size()) + " mismatched pairs");
  return {10, "counterstrategy refutations", t.ok(),
          t.summary(std::to_string(c.unprovable.size()) + " unprovable, " + std::to_string(pairs.size()) + " mismatched"), 0};
}

// Quantifier-free sequent over letters p q r s of formula depth at most 6.
std::string random_qf_formula(std::mt19937_64 &rng, int depth) {
  static const char *atoms[] = {"p", "q", "r", "s", "~p", "~q", "~r", "~s"};
  std::uniform_int_distribution<int> coin(0, 9);
  if (depth == 0 || coin(rng) < 3) return atoms[rng() % 8];
  static const char *ops[] = {" & ", " | ", " /\\ ", " \\/ "};
  return "(" + random_qf_formula(rng, depth - 1) + ops[rng() % 4] + random_qf_formula(rng, depth - 1) + ")";
}

Interpretation random_letters(std::mt19937_64 &rng) {
  Interpretation I;
  for (const char *l : {"p", "q", "r", "s"}) {
    I.predicates[l] = {};
    if (rng() % 2) I.predicates[l].tuples.insert(std::vector<Element>{});
  }
  return I;
}

CriterionResult oracle_cross(const Corpus &, const SuiteOptions &opt) {
  Tally t;
  auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t proved = 0, refuted = 0, unknown = 0;
  std::string first_unknown;
  for (std::size_t i = 0; i < opt.random_sequents; ++i) {
    std::string text;
    for (std::size_t m = rng() % 3; m > 0; --m) text += (text.empty() ? "" : ", ") + random_qf_formula(rng, 3);
    text += " => " + random_qf_formula(rng, 6);
    auto s = parse_sequent(text);
    auto r = prove(s);
    if (r.status == ProveStatus::Proved) {
      ++proved;
      WinnableOptions wo;
      wo.replication_budget = static_cast<int>(replicate_count(r.proof));
      for (int k = 0; k < 10; ++k) {
        auto I = random_letters(rng);
        t.expect(winnable(initial_state(s), I, wo), text + " proved but not winnable");
      }
    } else if (r.status == ProveStatus::Unprovable) {
      ++refuted;
      DoNothingStrategy idle;
      auto ref = refute(s, idle);
      check_refutation(t, text, ref);
    } else if (unknown++ == 0) {
      first_unknown = text;
    }
  }
  double secs = since(t0);
  t.expect(secs < 60.0, "took " + std::to_string(secs) + " s");
  std::ostringstream o;
  o << proved << " proved, " << refuted << " refuted, " << unknown << " unknown";
  if (unknown) o << " (first: " << first_unknown << ")";
  return {11, "oracle cross-check", t.ok(), t.summary(o.str()), secs};
}

// Random top-delay of a run: interleaves the two subsequences so that every top move keeps at least
// the bottom moves that preceded it.
Run random_top_delay(const Run &run, std::mt19937_64 &rng) {
  Run tops, bots;
  std::vector<std::size_t> need;  // bottom moves preceding each top move
  for (const auto &m : run) {
    if (m.player == Player::Top) {
      tops.push_back(m);
      need.push_back(bots.size());
    } else {
      bots.push_back(m);
    }
  }
  Run out;
  std::size_t i = 0, j = 0;
  while (i < tops.size() || j < bots.size()) {
    bool top_ok = i < tops.size() && j >= need[i];
    bool bot_ok = j < bots.size();
    if (top_ok && (!bot_ok || rng() % 2)) out.push_back(tops[i++]);
    else out.push_back(bots[j++]);
  }
  return out;
}

CriterionResult delays(const Corpus &, const SuiteOptions &opt) {
  Tally t;
  struct Game {
    GameState st;
    Interpretation I;
  };
  std::vector<Game> games;
  auto letters = [](const std::string &names, const std::string &true_ones) {
    Interpretation I;
    for (char ch : names) {
      std::string l(1, ch);
      I.predicates[l] = {};
      if (true_ones.find(ch) != std::string::npos) I.predicates[l].tuples.insert(std::vector<Element>{});
    }
    return I;
  };
  games.push_back({initial_state(parse_sequent("p & q, r | s => (p | r) & (q | s)")), letters("pqrs", "pr")});
  games.push_back({initial_state(parse_sequent("p & q => (p & q) /\\ (q | p)")), letters("pq", "q")});
  games.push_back({initial_branching_state(parse_formula("p | (q & (r & (s | t)))")), letters("pqrst", "qrs")});
  Interpretation two;
  two.carrier = 2;
  two.ideal_naming = true;
  two.predicates["p"] = PredicateDef{{}, {{1}}};
  games.push_back({initial_state(parse_sequent("!x: (p(x) | ~p(x)) => !y: (~p(y) | p(y))")), two});
  std::mt19937_64 rng(77);
  MoveOptions mo;
  mo.unfocused = true;
  std::size_t won = 0, delays_checked = 0, attempts = 0;
  while (won < opt.delay_runs && attempts < 100000) {
    ++attempts;
    const auto &g = games[rng() % games.size()];
    GameState cur = g.st;
    Run run;
    for (int k = 0; k < 6; ++k) {
      Player p = rng() % 2 ? Player::Top : Player::Bot;
      auto ms = legal_moves(cur, p, mo);
      if (ms.empty()) continue;
      auto m = ms[rng() % ms.size()];
      auto r = check_move(cur, {p, m});
      if (!r.legal) break;
      run.push_back({p, m});
      cur = r.next;
    }
    if (winner(g.st, run, g.I) != Player::Top) continue;
    ++won;
    for (int d = 0; d < 5; ++d) {
      Run phi = random_top_delay(run, rng);
      ++delays_checked;
      t.expect(is_delay(phi, run, Player::Top), "sampled permutation is not a top-delay");
      auto a = apply_run(g.st, phi);
      t.expect(a.legal || a.offender == Player::Bot, "top-delay " + to_string(phi) + " is top-illegal");
      t.expect(winner(g.st, phi, g.I) == Player::Top, "top-delay " + to_string(phi) + " lost");
    }
  }
  t.expect(won >= opt.delay_runs, "only " + std::to_string(won) + " won runs sampled");
  return {12, "delay/static property", t.ok(),
          t.summary(std::to_string(won) + " won runs, " + std::to_string(delays_checked) + " delays"), 0};
}

}  // namespace

std::vector<CriterionResult> run_suite(const Corpus &c, const SuiteOptions &opt, const std::vector<int> &only) {
  std::vector<std::pair<int, std::function<CriterionResult()>>> all{
      {1, [&] { return census(c); }},
      {2, [&] { return branching(c); }},
      {3, [&] { return sequent_trace(c); }},
      {4, [&] { return proof_corpus(c); }},
      {5, [&] { return boundary(c); }},
      {6, [&] { return conservativity(c); }},
      {7, [&] { return extraction(c, opt); }},
      {8, [&] { return composition(c, opt); }},
      {9, [&] { return recompute(c, opt); }},
      {10, [&] { return counter(c); }},
      {11, [&] { return oracle_cross(c, opt); }},
      {12, [&] { return delays(c, opt); }},
  };
  auto timed = [](int id, const std::function<CriterionResult()> &f) {
    auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = f();
    } catch (const std::exception &e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0};
    }
    double secs = since(t0);
    if (r.seconds == 0) r.seconds = secs;
    return r;
  };
  std::vector<std::pair<int, std::function<CriterionResult()>>> chosen;
  for (auto &e : all)
    if (only.empty() || std::find(only.begin(), only.end(), e.first) != only.end()) chosen.push_back(e);
  std::vector<CriterionResult> out(chosen.size());
  std::size_t jobs = std::max<std::size_t>(1, opt.jobs);
  for (std::size_t start = 0; start < chosen.size(); start += jobs) {
    std::vector<std::future<CriterionResult>> batch;
    for (std::size_t i = start; i < std::min(chosen.size(), start + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, timed, chosen[i].first,
                                 chosen[i].second));
    for (std::size_t i = 0; i < batch.size(); ++i) out[start + i] = batch[i].get();
  }
  return out;
}

std::string format_result(const CriterionResult &r) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << r.seconds << " s): " << r.detail;
  return o.str();
}

}  // namespace cl12
