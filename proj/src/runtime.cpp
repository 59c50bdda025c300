#include "cl12/runtime.hpp"

#include <sstream>

namespace cl12 {

std::size_t magnitude(const std::string &move) {
  std::string best;
  for (std::size_t i = 0; i < move.size(); ++i) {
    if (move[i] != '#') continue;
    std::size_t j = i + 1;
    while (j < move.size() && (move[j] == '0' || move[j] == '1')) ++j;
    std::string c = move.substr(i + 1, j - i - 1);
    if (!is_numeral(c)) throw MoveFormatError("malformed numeral after # in '" + move + "'");
    if (c.size() > best.size() || (c.size() == best.size() && c > best)) best = c;
    i = j - 1;
  }
  return best.empty() ? 0 : numeral_size(best);
}

Action ScriptedStrategy::step(const RunView &) {
  if (next_ >= moves_.size()) return Action::wait();
  return Action::make(moves_[next_++]);
}

Action DoublingStrategy::step(const RunView &run) {
  if (done_) return Action::wait();
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run.label(i) != Player::Bot) continue;
    std::string m = run.move(i);
    if (m.size() < 2 || m[0] != '#') continue;
    std::string c = m.substr(1);
    done_ = true;
    return Action::make(c == "0" ? "#0" : "#" + c + "0");
  }
  return Action::wait();
}

std::vector<ScriptEntry> parse_script(const std::string &text) {
  std::vector<ScriptEntry> out;
  std::istringstream in(text);
  std::string line;
  std::size_t tick = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    auto start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line.rfind("tick ", 0) == 0) {
      try {
        tick = std::stoul(line.substr(5));
      } catch (const std::exception &) {
        throw MoveFormatError("script line " + std::to_string(lineno) + ": bad tick");
      }
    } else if (line.rfind("move ", 0) == 0) {
      out.push_back({tick, line.substr(5)});
    } else {
      throw MoveFormatError("script line " + std::to_string(lineno) + ": expected 'tick N' or 'move <string>'");
    }
  }
  return out;
}

std::string serialize_script(const std::vector<ScriptEntry> &script) {
  std::string out;
  std::optional<std::size_t> tick;
  for (const auto &e : script) {
    if (tick != e.tick) out += "tick " + std::to_string(e.tick) + "\n";
    tick = e.tick;
    out += "move " + e.move + "\n";
  }
  return out;
}

std::vector<std::string> ScriptedEnvironment::act(const GameState &, const RunView &, std::size_t tick) {
  std::vector<std::string> out;
  while (next_ < script_.size() && script_[next_].tick <= tick) out.push_back(script_[next_++].move);
  return out;
}

std::vector<std::string> RandomEnvironment::act(const GameState &st, const RunView &, std::size_t) {
  if (done_) return {};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng_) < opt_.quit_probability) {
    done_ = true;
    return {};
  }
  if (u(rng_) >= opt_.move_probability) return {};
  MoveOptions mo;
  mo.pool = opt_.pool;
  mo.unfocused = opt_.unfocused;
  auto moves = legal_moves(st, Player::Bot, mo);
  if (moves.empty()) {
    // Nothing to do now; give up after a few barren ticks.
    if (++barren_ >= 3) done_ = true;
    return {};
  }
  barren_ = 0;
  std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
  std::string m = moves[pick(rng_)];
  if (++made_ >= opt_.max_moves) done_ = true;
  return {m};
}

std::vector<std::string> InteractiveEnvironment::act(const GameState &st, const RunView &run, std::size_t) {
  if (quit_) return {};
  auto r = cb_(st, run);
  if (!r) {
    quit_ = true;
    return {};
  }
  return *r;
}

RunRecord play(Strategy &machine, EnvironmentAgent &env, const GameState &start, const Interpretation &I,
               const PlayOptions &opt) {
  RunRecord rec;
  rec.initial = start;
  GameState st = start;
  std::size_t background = 0, idle = 0;
  std::optional<std::size_t> last_bot;
  auto safe_magnitude = [](const std::string &m) {
    try {
      return magnitude(m);
    } catch (const MoveFormatError &) {
      return std::size_t{0};
    }
  };
  auto fail = [&](Player p, const std::string &m, const std::string &why, MoveRecord mr) {
    rec.illegal = true;
    rec.offender = p;
    rec.reason = why;
    rec.run.push_back({p, m});
    rec.moves.push_back(mr);
  };
  for (std::size_t t = 0; t < opt.max_ticks && !rec.illegal; ++t) {
    rec.ticks = t + 1;
    VectorRunView view(rec.run);
    bool env_moved = false;
    for (const auto &m : env.act(st, view, t)) {
      auto r = check_move(st, {Player::Bot, m});
      MoveRecord mr;
      mr.tick = t;
      mr.magnitude = safe_magnitude(m);
      mr.background = background;
      if (!r.legal) {
        if (opt.clean_environment) {
          rec.rejected.push_back(m);
          continue;
        }
        fail(Player::Bot, m, r.reason, mr);
        break;
      }
      mr.antecedent = r.antecedent;
      mr.replicative = r.replicative;
      mr.focused = r.focused;
      background = std::max(background, mr.magnitude);
      last_bot = t;
      env_moved = true;
      rec.run.push_back({Player::Bot, m});
      rec.moves.push_back(mr);
      st = std::move(r.next);
    }
    if (rec.illegal) break;
    Action a = machine.step(view);
    std::size_t scratch = machine.scratch_size();
    rec.space.push_back({t, background, scratch});
    rec.meters.space = std::max(rec.meters.space, scratch);
    if (a.emit) {
      auto r = check_move(st, {Player::Top, a.move});
      MoveRecord mr;
      mr.tick = t;
      mr.magnitude = safe_magnitude(a.move);
      mr.background = background;
      mr.timecost = t - last_bot.value_or(0);
      if (!r.legal) {
        fail(Player::Top, a.move, r.reason, mr);
        break;
      }
      mr.antecedent = r.antecedent;
      mr.replicative = r.replicative;
      mr.focused = r.focused;
      rec.meters.amplitude = std::max(rec.meters.amplitude, mr.magnitude);
      rec.meters.time = std::max(rec.meters.time, mr.timecost);
      rec.run.push_back({Player::Top, a.move});
      rec.moves.push_back(mr);
      st = std::move(r.next);
    }
    if (!env_moved && !a.emit && env.done()) {
      if (++idle >= opt.idle_ticks) break;
    } else {
      idle = 0;
    }
  }
  rec.meters.background = background;
  rec.final_state = st;
  rec.flags = machine.flags();
  rec.winner = rec.illegal ? opponent(rec.offender) : wn(st, I);
  return rec;
}

bool check_amplitude(const RunRecord &rec, const Bound &h) {
  if (rec.illegal && rec.offender == Player::Bot) return true;
  for (std::size_t i = 0; i < rec.run.size(); ++i)
    if (rec.run[i].player == Player::Top && rec.moves[i].magnitude > h(rec.moves[i].background)) return false;
  return true;
}

WellBehavedReport well_behaved_monitor(const RunRecord &rec, std::size_t replication_cap) {
  WellBehavedReport out;
  for (std::size_t i = 0; i < rec.run.size(); ++i) {
    if (rec.run[i].player != Player::Top || !rec.moves[i].antecedent) continue;
    if (rec.moves[i].replicative) ++out.replications;
    else if (!rec.moves[i].focused) ++out.unfocused;
  }
  out.replications_within_cap = out.replications <= replication_cap;
  out.focused = out.unfocused == 0;
  return out;
}

Bound unarify(const NaryBound &h, std::size_t arity) {
  return [h, arity](std::size_t l) { return h(std::vector<std::size_t>(arity, l)); };
}

bool tricomplexity(const RunRecord &rec, const Bound &amplitude, const Bound &space, const Bound &time) {
  if (rec.illegal && rec.offender == Player::Bot) return true;
  for (std::size_t i = 0; i < rec.run.size(); ++i) {
    if (rec.run[i].player != Player::Top) continue;
    const auto &m = rec.moves[i];
    if (m.magnitude > amplitude(m.background) || m.timecost > time(m.background)) return false;
  }
  for (const auto &s : rec.space)
    if (s.scratch > space(s.background)) return false;
  return true;
}

}  // namespace cl12
