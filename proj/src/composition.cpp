#include "cl12/composition.hpp"

#include <algorithm>
#include <sstream>

namespace cl12 {

namespace {

constexpr std::size_t kMaxRounds = 100000;
constexpr std::size_t kMaxStall = 64;

struct KMove {
  bool consequent = false;
  bool replicative = false;
  int member = -1;
  std::string address;
  std::string rest;
};

std::optional<KMove> parse_k_move(const std::string &m) {
  KMove k;
  if (m.rfind("1.", 0) == 0) {
    k.consequent = true;
    k.rest = m.substr(2);
    return k;
  }
  if (m.rfind("0.", 0) != 0) return std::nullopt;
  auto d = m.find('.', 2);
  if (d == std::string::npos || d == 2) return std::nullopt;
  for (std::size_t i = 2; i < d; ++i)
    if (m[i] < '0' || m[i] > '9') return std::nullopt;
  k.member = std::stoi(m.substr(2, d - 2));
  if (d + 1 < m.size() && m[d + 1] == ':') {
    k.replicative = true;
    k.address = m.substr(d + 2);
    return k;
  }
  auto e = m.find('.', d + 1);
  if (e == std::string::npos) return std::nullopt;
  k.address = m.substr(d + 1, e - d - 1);
  k.rest = m.substr(e + 1);
  return k;
}

std::string member_prefix(int member, const std::string &address) {
  return "0." + std::to_string(member) + "." + address + ".";
}

std::vector<std::unique_ptr<Strategy>> clone_all(const std::vector<const Strategy *> &v) {
  std::vector<std::unique_ptr<Strategy>> out;
  for (const auto *s : v) {
    if (!s) throw CompositionError("missing antecedent solution");
    out.push_back(s->clone());
  }
  return out;
}

}  // namespace

Action TableSolution::step(const RunView &run) {
  if (done_) return Action::wait();
  std::vector<std::string> in;
  for (std::size_t i = 0; i < run.size() && in.size() < arity_; ++i) {
    if (run.label(i) != Player::Bot) continue;
    std::string m = run.move(i);
    if (m.size() > 1 && m[0] == '#') in.push_back(m.substr(1));
  }
  if (in.size() < arity_) return Action::wait();
  done_ = true;
  auto it = table_.find(in);
  if (it != table_.end()) return Action::make("#" + it->second);
  if (fallback_) return Action::make("#" + *fallback_);
  std::string key;
  for (const auto &c : in) key += (key.empty() ? "" : " ") + c;
  flags_.push_back("no table entry for " + key);
  return Action::wait();
}

TableSolution table_from_function(const Interpretation &I, const std::string &f, std::size_t arity) {
  TableSolution::Table t;
  std::vector<Element> args(arity, 0);
  for (;;) {
    std::vector<std::string> key;
    for (auto a : args) key.push_back(numeral_of(a));
    t[key] = numeral_of(I.apply(f, args));
    std::size_t i = 0;
    while (i < arity && ++args[i] == I.size()) args[i++] = 0;
    if (i == arity) break;
  }
  return TableSolution(arity, std::move(t));
}

TableSolution table_from_json(const Json &j) {
  std::size_t arity = j.at("arity").get<std::size_t>();
  TableSolution::Table t;
  const Json entries = j.value("table", Json::object());
  for (const auto &[k, v] : entries.items()) {
    std::istringstream in(k);
    std::vector<std::string> key;
    std::string c;
    while (in >> c) {
      if (!is_numeral(c)) throw CompositionError("table key '" + k + "' has a non-numeral");
      key.push_back(c);
    }
    if (key.size() != arity) throw CompositionError("table key '" + k + "' has the wrong arity");
    std::string out = v.get<std::string>();
    if (!is_numeral(out)) throw CompositionError("table value '" + out + "' is not a numeral");
    t[key] = out;
  }
  std::optional<std::string> fallback;
  if (j.contains("default")) fallback = j.at("default").get<std::string>();
  return TableSolution(arity, std::move(t), fallback);
}

Json table_to_json(const TableSolution &t) {
  Json entries = Json::object();
  for (const auto &[k, v] : t.table()) {
    std::string key;
    for (const auto &c : k) key += (key.empty() ? "" : " ") + c;
    entries[key] = v;
  }
  Json j{{"arity", t.arity()}, {"table", entries}};
  if (t.fallback()) j["default"] = *t.fallback();
  return j;
}

std::size_t compute_b(const Proof &p) {
  if (p.empty()) throw CompositionError("empty proof");
  const Sequent &root = p.back().seq;
  std::size_t b = free_vars(root).size() + choice_count(root.succedent);
  for (const auto &a : root.antecedent) b += choice_count(a);
  for (const auto &st : p)
    if (st.rule.kind == RuleKind::Replicate) b += choice_count(st.seq.antecedent[st.rule.member]) + 1;
  return b;
}

// ---------------------------------------------------------------- direct mode

DirectComposition::DirectComposition(const Strategy &k, const std::vector<const Strategy *> &solutions,
                                     const Sequent &s)
    : seq_(s), k_(k.clone()), initial_(clone_all(solutions)), k_state_(initial_state(s)),
      real_pending_(free_vars(s.succedent)) {
  if (initial_.size() != s.antecedent.size())
    throw CompositionError("expected " + std::to_string(s.antecedent.size()) + " antecedent solutions, got " +
                           std::to_string(initial_.size()));
}

DirectComposition::DirectComposition(const DirectComposition &o)
    : Strategy(o), seq_(o.seq_), k_(o.k_->clone()), k_run_(o.k_run_), k_state_(o.k_state_),
      real_pending_(o.real_pending_), real_closure_(o.real_closure_), closed_(o.closed_), cursor_(o.cursor_),
      aborted_(o.aborted_), flags_(o.flags_) {
  for (const auto &m : o.initial_) initial_.push_back(m->clone());
  for (const auto &[key, c] : o.copies_) copies_[key] = Copy{c.machine->clone(), c.run};
}

const Run *DirectComposition::copy_run(int member, const std::string &address) const {
  auto it = copies_.find({member, address});
  return it == copies_.end() ? nullptr : &it->second.run;
}

std::size_t DirectComposition::scratch_size() const {
  std::size_t n = k_->scratch_size() + k_run_.size();
  for (const auto &[key, c] : copies_) n += c.machine->scratch_size() + c.run.size();
  return n;
}

void DirectComposition::abort(const std::string &why) {
  aborted_ = true;
  flags_.push_back("abort: " + why);
}

bool DirectComposition::absorb(const RunView &run) {
  auto close = [&] {
    std::map<std::string, std::string> sigma;
    for (const auto &v : free_vars(seq_)) {
      auto it = real_closure_.find(v);
      sigma[v] = it == real_closure_.end() ? "0" : it->second;
      LabMove lm{Player::Bot, "#" + sigma[v]};
      auto r = check_move(k_state_, lm);
      if (!r.legal) {
        abort("closure move rejected: " + r.reason);
        return;
      }
      k_state_ = std::move(r.next);
      k_run_.push_back(lm);
    }
    for (std::size_t i = 0; i < initial_.size(); ++i) {
      Copy c{initial_[i]->clone(), {}};
      for (const auto &v : free_vars(seq_.antecedent[i])) c.run.push_back({Player::Bot, "#" + sigma[v]});
      copies_[{static_cast<int>(i), ""}] = std::move(c);
    }
    closed_ = true;
  };
  if (!closed_ && real_pending_.empty()) close();
  for (; cursor_ < run.size() && !aborted_; ++cursor_) {
    if (run.label(cursor_) != Player::Bot) continue;
    std::string m = run.move(cursor_);
    if (!closed_) {
      if (m.size() < 2 || m[0] != '#') {
        abort("expected a closure constant, got " + m);
        return false;
      }
      real_closure_[real_pending_[real_closure_.size()]] = m.substr(1);
      if (real_closure_.size() == real_pending_.size()) close();
      continue;
    }
    LabMove lm{Player::Bot, "1." + m};
    auto r = check_move(k_state_, lm);
    if (!r.legal) {
      abort("environment move " + m + " is illegal for K: " + r.reason);
      return false;
    }
    k_state_ = std::move(r.next);
    k_run_.push_back(lm);
  }
  return closed_ && !aborted_;
}

bool DirectComposition::k_move(const std::string &m) {
  LabMove lm{Player::Top, m};
  auto r = check_move(k_state_, lm);
  auto km = parse_k_move(m);
  if (!r.legal || !km) {
    abort("K made an illegal move " + m + (r.legal ? "" : ": " + r.reason));
    return false;
  }
  k_state_ = std::move(r.next);
  k_run_.push_back(lm);
  if (km->consequent) return true;
  if (km->replicative) {
    auto it = copies_.find({km->member, km->address});
    if (it == copies_.end()) {
      abort("replication of an unknown copy: " + m);
      return false;
    }
    Copy left = std::move(it->second);
    copies_.erase(it);
    Copy right{left.machine->clone(), left.run};
    copies_[{km->member, km->address + "0"}] = std::move(left);
    copies_[{km->member, km->address + "1"}] = std::move(right);
    return false;
  }
  for (auto &[key, c] : copies_)
    if (key.first == km->member && is_address_prefix(km->address, key.second))
      c.run.push_back({Player::Bot, km->rest});
  return false;
}

Action DirectComposition::step(const RunView &run) {
  if (aborted_ || !absorb(run)) return Action::wait();
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    Action a = k_->step(VectorRunView(k_run_));
    if (a.emit) {
      bool consequent = k_move(a.move);
      if (aborted_) return Action::wait();
      if (consequent) return Action::make(a.move.substr(2));
      continue;
    }
    bool moved = false;
    for (auto &[key, c] : copies_) {
      Action b = c.machine->step(VectorRunView(c.run));
      if (!b.emit) continue;
      LabMove lm{Player::Bot, member_prefix(key.first, key.second) + b.move};
      auto r = check_move(k_state_, lm);
      if (!r.legal) {
        abort("solution " + std::to_string(key.first) + " made an illegal move " + b.move + ": " + r.reason);
        return Action::wait();
      }
      k_state_ = std::move(r.next);
      c.run.push_back({Player::Top, b.move});
      k_run_.push_back(lm);
      moved = true;
      break;
    }
    if (!moved) return Action::wait();
  }
  flags_.push_back("round limit reached");
  return Action::wait();
}

// ---------------------------------------------------------------- recompute mode

// Lazy view of the global history as one machine sees it: relevant entries below a position bound.
class RecomputeComposition::HistoryView : public RunView {
public:
  HistoryView(RecomputeComposition &c, MachineId viewer, std::size_t limit) : c_(c), viewer_(std::move(viewer)), limit_(limit) {
    for (std::size_t p = 0; p < limit && p < c_.history_.size(); ++p)
      if (c_.relevant_to(c_.history_[p], viewer_)) positions_.push_back(p);
  }
  std::size_t size() const override { return positions_.size(); }
  Player label(std::size_t i) const override {
    return c_.authored_by(c_.history_[positions_[i]], viewer_) ? Player::Top : Player::Bot;
  }
  std::string move(std::size_t i) const override { return c_.entry_text(positions_[i], viewer_, limit_); }

private:
  RecomputeComposition &c_;
  MachineId viewer_;
  std::size_t limit_;
  std::vector<std::size_t> positions_;
};

RecomputeComposition::RecomputeComposition(const Strategy &k, const std::vector<const Strategy *> &solutions,
                                           const Sequent &s, std::size_t b)
    : seq_(s), b_(b), k0_(k.clone()), n0_(clone_all(solutions)), k_state_(initial_state(s)) {
  if (!free_vars(s).empty()) throw CompositionError("recompute mode needs a sequent without free variables");
  if (n0_.size() != s.antecedent.size())
    throw CompositionError("expected " + std::to_string(s.antecedent.size()) + " antecedent solutions, got " +
                           std::to_string(n0_.size()));
  stats_.b = b;
}

RecomputeComposition::RecomputeComposition(const RecomputeComposition &o)
    : Strategy(o), seq_(o.seq_), b_(o.b_), k0_(o.k0_->clone()), history_(o.history_), fresh_(true),
      k_state_(o.k_state_), real_env_(o.real_env_), stats_(o.stats_), aborted_(o.aborted_), flags_(o.flags_) {
  for (const auto &m : o.n0_) n0_.push_back(m->clone());
}

std::size_t RecomputeComposition::scratch_size() const {
  std::size_t n = history_.size() + (k_sketch_.machine ? k_sketch_.machine->scratch_size() : 0);
  for (const auto &[key, sk] : n_sketches_) n += 1 + sk.machine->scratch_size();
  return n;
}

void RecomputeComposition::violation(const std::string &what) {
  stats_.violations.push_back(what);
  flags_.push_back("assertion: " + what);
}

void RecomputeComposition::abort(const std::string &why) {
  aborted_ = true;
  flags_.push_back("abort: " + why);
}

std::unique_ptr<Strategy> RecomputeComposition::fresh(const MachineId &g) const {
  return g.k ? k0_->clone() : n0_.at(g.member)->clone();
}

bool RecomputeComposition::authored_by(const HistoryEntry &e, const MachineId &g) const {
  if (g.k) return e.author == HistoryEntry::Author::K;
  return e.author == HistoryEntry::Author::N && e.member == g.member && is_address_prefix(e.address, g.address);
}

bool RecomputeComposition::relevant_to(const HistoryEntry &e, const MachineId &g) const {
  if (g.k || authored_by(e, g)) return true;
  return e.author == HistoryEntry::Author::K && !e.replicative && e.member == g.member &&
         is_address_prefix(e.address, g.address);
}

std::size_t RecomputeComposition::hindex(const MachineId &g, std::size_t m) const {
  std::size_t seen = 0;
  for (std::size_t p = 0; p < history_.size(); ++p)
    if (authored_by(history_[p], g) && seen++ == m) return p;
  return history_.size();
}

std::size_t RecomputeComposition::count_moves(const MachineId &g) const {
  std::size_t n = 0;
  for (const auto &e : history_)
    if (authored_by(e, g)) ++n;
  return n;
}

std::vector<RecomputeComposition::CopyKey> RecomputeComposition::live_copies() const {
  std::vector<CopyKey> out;
  for (std::size_t i = 0; i < n0_.size(); ++i) out.push_back({static_cast<int>(i), ""});
  for (const auto &e : history_) {
    if (e.author != HistoryEntry::Author::K || !e.replicative) continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      if (out[j] == CopyKey{e.member, e.address}) {
        out[j].second += "0";
        out.insert(out.begin() + j + 1, {e.member, e.address + "1"});
        break;
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string RecomputeComposition::entry_text(std::size_t pos, const MachineId &viewer, std::size_t caller_index) {
  const HistoryEntry &e = history_[pos];
  if (e.author == HistoryEntry::Author::Env) {
    std::size_t k = 0;
    for (std::size_t p = 0; p < pos; ++p)
      if (history_[p].author == HistoryEntry::Author::Env) ++k;
    // Environment moves are read off the real run.
    return "1." + real_env_.at(k);
  }
  MachineId author = e.author == HistoryEntry::Author::K ? MachineId{} : MachineId{false, e.member, e.address};
  std::size_t x = 0;
  for (std::size_t p = 0; p < pos; ++p)
    if (authored_by(history_[p], author)) ++x;
  if (author.k) {
    if (viewer.k) return fetch_text(author, x, 1, caller_index);
    // Strip the component address K used: "0.i.u."
    std::size_t skip = member_prefix(e.member, e.address).size();
    return fetch_text(author, x, skip + 1, caller_index);
  }
  if (viewer.k) return member_prefix(e.member, e.address) + fetch_text(author, x, 1, caller_index);
  return fetch_text(author, x, 1, caller_index);
}

std::string RecomputeComposition::fetch_text(const MachineId &g, std::size_t x, std::size_t from,
                                             std::size_t caller_index) {
  std::size_t size = history_.at(hindex(g, x)).size;
  std::string out;
  for (std::size_t y = from; y <= size; ++y) out += fetch_at(g, x, y, caller_index);
  return out;
}

char RecomputeComposition::fetch_symbol(const MachineId &g, std::size_t x, std::size_t y) {
  return fetch_at(g, x, y, history_.size() + 1);
}

char RecomputeComposition::fetch_at(const MachineId &g, std::size_t x, std::size_t y, std::size_t caller_index) {
  std::size_t p = hindex(g, x);
  if (p >= history_.size()) throw CompositionError("fetch of a move absent from the history");
  if (p >= caller_index) violation("fetch index " + std::to_string(p) + " not below caller " + std::to_string(caller_index));
  ++stats_.fetch_calls;
  index_stack_.push_back(p);
  stats_.max_depth = std::max(stats_.max_depth, index_stack_.size());
  if (index_stack_.size() > b_) violation("fetch depth exceeds b");
  std::string text = replay_move(g, x, p);
  index_stack_.pop_back();
  if (y == 0 || y > text.size()) return '\0';
  return text[y - 1];
}

Action RecomputeComposition::step_at(const MachineId &g, Strategy &m, std::size_t index) {
  ++stats_.update_calls;
  stats_.max_hindex = std::max(stats_.max_hindex, index);
  if (index > b_) violation("update index " + std::to_string(index) + " exceeds b");
  if (!index_stack_.empty() && index > index_stack_.back())
    violation("update index " + std::to_string(index) + " above its fetch " + std::to_string(index_stack_.back()));
  HistoryView view(*this, g, index);
  return m.step(view);
}

std::string RecomputeComposition::replay_move(const MachineId &g, std::size_t x, std::size_t index) {
  auto m = fresh(g);
  std::size_t made = 0, stall = 0;
  for (;;) {
    std::size_t at = hindex(g, made);
    Action a = step_at(g, *m, at);
    if (!a.emit) {
      if (++stall > kMaxStall) throw CompositionError("replay divergence: machine stalled before a recorded move");
      continue;
    }
    stall = 0;
    if (at >= history_.size() || a.move.size() != history_[at].size)
      throw CompositionError("replay divergence: move size differs from the history");
    if (made == x) {
      if (at != index) throw CompositionError("replay divergence: move position differs");
      return a.move;
    }
    ++made;
  }
}

std::optional<std::string> RecomputeComposition::update_sketch(const MachineId &g, Sketch &sk) {
  std::size_t recorded = count_moves(g), stall = 0;
  while (sk.moves_made < recorded) {
    std::size_t at = hindex(g, sk.moves_made);
    Action a = step_at(g, *sk.machine, at);
    if (!a.emit) {
      if (++stall > kMaxStall) throw CompositionError("replay divergence: sketch stalled before a recorded move");
      continue;
    }
    stall = 0;
    if (a.move.size() != history_[at].size) throw CompositionError("replay divergence: move size differs");
    ++sk.moves_made;
  }
  Action a = step_at(g, *sk.machine, history_.size());
  sk.delta = a.emit ? a.move.size() : 0;
  if (!a.emit) return std::nullopt;
  ++sk.moves_made;
  sk.pending = a.move.size();
  return a.move;
}

void RecomputeComposition::initialize() {
  k_sketch_ = Sketch{fresh(MachineId{}), 0, 0, 0, -2, {}};
  n_sketches_.clear();
  for (const auto &key : live_copies()) n_sketches_[key] = Sketch{fresh({false, key.first, key.second}), 0, 0, 0, -2, {}};
  fresh_ = false;
  ++stats_.iterations;
}

void RecomputeComposition::restart() {
  if (!k_sketch_.output.empty()) ++stats_.retained_strings;
  for (const auto &[key, sk] : n_sketches_)
    if (!sk.output.empty()) ++stats_.retained_strings;
  ++stats_.restarts;
  if (stats_.restarts > b_) violation("restarts exceed b");
  stats_.history_max = std::max(stats_.history_max, history_.size());
  if (history_.size() > b_) violation("history length exceeds b");
  fresh_ = true;
}

Action RecomputeComposition::step(const RunView &run) {
  if (aborted_) return Action::wait();
  // Stage 2: new environment moves.
  std::vector<std::string> env;
  for (std::size_t i = 0; i < run.size(); ++i)
    if (run.label(i) == Player::Bot) env.push_back(run.move(i));
  for (std::size_t i = real_env_.size(); i < env.size(); ++i) {
    real_env_.push_back(env[i]);
    auto r = check_move(k_state_, {Player::Bot, "1." + env[i]});
    if (!r.legal) {
      abort("environment move " + env[i] + " is illegal for K: " + r.reason);
      return Action::wait();
    }
    k_state_ = std::move(r.next);
    history_.push_back({HistoryEntry::Author::Env, env[i].size(), -1, "", false});
    restart();
  }
  try {
    for (std::size_t round = 0; round < kMaxRounds; ++round) {
      if (fresh_) initialize();
      // Stage 3: K.
      if (auto m = update_sketch(MachineId{}, k_sketch_)) {
        k_sketch_.output = *m;
        auto km = parse_k_move(*m);
        auto r = check_move(k_state_, {Player::Top, *m});
        if (!r.legal || !km) {
          abort("K made an illegal move " + *m + (r.legal ? "" : ": " + r.reason));
          return Action::wait();
        }
        k_state_ = std::move(r.next);
        k_sketch_.tag = km->consequent ? -1 : km->member;
        history_.push_back({HistoryEntry::Author::K, m->size(), km->consequent ? -1 : km->member, km->address,
                            km->replicative});
        k_sketch_.output.clear();
        if (!km->consequent) {
          restart();
          continue;
        }
        // Copy symbols 3..Y of K's consequent move to the real run.
        std::size_t x = count_moves(MachineId{}) - 1;
        std::string out = fetch_text(MachineId{}, x, 3, history_.size());
        if (out != km->rest) throw CompositionError("replay divergence: fetched move differs from K's move");
        restart();
        return Action::make(out);
      }
      // Stages 3+i: the live copies of each solution.
      bool moved = false;
      for (auto &[key, sk] : n_sketches_) {
        MachineId g{false, key.first, key.second};
        auto m = update_sketch(g, sk);
        if (!m) continue;
        sk.output = *m;
        auto r = check_move(k_state_, {Player::Bot, member_prefix(key.first, key.second) + *m});
        if (!r.legal) {
          abort("solution " + std::to_string(key.first) + " made an illegal move " + *m + ": " + r.reason);
          return Action::wait();
        }
        k_state_ = std::move(r.next);
        history_.push_back({HistoryEntry::Author::N, m->size(), key.first, key.second, false});
        sk.output.clear();
        restart();
        moved = true;
        break;
      }
      if (!moved) return Action::wait();
    }
  } catch (const CompositionError &e) {
    violation(e.what());
    abort(e.what());
    return Action::wait();
  }
  flags_.push_back("round limit reached");
  return Action::wait();
}

std::unique_ptr<DirectComposition> compose_direct(const Strategy &k, const std::vector<const Strategy *> &solutions,
                                                  const Sequent &s) {
  return std::make_unique<DirectComposition>(k, solutions, s);
}

std::unique_ptr<RecomputeComposition> compose_recompute(const Strategy &k,
                                                        const std::vector<const Strategy *> &solutions,
                                                        const Sequent &s, std::size_t b) {
  return std::make_unique<RecomputeComposition>(k, solutions, s, b);
}

}  // namespace cl12
