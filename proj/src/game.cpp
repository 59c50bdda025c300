#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cl12/semantics.hpp"

namespace cl12 {

char player_char(Player p) { return p == Player::Top ? 'T' : 'B'; }
std::string player_name(Player p) { return p == Player::Top ? "top" : "bottom"; }

std::string to_string(const LabMove &m) { return std::string(1, player_char(m.player)) + m.move; }

std::string to_string(const Run &r) {
  std::string s = "<";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ", ";
    s += to_string(r[i]);
  }
  return s + ">";
}

std::string serialize_run(const Run &r) {
  std::string s;
  for (const auto &m : r) s += std::string(1, player_char(m.player)) + " " + m.move + "\n";
  return s;
}

Run parse_run(const std::string &text) {
  Run r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.size() < 2 || (line[0] != 'T' && line[0] != 'B') || line[1] != ' ')
      throw std::runtime_error("bad labmove line: " + line);
    r.push_back({line[0] == 'T' ? Player::Top : Player::Bot, line.substr(2)});
  }
  return r;
}

namespace {

bool all_bits(const std::string &s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

bool is_prefix(const std::string &u, const std::string &w) { return w.compare(0, u.size(), u) == 0; }

Player owner(Op op, bool swapped) {
  Player p = (op == Op::CAnd || op == Op::CAll) ? Player::Bot : Player::Top;
  return swapped ? opponent(p) : p;
}

std::optional<FormulaPtr> formula_move(const FormulaPtr &f, const std::string &m, Player mover, bool swapped,
                                       std::string &why) {
  switch (f->op) {
    case Op::And:
    case Op::Or: {
      if (m.size() < 2 || (m[0] != '0' && m[0] != '1') || m[1] != '.') {
        why = "expected a parallel prefix 0. or 1.";
        return std::nullopt;
      }
      int k = m[0] - '0';
      auto sub = formula_move(f->kids[k], m.substr(2), mover, swapped, why);
      if (!sub) return std::nullopt;
      return k == 0 ? Formula::binary(f->op, *sub, f->kids[1]) : Formula::binary(f->op, f->kids[0], *sub);
    }
    case Op::All:
    case Op::Ex: {
      auto sub = formula_move(f->kids[0], m, mover, swapped, why);
      if (!sub) return std::nullopt;
      return Formula::quant(f->op, f->name, *sub);
    }
    case Op::CAnd:
    case Op::COr:
      if (m != "0" && m != "1") {
        why = "expected a choice 0 or 1";
        return std::nullopt;
      }
      if (owner(f->op, swapped) != mover) {
        why = "choice belongs to the other player";
        return std::nullopt;
      }
      return f->kids[m[0] - '0'];
    case Op::CAll:
    case Op::CEx:
      if (m.size() < 2 || m[0] != '#' || !is_numeral(m.substr(1))) {
        why = "expected #c with c a binary numeral";
        return std::nullopt;
      }
      if (owner(f->op, swapped) != mover) {
        why = "quantifier choice belongs to the other player";
        return std::nullopt;
      }
      return substitute(f->kids[0], f->name, Term::constant(m.substr(1)));
    default: why = "no moves are available in an elementary formula"; return std::nullopt;
  }
}

void formula_moves(const FormulaPtr &f, Player mover, bool swapped, const std::vector<std::string> &pool,
                   const std::string &prefix, std::vector<std::string> &out) {
  switch (f->op) {
    case Op::And:
    case Op::Or:
      formula_moves(f->kids[0], mover, swapped, pool, prefix + "0.", out);
      formula_moves(f->kids[1], mover, swapped, pool, prefix + "1.", out);
      return;
    case Op::All:
    case Op::Ex: formula_moves(f->kids[0], mover, swapped, pool, prefix, out); return;
    case Op::CAnd:
    case Op::COr:
      if (owner(f->op, swapped) == mover) {
        out.push_back(prefix + "0");
        out.push_back(prefix + "1");
      }
      return;
    case Op::CAll:
    case Op::CEx:
      if (owner(f->op, swapped) == mover)
        for (const auto &c : pool) out.push_back(prefix + "#" + c);
      return;
    default: return;
  }
}

Tree single_leaf(const FormulaPtr &f) { return Tree{{Leaf{"", f}}}; }

// Applies a tree move ("u.beta" or ":w"); repl_owner is the player allowed to replicate.
bool tree_move(Tree &t, const std::string &m, Player mover, bool swapped, Player repl_owner, MoveResult &res) {
  if (!m.empty() && m[0] == ':') {
    std::string w = m.substr(1);
    res.replicative = true;
    if (!all_bits(w)) {
      res.reason = "replicative move address must be a bit string";
      return false;
    }
    if (mover != repl_owner) {
      res.reason = "replication belongs to the other player";
      return false;
    }
    auto it = std::find_if(t.leaves.begin(), t.leaves.end(), [&](const Leaf &l) { return l.address == w; });
    if (it == t.leaves.end()) {
      res.reason = "no leaf at address '" + w + "'";
      return false;
    }
    FormulaPtr f = it->formula;
    it = t.leaves.erase(it);
    t.leaves.insert(it, {Leaf{w + "0", f}, Leaf{w + "1", f}});
    return true;
  }
  auto dot = m.find('.');
  if (dot == std::string::npos) {
    res.reason = "tree move needs 'u.' or ':w'";
    return false;
  }
  std::string u = m.substr(0, dot), beta = m.substr(dot + 1);
  if (!all_bits(u)) {
    res.reason = "tree address must be a bit string";
    return false;
  }
  bool any = false;
  res.focused = false;
  for (auto &l : t.leaves) {
    if (!is_prefix(u, l.address)) continue;
    any = true;
    if (l.address == u) res.focused = true;
    auto nf = formula_move(l.formula, beta, mover, swapped, res.reason);
    if (!nf) return false;
    l.formula = *nf;
  }
  if (!any) {
    res.reason = "no leaf extends address '" + u + "'";
    return false;
  }
  return true;
}

bool parse_index(const std::string &s, std::size_t &out) {
  if (s.empty() || s.size() > 6) return false;
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  out = std::stoul(s);
  return true;
}

void close_variable(GameState &st, const std::string &c) {
  std::string x = st.pending.front();
  st.pending.erase(st.pending.begin());
  st.valuation[x] = c;
  auto t = Term::constant(c);
  for (auto &tree : st.antecedent)
    for (auto &l : tree.leaves) l.formula = substitute(l.formula, x, t);
  if (st.succedent) st.succedent = substitute(st.succedent, x, t);
}

}  // namespace

std::optional<FormulaPtr> formula_after_move(const FormulaPtr &f, const std::string &m, Player mover, bool swapped,
                                             std::string *why) {
  std::string w;
  auto r = formula_move(f, m, mover, swapped, w);
  if (why) *why = w;
  return r;
}

bool is_bit_string(const std::string &s) { return all_bits(s); }
bool is_address_prefix(const std::string &u, const std::string &w) { return is_prefix(u, w); }

GameState initial_state(const Sequent &s) {
  GameState st;
  st.shape = Shape::Sequent;
  st.origin = s;
  st.pending = free_vars(s);
  for (const auto &a : s.antecedent) st.antecedent.push_back(single_leaf(a));
  st.succedent = s.succedent;
  return st;
}

GameState initial_formula_state(const FormulaPtr &f) {
  GameState st;
  st.shape = Shape::Formula;
  st.origin = Sequent{{}, f};
  st.pending = free_vars(f);
  st.succedent = f;
  return st;
}

GameState initial_branching_state(const FormulaPtr &f) {
  GameState st;
  st.shape = Shape::Branching;
  st.origin = Sequent{{}, f};
  st.pending = free_vars(f);
  st.antecedent.push_back(single_leaf(f));
  return st;
}

MoveResult check_move(const GameState &st, const LabMove &lm) {
  MoveResult res;
  res.next = st;
  const std::string &m = lm.move;
  if (!st.pending.empty()) {
    if (lm.player != Player::Bot) {
      res.reason = "only the environment moves before closure is complete";
      return res;
    }
    if (m.size() < 2 || m[0] != '#' || !is_numeral(m.substr(1))) {
      res.reason = "closure move must be #c";
      return res;
    }
    close_variable(res.next, m.substr(1));
    res.legal = true;
    return res;
  }
  switch (st.shape) {
    case Shape::Formula: {
      auto nf = formula_move(st.succedent, m, lm.player, false, res.reason);
      if (!nf) return res;
      res.next.succedent = *nf;
      res.legal = true;
      return res;
    }
    case Shape::Branching:
      res.legal = tree_move(res.next.antecedent[0], m, lm.player, false, Player::Bot, res);
      return res;
    case Shape::Sequent: break;
  }
  if (m.rfind("1.", 0) == 0) {
    auto nf = formula_move(st.succedent, m.substr(2), lm.player, false, res.reason);
    if (!nf) return res;
    res.next.succedent = *nf;
    res.legal = true;
    return res;
  }
  if (m.rfind("0.", 0) == 0) {
    res.antecedent = true;
    auto dot = m.find('.', 2);
    std::size_t i = 0;
    if (dot == std::string::npos || !parse_index(m.substr(2, dot - 2), i)) {
      res.reason = "antecedent move must start with 0.i.";
      return res;
    }
    if (i >= st.antecedent.size()) {
      res.reason = "antecedent member index out of range";
      return res;
    }
    res.legal = tree_move(res.next.antecedent[i], m.substr(dot + 1), lm.player, true, Player::Top, res);
    return res;
  }
  res.reason = "sequent move must start with 1. or 0.";
  return res;
}

ApplyResult apply_run(const GameState &st, const Run &run) {
  ApplyResult out;
  out.state = st;
  for (std::size_t k = 0; k < run.size(); ++k) {
    auto r = check_move(out.state, run[k]);
    if (!r.legal) {
      out.legal = false;
      out.offender = run[k].player;
      out.index = k;
      out.reason = r.reason;
      return out;
    }
    out.state = std::move(r.next);
  }
  out.index = run.size();
  return out;
}

FormulaPtr position_formula(const GameState &st) {
  if (!st.pending.empty()) return Formula::top();
  auto tree_formula = [](const Tree &t) {
    std::vector<FormulaPtr> fs;
    for (const auto &l : t.leaves) fs.push_back(elementarize(l.formula));
    return conjunction(fs);
  };
  switch (st.shape) {
    case Shape::Formula: return elementarize(st.succedent);
    case Shape::Branching: return tree_formula(st.antecedent[0]);
    case Shape::Sequent: break;
  }
  auto succ = elementarize(st.succedent);
  if (st.antecedent.empty()) return succ;
  std::vector<FormulaPtr> ants;
  for (const auto &t : st.antecedent) ants.push_back(tree_formula(t));
  return implies(conjunction(ants), succ);
}

Player wn(const GameState &st, const Interpretation &I) {
  if (!st.pending.empty()) return Player::Top;
  return truth(I, {}, position_formula(st)) ? Player::Top : Player::Bot;
}

Player winner(const GameState &st, const Run &run, const Interpretation &I) {
  auto r = apply_run(st, run);
  if (!r.legal) return opponent(r.offender);
  return wn(r.state, I);
}

std::string tree_to_string(const Tree &t) {
  if (t.leaves.size() == 1) return to_string(t.leaves[0].formula);
  std::function<std::string(const std::string &)> go = [&](const std::string &a) -> std::string {
    for (const auto &l : t.leaves)
      if (l.address == a) {
        const auto &f = l.formula;
        bool bare = f->op == Op::Top || f->op == Op::Bot || ((f->op == Op::Atom || f->op == Op::NegAtom) && f->name != "=");
        return bare ? to_string(f) : "(" + to_string(f) + ")";
      }
    auto wrap = [&](const std::string &b) {
      bool leaf = std::any_of(t.leaves.begin(), t.leaves.end(), [&](const Leaf &l) { return l.address == b; });
      return leaf ? go(b) : "(" + go(b) + ")";
    };
    return wrap(a + "0") + " o " + wrap(a + "1");
  };
  return go("");
}

std::string to_string(const GameState &st) {
  std::string s;
  if (!st.pending.empty()) {
    s = "[closure";
    for (const auto &x : st.pending) s += " " + x;
    s += "] ";
  }
  switch (st.shape) {
    case Shape::Formula: return s + to_string(st.succedent);
    case Shape::Branching: return s + tree_to_string(st.antecedent[0]);
    case Shape::Sequent: break;
  }
  for (std::size_t i = 0; i < st.antecedent.size(); ++i) {
    if (i) s += ", ";
    s += tree_to_string(st.antecedent[i]);
  }
  if (!st.antecedent.empty()) s += ' ';
  return s + "=> " + to_string(st.succedent);
}

namespace {

void tree_moves(const Tree &t, Player p, bool swapped, Player repl_owner, const MoveOptions &opt,
                const std::string &prefix, std::vector<std::string> &out) {
  for (const auto &l : t.leaves) {
    std::vector<std::string> ms;
    formula_moves(l.formula, p, swapped, opt.pool, "", ms);
    for (const auto &m : ms) out.push_back(prefix + l.address + "." + m);
  }
  if (opt.unfocused) {
    std::set<std::string> prefixes;
    for (const auto &l : t.leaves)
      for (std::size_t k = 0; k < l.address.size(); ++k) prefixes.insert(l.address.substr(0, k));
    for (const auto &u : prefixes) {
      std::optional<std::set<std::string>> common;
      for (const auto &l : t.leaves) {
        if (!is_prefix(u, l.address)) continue;
        std::vector<std::string> ms;
        formula_moves(l.formula, p, swapped, opt.pool, "", ms);
        std::set<std::string> s(ms.begin(), ms.end());
        if (!common) {
          common = s;
        } else {
          std::set<std::string> keep;
          std::set_intersection(common->begin(), common->end(), s.begin(), s.end(),
                                std::inserter(keep, keep.begin()));
          common = keep;
        }
      }
      if (common)
        for (const auto &m : *common) out.push_back(prefix + u + "." + m);
    }
  }
  if (opt.replications && p == repl_owner)
    for (const auto &l : t.leaves) out.push_back(prefix + ":" + l.address);
}

}  // namespace

std::vector<std::string> legal_moves(const GameState &st, Player p, const MoveOptions &opt) {
  std::vector<std::string> out;
  if (!st.pending.empty()) {
    if (p == Player::Bot)
      for (const auto &c : opt.pool) out.push_back("#" + c);
    return out;
  }
  switch (st.shape) {
    case Shape::Formula: formula_moves(st.succedent, p, false, opt.pool, "", out); return out;
    case Shape::Branching: tree_moves(st.antecedent[0], p, false, Player::Bot, opt, "", out); return out;
    case Shape::Sequent: break;
  }
  for (std::size_t i = 0; i < st.antecedent.size(); ++i)
    tree_moves(st.antecedent[i], p, true, Player::Top, opt, "0." + std::to_string(i) + ".", out);
  formula_moves(st.succedent, p, false, opt.pool, "1.", out);
  return out;
}

Run projection_component(const Run &run, int i) {
  Run out;
  std::string pre = std::to_string(i) + ".";
  for (const auto &m : run)
    if (m.move.rfind(pre, 0) == 0) out.push_back({m.player, m.move.substr(pre.size())});
  return out;
}

Run projection_bits(const Run &run, const std::string &v) {
  Run out;
  for (const auto &m : run) {
    auto dot = m.move.find('.');
    if (dot == std::string::npos) continue;
    std::string u = m.move.substr(0, dot);
    if (all_bits(u) && is_prefix(u, v)) out.push_back({m.player, m.move.substr(dot + 1)});
  }
  return out;
}

bool is_delay(const Run &phi, const Run &gamma, Player p) {
  auto sub = [](const Run &r, Player q) {
    std::vector<std::string> out;
    for (const auto &m : r)
      if (m.player == q) out.push_back(m.move);
    return out;
  };
  if (sub(phi, Player::Top) != sub(gamma, Player::Top) || sub(phi, Player::Bot) != sub(gamma, Player::Bot))
    return false;
  auto positions = [](const Run &r, Player q) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].player == q) out.push_back(i);
    return out;
  };
  auto gp = positions(gamma, p), gq = positions(gamma, opponent(p));
  auto fp = positions(phi, p), fq = positions(phi, opponent(p));
  for (std::size_t n = 0; n < gp.size(); ++n)
    for (std::size_t k = 0; k < gq.size(); ++k)
      if (gp[n] > gq[k] && !(fp[n] > fq[k])) return false;
  return true;
}

std::vector<CensusEntry> legal_runs(const GameState &st, const Interpretation &I, const MoveOptions &opt,
                                    std::size_t max_runs) {
  std::vector<CensusEntry> out;
  Run cur;
  std::function<void(const GameState &)> go = [&](const GameState &s) {
    if (out.size() >= max_runs) throw BudgetExceeded("more than " + std::to_string(max_runs) + " legal runs");
    out.push_back({cur, wn(s, I)});
    for (Player p : {Player::Top, Player::Bot})
      for (const auto &m : legal_moves(s, p, opt)) {
        auto r = check_move(s, {p, m});
        if (!r.legal) continue;
        cur.push_back({p, m});
        go(r.next);
        cur.pop_back();
      }
  };
  go(st);
  return out;
}

bool winnable(const GameState &st, const Interpretation &I, const WinnableOptions &opt) {
  std::unordered_map<std::string, bool> memo;
  std::size_t steps = 0;
  MoveOptions mo;
  mo.pool = opt.pool;
  auto moves = [&](const GameState &s, Player p) {
    std::vector<std::string> ms;
    for (auto &m : legal_moves(s, p, mo)) {
      if (m.find(':') != std::string::npos) {
        // Per-tree replication budget: a tree with n leaves has seen n-1 replications.
        std::size_t i = 0;
        if (s.shape == Shape::Sequent) i = std::stoul(m.substr(2, m.find('.', 2) - 2));
        if (static_cast<int>(s.antecedent[i].leaves.size()) - 1 >= opt.replication_budget) continue;
      }
      ms.push_back(std::move(m));
    }
    return ms;
  };
  std::function<bool(const GameState &)> W = [&](const GameState &s) -> bool {
    if (++steps > opt.step_budget) throw BudgetExceeded("winnability search");
    auto key = to_string(s);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool result = false;
    for (const auto &m : moves(s, Player::Top)) {
      auto r = check_move(s, {Player::Top, m});
      if (r.legal && W(r.next)) {
        result = true;
        break;
      }
    }
    if (!result && wn(s, I) == Player::Top) {
      result = true;
      for (const auto &m : moves(s, Player::Bot)) {
        auto r = check_move(s, {Player::Bot, m});
        if (r.legal && !W(r.next)) {
          result = false;
          break;
        }
      }
    }
    memo[key] = result;
    return result;
  };
  return W(st);
}

}  // namespace cl12
