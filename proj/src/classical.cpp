#include "cl12/classical.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <unordered_map>

namespace cl12 {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Valid: return "valid";
    case VerdictKind::Invalid: return "invalid";
    default: return "unknown";
  }
}

namespace {

struct OutOfBudget {};

struct Symbols {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> predicates;
  bool quantified = false;
  bool terms = false;
};

void collect_term(const TermPtr &t, Symbols &s) {
  s.terms = true;
  if (t->kind == Term::Kind::App) s.functions[t->name] = t->args.size();
  for (const auto &a : t->args) collect_term(a, s);
}

void collect(const FormulaPtr &f, Symbols &s) {
  if (f->op == Op::Atom || f->op == Op::NegAtom) {
    if (f->name != "=") s.predicates[f->name] = f->terms.size();
    for (const auto &t : f->terms) collect_term(t, s);
  }
  if (is_quantifier(f->op)) s.quantified = true;
  for (const auto &k : f->kids) collect(k, s);
}

// Empty definitions for every symbol so that a partial model evaluates totally.
Interpretation skeleton(const Symbols &s, std::size_t n) {
  Interpretation I;
  I.carrier = std::max<std::size_t>(n, 1);
  I.naming_default = 0;
  for (const auto &[f, a] : s.functions) I.functions[f].fallback = 0;
  for (const auto &[p, a] : s.predicates) I.predicates[p];
  return I;
}

bool verify(const FormulaPtr &f, const Countermodel &m) {
  try {
    return !truth(m.interp, m.valuation, f);
  } catch (const EvaluationError &) {
    return false;
  }
}

// ---------------------------------------------------------------- truth table

std::optional<Verdict> propositional(const FormulaPtr &f, const Symbols &s) {
  if (s.quantified || s.terms || s.predicates.size() > 20) return std::nullopt;
  std::vector<std::string> atoms;
  for (const auto &[p, a] : s.predicates) atoms.push_back(p);
  Verdict v;
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    ++v.steps;
    Interpretation I = skeleton(s, 1);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (mask >> i & 1) I.predicates[atoms[i]].tuples.insert(std::vector<Element>{});
    if (!truth(I, {}, f)) {
      v.kind = VerdictKind::Invalid;
      v.model = Countermodel{I, {}};
      v.certificate = "truth table row " + std::to_string(mask);
      return v;
    }
  }
  v.kind = VerdictKind::Valid;
  v.certificate = "truth table over " + std::to_string(atoms.size()) + " atoms";
  return v;
}

// ---------------------------------------------------------------- congruence closure

class Congruence {
public:
  int intern(const TermPtr &t) {
    std::vector<int> a;
    for (const auto &x : t->args) a.push_back(intern(x));
    auto key = to_string(t);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(terms_.size());
    ids_[key] = id;
    terms_.push_back(t);
    args_.push_back(a);
    parent_.push_back(id);
    return id;
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<std::string, std::vector<int>>, int> sig;
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i]->kind != Term::Kind::App) continue;
        std::vector<int> a;
        for (int x : args_[i]) a.push_back(find(x));
        auto key = std::make_pair(terms_[i]->name, a);
        auto it = sig.find(key);
        if (it == sig.end()) {
          sig[key] = static_cast<int>(i);
        } else if (find(it->second) != find(static_cast<int>(i))) {
          merge(it->second, static_cast<int>(i));
          changed = true;
        }
      }
    }
  }

  const std::vector<TermPtr> &terms() const { return terms_; }
  const std::vector<int> &args(int i) const { return args_[i]; }

private:
  std::map<std::string, int> ids_;
  std::vector<TermPtr> terms_;
  std::vector<std::vector<int>> args_;
  std::vector<int> parent_;
};

struct BranchModel {
  Congruence cc;
  bool closed = false;
};

void analyse(const std::vector<FormulaPtr> &lits, BranchModel &bm) {
  auto &cc = bm.cc;
  std::vector<std::vector<int>> lit_args(lits.size());
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (const auto &t : lits[i]->terms) lit_args[i].push_back(cc.intern(t));
  for (std::size_t i = 0; i < lits.size(); ++i)
    if (lits[i]->op == Op::Atom && lits[i]->name == "=") cc.merge(lit_args[i][0], lit_args[i][1]);
  cc.close();
  auto same = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < lit_args[i].size(); ++k)
      if (cc.find(lit_args[i][k]) != cc.find(lit_args[j][k])) return false;
    return true;
  };
  for (std::size_t i = 0; i < lits.size(); ++i) {
    const auto &l = lits[i];
    if (l->op == Op::NegAtom && l->name == "=" && cc.find(lit_args[i][0]) == cc.find(lit_args[i][1])) {
      bm.closed = true;
      return;
    }
    if (l->op != Op::Atom || l->name == "=") continue;
    for (std::size_t j = 0; j < lits.size(); ++j)
      if (lits[j]->op == Op::NegAtom && lits[j]->name == l->name && lits[j]->terms.size() == l->terms.size() &&
          same(i, j)) {
        bm.closed = true;
        return;
      }
  }
}

// Term model of an open saturated branch.
std::optional<Countermodel> branch_model(const FormulaPtr &f, const Symbols &s, const std::vector<FormulaPtr> &lits) {
  BranchModel bm;
  analyse(lits, bm);
  if (bm.closed) return std::nullopt;
  auto &cc = bm.cc;
  std::map<int, Element> elem;
  for (std::size_t i = 0; i < cc.terms().size(); ++i) {
    int r = cc.find(static_cast<int>(i));
    if (!elem.count(r)) elem[r] = static_cast<Element>(elem.size());
  }
  Countermodel m{skeleton(s, elem.size()), {}};
  for (const auto &x : free_vars(f)) m.valuation[x] = 0;
  for (std::size_t i = 0; i < cc.terms().size(); ++i) {
    const auto &t = cc.terms()[i];
    Element e = elem[cc.find(static_cast<int>(i))];
    if (t->kind == Term::Kind::Var) {
      if (m.valuation.count(t->name)) m.valuation[t->name] = e;
    } else if (t->kind == Term::Kind::Const) {
      m.interp.naming[t->name] = e;
    } else {
      std::vector<Element> a;
      for (int x : cc.args(static_cast<int>(i))) a.push_back(elem[cc.find(x)]);
      m.interp.functions[t->name].table[a] = e;
    }
  }
  for (const auto &l : lits) {
    if (l->op != Op::Atom || l->name == "=") continue;
    std::vector<Element> a;
    for (const auto &t : l->terms) a.push_back(elem[cc.find(cc.intern(t))]);
    m.interp.predicates[l->name].tuples.insert(a);
  }
  if (!verify(f, m)) return std::nullopt;
  return m;
}

// ---------------------------------------------------------------- tableau

enum class Outcome { Closed, Open, Saturated };

struct Tableau {
  std::size_t budget;
  std::size_t steps = 0;
  int fresh = 0;
  std::vector<FormulaPtr> open_literals;

  struct Branch {
    std::vector<FormulaPtr> todo;
    std::vector<FormulaPtr> lits;
    std::vector<std::pair<FormulaPtr, std::set<std::string>>> gammas;
  };

  void tick() {
    if (++steps > budget) throw OutOfBudget{};
  }

  static void subterms(const TermPtr &t, std::map<std::string, TermPtr> &out) {
    out.emplace(to_string(t), t);
    for (const auto &a : t->args) subterms(a, out);
  }

  Outcome expand(Branch b, int rounds) {
    while (!b.todo.empty()) {
      tick();
      auto it = std::find_if(b.todo.begin(), b.todo.end(), [](const FormulaPtr &g) { return g->op != Op::Or; });
      if (it == b.todo.end()) it = b.todo.begin();
      FormulaPtr g = *it;
      b.todo.erase(it);
      switch (g->op) {
        case Op::Top: break;
        case Op::Bot: return Outcome::Closed;
        case Op::Atom:
        case Op::NegAtom: {
          auto neg = to_string(negate(g));
          for (const auto &l : b.lits)
            if (to_string(l) == neg) return Outcome::Closed;
          b.lits.push_back(g);
          break;
        }
        case Op::And:
          b.todo.push_back(g->kids[0]);
          b.todo.push_back(g->kids[1]);
          break;
        case Op::Or: {
          Outcome worst = Outcome::Closed;
          for (const auto &k : g->kids) {
            Branch c = b;
            c.todo.push_back(k);
            auto r = expand(std::move(c), rounds);
            if (r == Outcome::Saturated) return r;
            if (r == Outcome::Open) worst = Outcome::Open;
          }
          return worst;
        }
        case Op::Ex:
          b.todo.push_back(substitute(g->kids[0], g->name, Term::var("%c" + std::to_string(++fresh))));
          break;
        case Op::All: b.gammas.push_back({g, {}}); break;
        default: break;
      }
    }
    BranchModel bm;
    analyse(b.lits, bm);
    if (bm.closed) return Outcome::Closed;
    std::map<std::string, TermPtr> terms;
    for (const auto &l : b.lits)
      for (const auto &t : l->terms) subterms(t, terms);
    if (terms.empty()) terms.emplace("%c0", Term::var("%c0"));
    bool added = false;
    for (auto &[gf, used] : b.gammas)
      for (const auto &[key, t] : terms) {
        if (used.count(key)) continue;
        used.insert(key);
        b.todo.push_back(substitute(gf->kids[0], gf->name, t));
        added = true;
      }
    if (!added) {
      open_literals = b.lits;
      return Outcome::Saturated;
    }
    if (rounds == 0) return Outcome::Open;
    return expand(std::move(b), rounds - 1);
  }
};

// ---------------------------------------------------------------- finite model search

class ModelSearch {
public:
  ModelSearch(const FormulaPtr &f, std::size_t n, std::size_t budget) : f_(f), n_(n), budget_(budget) {}

  bool run() { return search(); }
  std::size_t steps() const { return steps_; }

  Countermodel model(const Symbols &s) const {
    Countermodel m{skeleton(s, n_), {}};
    for (const auto &x : free_vars(f_)) m.valuation[x] = 0;
    for (const auto &[sym, table] : fun_) {
      std::string name = sym.substr(2);
      for (const auto &[args, val] : table) {
        if (sym[0] == 'v') m.valuation[name] = val;
        else if (sym[0] == 'c') m.interp.naming[name] = val;
        else m.interp.functions[name].table[args] = val;
      }
    }
    for (const auto &[p, table] : pred_)
      for (const auto &[args, val] : table)
        if (val) m.interp.predicates[p].tuples.insert(args);
    return m;
  }

private:
  struct Block {
    bool set = false;
    bool pred = false;
    std::string sym;
    std::vector<Element> args;
  };

  void block_on(bool pred, const std::string &sym, const std::vector<Element> &args) {
    if (block_.set) return;
    block_ = {true, pred, sym, args};
  }

  std::optional<Element> term(const TermPtr &t, const Valuation &v) {
    std::string sym;
    std::vector<Element> args;
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = v.find(t->name);
        if (it != v.end()) return it->second;
        sym = "v:" + t->name;
        break;
      }
      case Term::Kind::Const: sym = "c:" + t->name; break;
      case Term::Kind::App:
        for (const auto &a : t->args) {
          auto e = term(a, v);
          if (!e) return std::nullopt;
          args.push_back(*e);
        }
        sym = "f:" + t->name;
        break;
    }
    auto &table = fun_[sym];
    auto it = table.find(args);
    if (it != table.end()) return it->second;
    block_on(false, sym, args);
    return std::nullopt;
  }

  // 1 true, 0 false, -1 undetermined by the partial model.
  int eval(const FormulaPtr &f, Valuation &v) {
    switch (f->op) {
      case Op::Top: return 1;
      case Op::Bot: return 0;
      case Op::Atom:
      case Op::NegAtom: {
        std::vector<Element> args;
        for (const auto &t : f->terms) {
          auto e = term(t, v);
          if (!e) return -1;
          args.push_back(*e);
        }
        bool h;
        if (f->name == "=") {
          h = args[0] == args[1];
        } else {
          auto &table = pred_[f->name];
          auto it = table.find(args);
          if (it == table.end()) {
            block_on(true, f->name, args);
            return -1;
          }
          h = it->second;
        }
        return (f->op == Op::Atom) == h ? 1 : 0;
      }
      case Op::And:
      case Op::Or: {
        int absorbing = f->op == Op::And ? 0 : 1;
        int r = 1 - absorbing;
        for (const auto &k : f->kids) {
          int e = eval(k, v);
          if (e == absorbing) return absorbing;
          if (e == -1) r = -1;
        }
        return r;
      }
      case Op::All:
      case Op::Ex: {
        int absorbing = f->op == Op::All ? 0 : 1;
        int r = 1 - absorbing;
        auto saved = v.find(f->name) != v.end() ? std::optional<Element>(v[f->name]) : std::nullopt;
        for (Element e = 0; e < n_; ++e) {
          v[f->name] = e;
          int x = eval(f->kids[0], v);
          if (x == absorbing) {
            r = absorbing;
            break;
          }
          if (x == -1) r = -1;
        }
        if (saved) v[f->name] = *saved;
        else v.erase(f->name);
        return r;
      }
      default: return -1;
    }
  }

  bool search() {
    if (++steps_ > budget_) throw OutOfBudget{};
    block_ = {};
    Valuation v;
    int e = eval(f_, v);
    if (e == 0) return true;
    if (e == 1) return false;
    Block b = block_;
    if (b.pred) {
      for (bool val : {false, true}) {
        pred_[b.sym][b.args] = val;
        if (search()) return true;
      }
      pred_[b.sym].erase(b.args);
    } else {
      for (Element val = 0; val < n_; ++val) {
        fun_[b.sym][b.args] = val;
        if (search()) return true;
      }
      fun_[b.sym].erase(b.args);
    }
    return false;
  }

  FormulaPtr f_;
  std::size_t n_;
  std::size_t budget_;
  std::size_t steps_ = 0;
  Block block_;
  std::map<std::string, std::map<std::vector<Element>, Element>> fun_;
  std::map<std::string, std::map<std::vector<Element>, bool>> pred_;
};

Verdict decide(const FormulaPtr &f, const OracleOptions &opt) {
  Symbols s;
  collect(f, s);
  if (auto v = propositional(f, s)) return *v;
  Verdict out;
  auto tableau = [&](int max_rounds, std::size_t budget) -> std::optional<Verdict> {
    Tableau t{budget};
    try {
      for (int r = 0; r <= max_rounds; ++r) {
        Tableau::Branch b;
        b.todo.push_back(negate(f));
        t.fresh = 0;
        auto o = t.expand(std::move(b), r);
        if (o == Outcome::Closed) {
          Verdict v;
          v.kind = VerdictKind::Valid;
          v.certificate = "closed tableau with " + std::to_string(r) + " instantiation rounds";
          v.steps = t.steps;
          return v;
        }
        if (o == Outcome::Saturated) {
          out.steps += t.steps;
          if (auto m = branch_model(f, s, t.open_literals)) {
            Verdict v;
            v.kind = VerdictKind::Invalid;
            v.model = *m;
            v.certificate = "saturated open tableau branch";
            v.steps = t.steps;
            return v;
          }
          return std::nullopt;
        }
      }
    } catch (const OutOfBudget &) {
    }
    out.steps += t.steps;
    return std::nullopt;
  };
  auto models = [&](int from, int to, std::size_t budget) -> std::optional<Verdict> {
    for (int n = from; n <= to; ++n) {
      ModelSearch ms(f, static_cast<std::size_t>(n), budget);
      try {
        bool found = ms.run();
        out.steps += ms.steps();
        if (!found) continue;
        auto m = ms.model(s);
        if (!verify(f, m)) continue;
        Verdict v;
        v.kind = VerdictKind::Invalid;
        v.model = m;
        v.certificate = "countermodel of size " + std::to_string(n);
        v.steps = out.steps;
        return v;
      } catch (const OutOfBudget &) {
        out.steps += budget;
      }
    }
    return std::nullopt;
  };
  std::size_t quarter = std::max<std::size_t>(opt.budget / 4, 1);
  if (auto v = tableau(s.quantified ? 2 : 0, quarter)) return *v;
  if (auto v = models(1, std::min(2, opt.max_domain), quarter)) return *v;
  if (s.quantified)
    if (auto v = tableau(64, quarter)) return *v;
  if (auto v = models(3, opt.max_domain, quarter)) return *v;
  out.kind = VerdictKind::Unknown;
  out.certificate = "budget exhausted";
  return out;
}

}  // namespace

Verdict decide_validity(const FormulaPtr &f, const OracleOptions &opt) {
  static std::mutex mu;
  static std::unordered_map<std::string, Verdict> memo;
  auto key = to_string(f) + "|" + std::to_string(opt.budget) + "|" + std::to_string(opt.max_domain);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  auto v = decide(f, opt);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, v);
  return v;
}

Verdict is_stable(const Sequent &s, const OracleOptions &opt) { return decide_validity(elementarize_sequent(s), opt); }

}  // namespace cl12
