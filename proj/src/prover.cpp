#include <functional>
#include <memory>
#include <unordered_map>

#include "cl12/calculus.hpp"

namespace cl12 {

namespace {

struct Node {
  Sequent seq;
  Rule rule;
  std::vector<std::shared_ptr<Node>> kids;
  int reps = 0;  // replications used along the deepest path
};
using NodePtr = std::shared_ptr<Node>;

void term_order(const TermPtr &t, std::vector<std::string> &out, std::set<std::string> &seen,
                const std::set<std::string> &free) {
  if (t->kind == Term::Kind::Var && free.count(t->name) && seen.insert(t->name).second) out.push_back(t->name);
  for (const auto &a : t->args) term_order(a, out, seen, free);
}

void formula_order(const FormulaPtr &f, std::vector<std::string> &out, std::set<std::string> &seen,
                   const std::set<std::string> &free) {
  for (const auto &t : f->terms) term_order(t, out, seen, free);
  for (const auto &k : f->kids) formula_order(k, out, seen, free);
}

// Goal key up to renaming of free variables (Wait's fresh variables are arbitrary).
std::string normalized_key(const Sequent &s) {
  auto fv = free_vars(s);
  std::set<std::string> free(fv.begin(), fv.end());
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto &a : s.antecedent) formula_order(a, order, seen, free);
  formula_order(s.succedent, order, seen, free);
  Bindings b;
  for (std::size_t i = 0; i < order.size(); ++i) b[order[i]] = Term::var("%v" + std::to_string(i));
  return to_string(substitute(s, b));
}

bool has_env_choice(const FormulaPtr &f) {
  if (f->op == Op::CAnd || f->op == Op::CAll) return true;
  for (const auto &k : f->kids)
    if (has_env_choice(k)) return true;
  return false;
}

class Prover {
public:
  explicit Prover(const ProverOptions &opt) : opt_(opt) {}

  NodePtr search(const Sequent &x, int reps, bool &definitive) {
    if (++goals_ > opt_.goal_budget) {
      exhausted_ = true;
      definitive = false;
      return nullptr;
    }
    auto exact = to_string(x);
    auto sit = proved_.find(exact);
    if (sit != proved_.end() && sit->second->reps <= reps) return sit->second;
    auto key = normalized_key(x);
    auto fit = failed_.find(key);
    bool had = fit != failed_.end();
    if (had && fit->second.first >= reps) {
      definitive = definitive && fit->second.second;
      return nullptr;
    }
    bool def = true;
    auto done = [&](NodePtr n) {
      if (n) {
        proved_[exact] = n;
      } else {
        auto &rec = failed_[key];
        if (!had || reps >= rec.first) rec = {reps, def};
        definitive = definitive && def;
      }
      return n;
    };

    auto v = is_stable(x, opt_.oracle);
    if (v.kind == VerdictKind::Unknown) def = false;
    if (v.kind == VerdictKind::Valid) {
      auto n = std::make_shared<Node>(Node{x, Rule{RuleKind::Wait}, {}, 0});
      bool ok = true;
      for (const auto &p : wait_premises(x)) {
        auto k = search(p, reps, def);
        if (!k) {
          ok = false;
          break;
        }
        n->reps = std::max(n->reps, k->reps);
        n->kids.push_back(k);
      }
      if (ok) return done(n);
    }
    if (is_elementary(x)) return done(nullptr);

    std::vector<std::string> candidates;
    for (const auto &y : free_vars(x)) candidates.push_back(y);
    for (const auto &c : constants(x)) candidates.push_back(c);
    if (!constants(x).count("0")) candidates.push_back("0");

    auto attempt = [&](const Rule &r, int child_reps) -> NodePtr {
      Sequent p;
      try {
        p = rule_premise(x, r);
      } catch (const RuleError &) {
        return nullptr;
      }
      auto k = search(p, child_reps, def);
      if (!k) return nullptr;
      int used = k->reps + (r.kind == RuleKind::Replicate ? 1 : 0);
      return std::make_shared<Node>(Node{x, r, {k}, used});
    };

    for (const auto &p : surface_occurrences(x.succedent, Op::COr))
      for (int i : {0, 1})
        if (auto n = attempt(Rule{RuleKind::ChooseOr, -1, p, i, ""}, reps)) return done(n);
    for (const auto &p : surface_occurrences(x.succedent, Op::CEx))
      for (const auto &t : candidates)
        if (auto n = attempt(Rule{RuleKind::ChooseExists, -1, p, 0, t}, reps)) return done(n);
    for (std::size_t m = 0; m < x.antecedent.size(); ++m) {
      int mi = static_cast<int>(m);
      for (const auto &p : surface_occurrences(x.antecedent[m], Op::CAnd))
        for (int i : {0, 1})
          if (auto n = attempt(Rule{RuleKind::ChooseAnd, mi, p, i, ""}, reps)) return done(n);
      for (const auto &p : surface_occurrences(x.antecedent[m], Op::CAll))
        for (const auto &t : candidates)
          if (auto n = attempt(Rule{RuleKind::ChooseAll, mi, p, 0, t}, reps)) return done(n);
    }
    if (reps > 0)
      for (std::size_t m = 0; m < x.antecedent.size(); ++m)
        if (has_env_choice(x.antecedent[m]))
          if (auto n = attempt(Rule{RuleKind::Replicate, static_cast<int>(m), {}, 0, ""}, reps - 1)) return done(n);
    return done(nullptr);
  }

  std::size_t goals() const { return goals_; }
  bool exhausted() const { return exhausted_; }

private:
  const ProverOptions &opt_;
  std::size_t goals_ = 0;
  bool exhausted_ = false;
  std::unordered_map<std::string, NodePtr> proved_;
  std::unordered_map<std::string, std::pair<int, bool>> failed_;
};

Proof linearize(const NodePtr &root) {
  Proof out;
  std::map<const Node *, std::size_t> index;
  std::function<std::size_t(const NodePtr &)> emit = [&](const NodePtr &n) -> std::size_t {
    auto it = index.find(n.get());
    if (it != index.end()) return it->second;
    std::vector<std::size_t> prem;
    for (const auto &k : n->kids) prem.push_back(emit(k));
    out.push_back(ProofStep{n->seq, n->rule, prem});
    return index[n.get()] = out.size() - 1;
  };
  emit(root);
  return out;
}

}  // namespace

ProveResult prove(const Sequent &s, const ProverOptions &opt) {
  ProveResult res;
  Prover pr(opt);
  bool definitive = true;
  for (int cap = 0; cap <= opt.replicate_cap; ++cap) {
    definitive = true;
    auto n = pr.search(s, cap, definitive);
    if (n) {
      res.status = ProveStatus::Proved;
      res.proof = linearize(n);
      res.goals = pr.goals();
      return res;
    }
    if (pr.exhausted()) break;
  }
  res.goals = pr.goals();
  res.status = definitive && !pr.exhausted() ? ProveStatus::Unprovable : ProveStatus::Unknown;
  return res;
}

}  // namespace cl12
