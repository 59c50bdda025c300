#include "cl12/calculus.hpp"

#include <sstream>

namespace cl12 {

std::string rule_name(RuleKind k) {
  switch (k) {
    case RuleKind::Wait: return "wait";
    case RuleKind::ChooseOr: return "choose-or";
    case RuleKind::ChooseAnd: return "choose-and";
    case RuleKind::ChooseExists: return "choose-exists";
    case RuleKind::ChooseAll: return "choose-all";
    case RuleKind::Replicate: return "replicate";
  }
  return "?";
}

RuleKind rule_from_name(const std::string &s) {
  for (auto k : {RuleKind::Wait, RuleKind::ChooseOr, RuleKind::ChooseAnd, RuleKind::ChooseExists, RuleKind::ChooseAll,
                 RuleKind::Replicate})
    if (rule_name(k) == s) return k;
  throw RuleError("unknown rule '" + s + "'");
}

TermPtr choose_term(const std::string &t) {
  if (is_numeral(t)) return Term::constant(t);
  if (t.empty() || !(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
    throw RuleError("choose term must be a constant or a variable: '" + t + "'");
  return Term::var(t);
}

namespace {

std::string path_text(const Path &p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

// The occurrence at p must have the given operator and no choice operator above it.
FormulaPtr surface_at(const FormulaPtr &f, const Path &p, Op op, const std::string &where) {
  FormulaPtr cur = f;
  for (int i : p) {
    if (is_choice(cur->op)) throw RuleError("non-surface path " + path_text(p) + " in " + where);
    if (i < 0 || static_cast<std::size_t>(i) >= cur->kids.size())
      throw RuleError("path " + path_text(p) + " does not exist in " + where);
    cur = cur->kids[i];
  }
  if (cur->op != op) throw RuleError("path " + path_text(p) + " in " + where + " does not address the right operator");
  return cur;
}

const FormulaPtr &member_at(const Sequent &s, int m) {
  if (m < 0 || static_cast<std::size_t>(m) >= s.antecedent.size())
    throw RuleError("antecedent member " + std::to_string(m) + " does not exist");
  return s.antecedent[m];
}

std::string op_text(Op op) {
  switch (op) {
    case Op::CAnd: return "&";
    case Op::COr: return "|";
    case Op::CAll: return "!";
    case Op::CEx: return "?";
    default: return "?";
  }
}

}  // namespace

Sequent rule_premise(const Sequent &x, const Rule &r) {
  Sequent p = x;
  switch (r.kind) {
    case RuleKind::ChooseOr: {
      if (r.choice != 0 && r.choice != 1) throw RuleError("choice must be 0 or 1");
      auto occ = surface_at(x.succedent, r.path, Op::COr, "succedent");
      p.succedent = replace_at(x.succedent, r.path, occ->kids[r.choice]);
      return p;
    }
    case RuleKind::ChooseAnd: {
      if (r.choice != 0 && r.choice != 1) throw RuleError("choice must be 0 or 1");
      auto occ = surface_at(member_at(x, r.member), r.path, Op::CAnd, "antecedent");
      p.antecedent[r.member] = replace_at(x.antecedent[r.member], r.path, occ->kids[r.choice]);
      return p;
    }
    case RuleKind::ChooseExists:
    case RuleKind::ChooseAll: {
      auto t = choose_term(r.term);
      bool ex = r.kind == RuleKind::ChooseExists;
      const FormulaPtr &host = ex ? x.succedent : member_at(x, r.member);
      auto occ = surface_at(host, r.path, ex ? Op::CEx : Op::CAll, ex ? "succedent" : "antecedent");
      auto inst = replace_at(host, r.path, substitute(occ->kids[0], occ->name, t));
      if (ex) p.succedent = inst;
      else p.antecedent[r.member] = inst;
      if (t->kind == Term::Kind::Var) {
        for (const auto &a : p.antecedent)
          if (bound_vars(a).count(r.term)) throw RuleError("variable " + r.term + " has bound occurrences");
        if (bound_vars(p.succedent).count(r.term)) throw RuleError("variable " + r.term + " has bound occurrences");
      }
      return p;
    }
    case RuleKind::Replicate: p.antecedent.push_back(member_at(x, r.member)); return p;
    case RuleKind::Wait: break;
  }
  throw RuleError("wait has no single premise");
}

std::vector<Sequent> wait_premises(const Sequent &x, std::set<std::string> avoid) {
  auto vs = all_vars(x);
  avoid.insert(vs.begin(), vs.end());
  std::vector<Sequent> out;
  for (const auto &p : surface_occurrences(x.succedent, Op::CAnd)) {
    auto occ = subformula_at(x.succedent, p);
    for (int i : {0, 1}) {
      Sequent y = x;
      y.succedent = replace_at(x.succedent, p, occ->kids[i]);
      out.push_back(y);
    }
  }
  for (std::size_t m = 0; m < x.antecedent.size(); ++m)
    for (const auto &p : surface_occurrences(x.antecedent[m], Op::COr)) {
      auto occ = subformula_at(x.antecedent[m], p);
      for (int i : {0, 1}) {
        Sequent y = x;
        y.antecedent[m] = replace_at(x.antecedent[m], p, occ->kids[i]);
        out.push_back(y);
      }
    }
  for (const auto &p : surface_occurrences(x.succedent, Op::CAll)) {
    auto occ = subformula_at(x.succedent, p);
    auto v = fresh_variable(occ->name, avoid);
    avoid.insert(v);
    Sequent y = x;
    y.succedent = replace_at(x.succedent, p, substitute(occ->kids[0], occ->name, Term::var(v)));
    out.push_back(y);
  }
  for (std::size_t m = 0; m < x.antecedent.size(); ++m)
    for (const auto &p : surface_occurrences(x.antecedent[m], Op::CEx)) {
      auto occ = subformula_at(x.antecedent[m], p);
      auto v = fresh_variable(occ->name, avoid);
      avoid.insert(v);
      Sequent y = x;
      y.antecedent[m] = replace_at(x.antecedent[m], p, substitute(occ->kids[0], occ->name, Term::var(v)));
      out.push_back(y);
    }
  return out;
}

namespace {

bool among(const Sequent &y, const std::vector<Sequent> &ps) {
  for (const auto &p : ps)
    if (sequent_equal(p, y)) return true;
  return false;
}

// Some premise equals x with the occurrence at p instantiated by a variable not occurring in x.
bool fresh_instance_among(const Sequent &x, int member, const Path &p, const std::vector<Sequent> &ps) {
  const FormulaPtr &host = member < 0 ? x.succedent : x.antecedent[member];
  auto occ = subformula_at(host, p);
  auto xs = all_vars(x);
  for (const auto &y : ps) {
    if (y.antecedent.size() != x.antecedent.size()) continue;
    const FormulaPtr &yh = member < 0 ? y.succedent : y.antecedent[member];
    auto h = subformula_at(yh, p);
    if (!h) continue;
    bool unconstrained = false;
    auto t = match_instance(occ->kids[0], occ->name, h, &unconstrained);
    if (!t) continue;
    FormulaPtr inst = occ->kids[0];
    if (!unconstrained) {
      if ((*t)->kind != Term::Kind::Var || xs.count((*t)->name)) continue;
      inst = substitute(occ->kids[0], occ->name, *t);
    }
    Sequent want = x;
    if (member < 0) want.succedent = replace_at(x.succedent, p, inst);
    else want.antecedent[member] = replace_at(x.antecedent[member], p, inst);
    if (sequent_equal(want, y)) return true;
  }
  return false;
}

}  // namespace

std::string check_step(const Sequent &x, const Rule &r, const std::vector<Sequent> &premises, const OracleOptions &opt) {
  if (r.kind != RuleKind::Wait) {
    if (premises.size() != 1) return rule_name(r.kind) + " needs exactly one premise";
    Sequent want;
    try {
      want = rule_premise(x, r);
    } catch (const RuleError &e) {
      return e.what();
    }
    if (!sequent_equal(want, premises[0]))
      return "premise mismatch: expected " + to_string(want) + ", got " + to_string(premises[0]);
    return "";
  }
  for (const auto &p : surface_occurrences(x.succedent, Op::CAnd)) {
    auto occ = subformula_at(x.succedent, p);
    for (int i : {0, 1}) {
      Sequent y = x;
      y.succedent = replace_at(x.succedent, p, occ->kids[i]);
      if (!among(y, premises)) return "missing wait premise for & at succedent path " + path_text(p);
    }
  }
  for (std::size_t m = 0; m < x.antecedent.size(); ++m)
    for (const auto &p : surface_occurrences(x.antecedent[m], Op::COr)) {
      auto occ = subformula_at(x.antecedent[m], p);
      for (int i : {0, 1}) {
        Sequent y = x;
        y.antecedent[m] = replace_at(x.antecedent[m], p, occ->kids[i]);
        if (!among(y, premises))
          return "missing wait premise for | at antecedent member " + std::to_string(m) + " path " + path_text(p);
      }
    }
  for (const auto &p : surface_occurrences(x.succedent, Op::CAll))
    if (!fresh_instance_among(x, -1, p, premises))
      return "missing wait premise with a fresh variable for " + op_text(Op::CAll) + " at succedent path " +
             path_text(p);
  for (std::size_t m = 0; m < x.antecedent.size(); ++m)
    for (const auto &p : surface_occurrences(x.antecedent[m], Op::CEx))
      if (!fresh_instance_among(x, static_cast<int>(m), p, premises))
        return "missing wait premise with a fresh variable for " + op_text(Op::CEx) + " at antecedent member " +
               std::to_string(m) + " path " + path_text(p);
  auto v = is_stable(x, opt);
  if (v.kind == VerdictKind::Invalid) return "unstable: elementarization is not classically valid";
  if (v.kind == VerdictKind::Unknown) return "stability unknown within the classical budget";
  return "";
}

ProofCheck check_proof(const Proof &p, const OracleOptions &opt) {
  ProofCheck out;
  if (p.empty()) {
    out.ok = false;
    out.violation = "empty proof";
    return out;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<Sequent> prem;
    for (auto k : p[i].premises) {
      if (k >= i) {
        out.ok = false;
        out.step = i;
        out.violation = "premise " + std::to_string(k + 1) + " is not an earlier step";
        return out;
      }
      prem.push_back(p[k].seq);
    }
    auto v = check_step(p[i].seq, p[i].rule, prem, opt);
    if (!v.empty()) {
      out.ok = false;
      out.step = i;
      out.violation = v;
      return out;
    }
  }
  return out;
}

std::string to_string(ProveStatus s) {
  switch (s) {
    case ProveStatus::Proved: return "proved";
    case ProveStatus::Unprovable: return "unprovable";
    default: return "unknown";
  }
}

}  // namespace cl12
