#include <algorithm>

#include "cl12/semantics.hpp"

namespace cl12 {

Element Interpretation::name(const std::string &constant) const {
  auto it = naming.find(constant);
  if (it != naming.end()) return it->second;
  if (ideal_naming) {
    unsigned long long v = 0;
    bool out = false;
    for (char c : constant) {
      v = v * 2 + static_cast<unsigned long long>(c - '0');
      if (v >= carrier) {
        out = true;
        v %= carrier;
      }
    }
    if (out && !wrap) throw EvaluationError("constant " + constant + " exceeds the carrier");
    return static_cast<Element>(v);
  }
  if (naming_default) return *naming_default;
  throw EvaluationError("constant " + constant + " is not named");
}

namespace {

Element arith(const Interpretation &I, unsigned long long v) {
  if (v < I.carrier) return static_cast<Element>(v);
  if (I.wrap) return static_cast<Element>(v % I.carrier);
  throw EvaluationError("arithmetic overflow");
}

}  // namespace

Element Interpretation::apply(const std::string &f, const std::vector<Element> &args) const {
  auto it = functions.find(f);
  if (it == functions.end()) throw EvaluationError("uninterpreted function letter " + f);
  const auto &d = it->second;
  if (d.builtin.empty()) {
    auto t = d.table.find(args);
    if (t != d.table.end()) return t->second;
    if (d.fallback) return *d.fallback;
    throw EvaluationError("function table for " + f + " is not total");
  }
  if (d.builtin == "succ") {
    if (args.size() != 1) throw EvaluationError("succ is unary");
    return arith(*this, args[0] + 1ULL);
  }
  if (d.builtin == "add") {
    if (args.size() != 2) throw EvaluationError("add is binary");
    return arith(*this, static_cast<unsigned long long>(args[0]) + args[1]);
  }
  if (d.builtin == "mul") {
    if (args.size() != 2) throw EvaluationError("mul is binary");
    return arith(*this, static_cast<unsigned long long>(args[0]) * args[1]);
  }
  if (d.builtin == "cube") {
    if (args.size() != 1) throw EvaluationError("cube is unary");
    unsigned long long x = args[0];
    if (wrap) return static_cast<Element>((x * x % carrier) * x % carrier);
    return arith(*this, x * x * x);
  }
  throw EvaluationError("unknown builtin function " + d.builtin);
}

bool Interpretation::holds(const std::string &p, const std::vector<Element> &args) const {
  if (p == "=") return args.size() == 2 && args[0] == args[1];
  auto it = predicates.find(p);
  if (it == predicates.end()) throw EvaluationError("uninterpreted predicate letter " + p);
  const auto &d = it->second;
  if (d.builtin.empty()) return d.tuples.count(args) > 0;
  if (args.size() != 1) throw EvaluationError(d.builtin + " is unary");
  if (d.builtin == "Even") return args[0] % 2 == 0;
  if (d.builtin == "Odd") return args[0] % 2 == 1;
  throw EvaluationError("unknown builtin predicate " + d.builtin);
}

std::string Interpretation::element_label(Element e) const {
  return ideal_naming ? numeral_of(e) : std::to_string(e);
}

Interpretation Interpretation::arithmetic(unsigned bits) {
  Interpretation I;
  I.carrier = std::size_t{1} << bits;
  I.ideal_naming = true;
  I.functions["+"].builtin = "add";
  I.functions["*"].builtin = "mul";
  I.functions["cube"].builtin = "cube";
  I.functions["succ"].builtin = "succ";
  I.predicates["Even"].builtin = "Even";
  I.predicates["Odd"].builtin = "Odd";
  return I;
}

Element eval_term(const Interpretation &I, const Valuation &v, const TermPtr &t) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = v.find(t->name);
      if (it == v.end()) throw EvaluationError("unvalued variable " + t->name);
      return it->second;
    }
    case Term::Kind::Const: return I.name(t->name);
    case Term::Kind::App: {
      std::vector<Element> args;
      args.reserve(t->args.size());
      for (const auto &a : t->args) args.push_back(eval_term(I, v, a));
      return I.apply(t->name, args);
    }
  }
  return 0;
}

bool truth(const Interpretation &I, const Valuation &v, const FormulaPtr &f) {
  switch (f->op) {
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Atom:
    case Op::NegAtom: {
      std::vector<Element> args;
      for (const auto &t : f->terms) args.push_back(eval_term(I, v, t));
      bool h = I.holds(f->name, args);
      return f->op == Op::Atom ? h : !h;
    }
    case Op::And: return truth(I, v, f->kids[0]) && truth(I, v, f->kids[1]);
    case Op::Or: return truth(I, v, f->kids[0]) || truth(I, v, f->kids[1]);
    case Op::All:
    case Op::Ex: {
      Valuation w = v;
      bool all = f->op == Op::All;
      for (Element e = 0; e < I.size(); ++e) {
        w[f->name] = e;
        bool t = truth(I, w, f->kids[0]);
        if (all && !t) return false;
        if (!all && t) return true;
      }
      return all;
    }
    default: throw EvaluationError("formula is not elementary: " + to_string(f));
  }
}

}  // namespace cl12
