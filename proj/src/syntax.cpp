#include "cl12/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace cl12 {

TermPtr Term::var(std::string n) {
  return std::make_shared<const Term>(Term{Kind::Var, std::move(n), {}});
}

TermPtr Term::constant(std::string numeral) {
  return std::make_shared<const Term>(Term{Kind::Const, std::move(numeral), {}});
}

TermPtr Term::app(std::string f, std::vector<TermPtr> args) {
  return std::make_shared<const Term>(Term{Kind::App, std::move(f), std::move(args)});
}

FormulaPtr Formula::top() {
  static const FormulaPtr t = std::make_shared<const Formula>(Formula{Op::Top, "", {}, {}});
  return t;
}

FormulaPtr Formula::bot() {
  static const FormulaPtr b = std::make_shared<const Formula>(Formula{Op::Bot, "", {}, {}});
  return b;
}

FormulaPtr Formula::atom(std::string pred, std::vector<TermPtr> args, bool negated) {
  return std::make_shared<const Formula>(
      Formula{negated ? Op::NegAtom : Op::Atom, std::move(pred), std::move(args), {}});
}

FormulaPtr Formula::binary(Op op, FormulaPtr a, FormulaPtr b) {
  return std::make_shared<const Formula>(Formula{op, "", {}, {std::move(a), std::move(b)}});
}

FormulaPtr Formula::quant(Op op, std::string var, FormulaPtr body) {
  return std::make_shared<const Formula>(Formula{op, std::move(var), {}, {std::move(body)}});
}

bool is_choice(Op op) { return op == Op::CAnd || op == Op::COr || op == Op::CAll || op == Op::CEx; }
bool is_quantifier(Op op) { return op == Op::All || op == Op::Ex || op == Op::CAll || op == Op::CEx; }
bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::CAnd || op == Op::COr; }

Op dual(Op op) {
  switch (op) {
    case Op::Top: return Op::Bot;
    case Op::Bot: return Op::Top;
    case Op::Atom: return Op::NegAtom;
    case Op::NegAtom: return Op::Atom;
    case Op::And: return Op::Or;
    case Op::Or: return Op::And;
    case Op::CAnd: return Op::COr;
    case Op::COr: return Op::CAnd;
    case Op::All: return Op::Ex;
    case Op::Ex: return Op::All;
    case Op::CAll: return Op::CEx;
    case Op::CEx: return Op::CAll;
  }
  return op;
}

bool term_equal(const TermPtr &a, const TermPtr &b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool formula_equal(const FormulaPtr &a, const FormulaPtr &b) {
  if (a == b) return true;
  if (a->op != b->op || a->name != b->name || a->terms.size() != b->terms.size() ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->terms.size(); ++i)
    if (!term_equal(a->terms[i], b->terms[i])) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool sequent_equal(const Sequent &a, const Sequent &b) {
  if (a.antecedent.size() != b.antecedent.size()) return false;
  for (std::size_t i = 0; i < a.antecedent.size(); ++i)
    if (!formula_equal(a.antecedent[i], b.antecedent[i])) return false;
  return formula_equal(a.succedent, b.succedent);
}

// ---------------------------------------------------------------- printing

namespace {

bool is_infix(const TermPtr &t) {
  return t->kind == Term::Kind::App && (t->name == "+" || t->name == "*") && t->args.size() == 2;
}

void print_term(std::ostream &os, const TermPtr &t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Const: os << t->name; return;
    case Term::Kind::App:
      if (is_infix(t)) {
        for (int i = 0; i < 2; ++i) {
          if (i == 1) os << t->name;
          const auto &a = t->args[i];
          if (is_infix(a)) {
            os << '(';
            print_term(os, a);
            os << ')';
          } else {
            print_term(os, a);
          }
        }
        return;
      }
      os << t->name << '(';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ',';
        print_term(os, t->args[i]);
      }
      os << ')';
      return;
  }
}

int level(const FormulaPtr &f) {
  switch (f->op) {
    case Op::Or:
    case Op::COr: return 1;
    case Op::And:
    case Op::CAnd: return 2;
    default: return 3;
  }
}

void print_atom(std::ostream &os, const Formula &f) {
  if (f.name == "=") {
    print_term(os, f.terms[0]);
    os << " = ";
    print_term(os, f.terms[1]);
    return;
  }
  os << f.name;
  if (!f.terms.empty()) {
    os << '(';
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
      if (i) os << ',';
      print_term(os, f.terms[i]);
    }
    os << ')';
  }
}

void print_formula(std::ostream &os, const FormulaPtr &f) {
  switch (f->op) {
    case Op::Top: os << 'T'; return;
    case Op::Bot: os << 'F'; return;
    case Op::Atom: print_atom(os, *f); return;
    case Op::NegAtom:
      os << '~';
      if (f->name == "=") {
        os << '(';
        print_atom(os, *f);
        os << ')';
      } else {
        print_atom(os, *f);
      }
      return;
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr: {
      const char *sym = f->op == Op::And ? " /\\ " : f->op == Op::Or ? " \\/ " : f->op == Op::CAnd ? " & " : " | ";
      int l = level(f);
      const auto &a = f->kids[0];
      const auto &b = f->kids[1];
      bool pa = level(a) <= l;
      bool pb = level(b) < l || (level(b) == l && b->op != f->op);
      if (pa) os << '(';
      print_formula(os, a);
      if (pa) os << ')';
      os << sym;
      if (pb) os << '(';
      print_formula(os, b);
      if (pb) os << ')';
      return;
    }
    case Op::All:
    case Op::Ex:
    case Op::CAll:
    case Op::CEx: {
      const char *q = f->op == Op::All ? "A" : f->op == Op::Ex ? "E" : f->op == Op::CAll ? "!" : "?";
      os << q << f->name << ": ";
      const auto &b = f->kids[0];
      bool p = level(b) < 3;
      if (p) os << '(';
      print_formula(os, b);
      if (p) os << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const TermPtr &t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

std::string to_string(const FormulaPtr &f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

std::string to_string(const Sequent &s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) os << ", ";
    print_formula(os, s.antecedent[i]);
  }
  if (!s.antecedent.empty()) os << ' ';
  os << "=> ";
  print_formula(os, s.succedent);
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok {
  Ident, Num, LParen, RParen, Comma, Not, And, Or, Imp, CAnd, COr, Eq, Turnstile, Plus, Star,
  QAll, QEx, QCAll, QCEx, Top, Bot, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
  explicit Lexer(const std::string &s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", i_});
        return out;
      }
      out.push_back(next());
    }
  }

private:
  const std::string &s_;
  std::size_t i_ = 0;

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string read_ident() {
    std::size_t b = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    while (i_ < s_.size() && s_[i_] == '\'') ++i_;
    return s_.substr(b, i_ - b);
  }

  Token quantifier(Tok kind, std::size_t start) {
    skip_ws();
    if (i_ >= s_.size() || !ident_start(s_[i_])) throw SyntaxError("expected variable after quantifier", i_);
    std::string v = read_ident();
    skip_ws();
    if (i_ >= s_.size() || s_[i_] != ':') throw SyntaxError("expected ':' after quantified variable", i_);
    ++i_;
    return {kind, v, start};
  }

  Token next() {
    std::size_t p = i_;
    char c = s_[i_];
    auto two = [&](const char *t) { return s_.compare(i_, 2, t) == 0; };
    if (two("/\\")) { i_ += 2; return {Tok::And, "/\\", p}; }
    if (two("\\/")) { i_ += 2; return {Tok::Or, "\\/", p}; }
    if (two("->")) { i_ += 2; return {Tok::Imp, "->", p}; }
    if (two("=>")) { i_ += 2; return {Tok::Turnstile, "=>", p}; }
    switch (c) {
      case '(': ++i_; return {Tok::LParen, "(", p};
      case ')': ++i_; return {Tok::RParen, ")", p};
      case ',': ++i_; return {Tok::Comma, ",", p};
      case '~': ++i_; return {Tok::Not, "~", p};
      case '&': ++i_; return {Tok::CAnd, "&", p};
      case '|': ++i_; return {Tok::COr, "|", p};
      case '=': ++i_; return {Tok::Eq, "=", p};
      case '+': ++i_; return {Tok::Plus, "+", p};
      case '*': ++i_; return {Tok::Star, "*", p};
      case '!': ++i_; return quantifier(Tok::QCAll, p);
      case '?': ++i_; return quantifier(Tok::QCEx, p);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      std::string n = s_.substr(p, i_ - p);
      if (!is_numeral(n)) throw SyntaxError("constant '" + n + "' is not a binary numeral", p);
      return {Tok::Num, n, p};
    }
    if (ident_start(c)) {
      if ((c == 'A' || c == 'E') && i_ + 1 < s_.size() && ident_start(s_[i_ + 1])) {
        std::size_t j = i_ + 1;
        while (j < s_.size() && ident_char(s_[j])) ++j;
        while (j < s_.size() && s_[j] == '\'') ++j;
        std::size_t k = j;
        while (k < s_.size() && s_[k] == ' ') ++k;
        if (k < s_.size() && s_[k] == ':') {
          std::string v = s_.substr(i_ + 1, j - i_ - 1);
          i_ = k + 1;
          return {c == 'A' ? Tok::QAll : Tok::QEx, v, p};
        }
      }
      std::string id = read_ident();
      if (id == "T") return {Tok::Top, id, p};
      if (id == "F") return {Tok::Bot, id, p};
      return {Tok::Ident, id, p};
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", p);
  }
};

class Parser {
public:
  explicit Parser(const std::string &text) : toks_(Lexer(text).run()) {}

  FormulaPtr formula_only() {
    auto f = imp();
    expect(Tok::End, "end of input");
    return f;
  }

  Sequent sequent() {
    Sequent s;
    if (peek().kind == Tok::Turnstile) {
      ++k_;
      s.succedent = imp();
      expect(Tok::End, "end of input");
      return s;
    }
    std::vector<FormulaPtr> items{imp()};
    while (peek().kind == Tok::Comma) {
      ++k_;
      items.push_back(imp());
    }
    if (peek().kind == Tok::Turnstile) {
      ++k_;
      s.antecedent = std::move(items);
      s.succedent = imp();
    } else if (items.size() == 1) {
      s.succedent = items[0];
    } else {
      throw SyntaxError("expected '=>'", peek().pos);
    }
    expect(Tok::End, "end of input");
    return s;
  }

  TermPtr term_only() {
    auto t = sum();
    expect(Tok::End, "end of input");
    return t;
  }

private:
  std::vector<Token> toks_;
  std::size_t k_ = 0;
  std::map<std::string, std::size_t> pred_arity_;
  std::map<std::string, std::size_t> func_arity_;

  const Token &peek() const { return toks_[k_]; }

  void expect(Tok kind, const char *what) {
    if (peek().kind != kind) throw SyntaxError(std::string("expected ") + what, peek().pos);
    ++k_;
  }

  void check_arity(std::map<std::string, std::size_t> &table, const std::string &name, std::size_t n) {
    auto [it, fresh] = table.emplace(name, n);
    if (!fresh && it->second != n)
      throw ArityError("'" + name + "' used with " + std::to_string(it->second) + " and " + std::to_string(n) +
                       " arguments");
  }

  FormulaPtr imp() {
    auto a = disj();
    if (peek().kind == Tok::Imp) {
      ++k_;
      return implies(a, imp());
    }
    return a;
  }

  FormulaPtr disj() {
    auto a = conj();
    if (peek().kind == Tok::Or || peek().kind == Tok::COr) {
      Op op = peek().kind == Tok::Or ? Op::Or : Op::COr;
      ++k_;
      return Formula::binary(op, a, disj());
    }
    return a;
  }

  FormulaPtr conj() {
    auto a = unary();
    if (peek().kind == Tok::And || peek().kind == Tok::CAnd) {
      Op op = peek().kind == Tok::And ? Op::And : Op::CAnd;
      ++k_;
      return Formula::binary(op, a, conj());
    }
    return a;
  }

  FormulaPtr unary() {
    const Token &t = peek();
    switch (t.kind) {
      case Tok::Not: ++k_; return negate(unary());
      case Tok::QAll:
      case Tok::QEx:
      case Tok::QCAll:
      case Tok::QCEx: {
        Op op = t.kind == Tok::QAll ? Op::All : t.kind == Tok::QEx ? Op::Ex : t.kind == Tok::QCAll ? Op::CAll : Op::CEx;
        std::string v = t.text;
        ++k_;
        return Formula::quant(op, v, unary());
      }
      default: return primary();
    }
  }

  FormulaPtr primary() {
    const Token &t = peek();
    switch (t.kind) {
      case Tok::Top: ++k_; return Formula::top();
      case Tok::Bot: ++k_; return Formula::bot();
      case Tok::LParen: {
        std::size_t save = k_;
        auto saved_p = pred_arity_;
        auto saved_f = func_arity_;
        try {
          auto lhs = sum();
          if (peek().kind == Tok::Eq) {
            ++k_;
            auto rhs = sum();
            register_term(lhs);
            register_term(rhs);
            return Formula::atom("=", {lhs, rhs});
          }
        } catch (const SyntaxError &) {
        }
        k_ = save;
        pred_arity_ = saved_p;
        func_arity_ = saved_f;
        ++k_;
        auto f = imp();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
      case Tok::Num: return atom();
      default: throw SyntaxError("expected formula", t.pos);
    }
  }

  void register_term(const TermPtr &t) {
    if (t->kind != Term::Kind::App) return;
    if (!is_infix(t)) check_arity(func_arity_, t->name, t->args.size());
    for (const auto &a : t->args) register_term(a);
  }

  FormulaPtr atom() {
    std::size_t pos = peek().pos;
    auto t = sum();
    if (peek().kind == Tok::Eq) {
      ++k_;
      auto rhs = sum();
      register_term(t);
      register_term(rhs);
      return Formula::atom("=", {t, rhs});
    }
    if (t->kind == Term::Kind::Var) {
      check_arity(pred_arity_, t->name, 0);
      return Formula::atom(t->name, {});
    }
    if (t->kind == Term::Kind::App && !is_infix(t)) {
      check_arity(pred_arity_, t->name, t->args.size());
      for (const auto &a : t->args) register_term(a);
      return Formula::atom(t->name, t->args);
    }
    throw SyntaxError("expected atomic formula", pos);
  }

  TermPtr sum() {
    auto a = prod();
    while (peek().kind == Tok::Plus) {
      ++k_;
      a = Term::app("+", {a, prod()});
    }
    return a;
  }

  TermPtr prod() {
    auto a = prim();
    while (peek().kind == Tok::Star) {
      ++k_;
      a = Term::app("*", {a, prim()});
    }
    return a;
  }

  TermPtr prim() {
    const Token &t = peek();
    if (t.kind == Tok::Num) {
      ++k_;
      return Term::constant(t.text);
    }
    if (t.kind == Tok::LParen) {
      ++k_;
      auto inner = sum();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      std::string name = t.text;
      ++k_;
      if (peek().kind != Tok::LParen) return Term::var(name);
      ++k_;
      std::vector<TermPtr> args;
      args.push_back(sum());
      while (peek().kind == Tok::Comma) {
        ++k_;
        args.push_back(sum());
      }
      expect(Tok::RParen, "')'");
      return Term::app(name, std::move(args));
    }
    throw SyntaxError("expected term", t.pos);
  }
};

FormulaPtr rename_bound(const FormulaPtr &f, const std::set<std::string> &clash, std::set<std::string> &used) {
  switch (f->op) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom:
    case Op::NegAtom: return f;
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr:
      return Formula::binary(f->op, rename_bound(f->kids[0], clash, used), rename_bound(f->kids[1], clash, used));
    default: {
      auto body = rename_bound(f->kids[0], clash, used);
      if (!clash.count(f->name)) return Formula::quant(f->op, f->name, body);
      std::string v = f->name + "'";
      while (used.count(v) || clash.count(v)) v += "'";
      used.insert(v);
      return Formula::quant(f->op, v, substitute(body, f->name, Term::var(v)));
    }
  }
}

}  // namespace

FormulaPtr parse_formula(const std::string &text) {
  auto f = Parser(text).formula_only();
  auto fv = free_vars(f);
  std::set<std::string> clash(fv.begin(), fv.end());
  auto used = all_vars(f);
  return rename_bound(f, clash, used);
}

Sequent parse_sequent(const std::string &text) {
  auto s = Parser(text).sequent();
  auto fv = free_vars(s);
  std::set<std::string> clash(fv.begin(), fv.end());
  auto used = all_vars(s);
  for (auto &a : s.antecedent) a = rename_bound(a, clash, used);
  s.succedent = rename_bound(s.succedent, clash, used);
  return s;
}

TermPtr parse_term(const std::string &text) { return Parser(text).term_only(); }

// ---------------------------------------------------------------- connectives

FormulaPtr negate(const FormulaPtr &f) {
  switch (f->op) {
    case Op::Top: return Formula::bot();
    case Op::Bot: return Formula::top();
    case Op::Atom: return Formula::atom(f->name, f->terms, true);
    case Op::NegAtom: return Formula::atom(f->name, f->terms, false);
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr: return Formula::binary(dual(f->op), negate(f->kids[0]), negate(f->kids[1]));
    default: return Formula::quant(dual(f->op), f->name, negate(f->kids[0]));
  }
}

FormulaPtr implies(const FormulaPtr &a, const FormulaPtr &b) { return Formula::binary(Op::Or, negate(a), b); }

FormulaPtr conjunction(const std::vector<FormulaPtr> &fs) {
  if (fs.empty()) return Formula::top();
  FormulaPtr acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::binary(Op::And, fs[i], acc);
  return acc;
}

FormulaPtr disjunction(const std::vector<FormulaPtr> &fs) {
  if (fs.empty()) return Formula::bot();
  FormulaPtr acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::binary(Op::Or, fs[i], acc);
  return acc;
}

FormulaPtr elementarize(const FormulaPtr &f) {
  switch (f->op) {
    case Op::CAnd:
    case Op::CAll: return Formula::top();
    case Op::COr:
    case Op::CEx: return Formula::bot();
    case Op::And:
    case Op::Or: return Formula::binary(f->op, elementarize(f->kids[0]), elementarize(f->kids[1]));
    case Op::All:
    case Op::Ex: return Formula::quant(f->op, f->name, elementarize(f->kids[0]));
    default: return f;
  }
}

FormulaPtr elementarize_sequent(const Sequent &s) {
  auto succ = elementarize(s.succedent);
  if (s.antecedent.empty()) return succ;
  std::vector<FormulaPtr> ants;
  for (const auto &a : s.antecedent) ants.push_back(elementarize(a));
  return implies(conjunction(ants), succ);
}

bool is_elementary(const FormulaPtr &f) {
  if (is_choice(f->op)) return false;
  for (const auto &k : f->kids)
    if (!is_elementary(k)) return false;
  return true;
}

bool is_elementary(const Sequent &s) {
  for (const auto &a : s.antecedent)
    if (!is_elementary(a)) return false;
  return is_elementary(s.succedent);
}

int choice_count(const FormulaPtr &f) {
  int n = is_choice(f->op) ? 1 : 0;
  for (const auto &k : f->kids) n += choice_count(k);
  return n;
}

// ---------------------------------------------------------------- variables and substitution

namespace {

void term_vars(const TermPtr &t, std::set<std::string> &out) {
  if (t->kind == Term::Kind::Var) out.insert(t->name);
  for (const auto &a : t->args) term_vars(a, out);
}

void term_consts(const TermPtr &t, std::set<std::string> &out) {
  if (t->kind == Term::Kind::Const) out.insert(t->name);
  for (const auto &a : t->args) term_consts(a, out);
}

void collect_free(const FormulaPtr &f, std::set<std::string> &bound, std::set<std::string> &out) {
  if (f->op == Op::Atom || f->op == Op::NegAtom) {
    std::set<std::string> vs;
    for (const auto &t : f->terms) term_vars(t, vs);
    for (const auto &v : vs)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (is_quantifier(f->op)) {
    bool fresh = bound.insert(f->name).second;
    collect_free(f->kids[0], bound, out);
    if (fresh) bound.erase(f->name);
    return;
  }
  for (const auto &k : f->kids) collect_free(k, bound, out);
}

bool term_has_var(const TermPtr &t, const std::string &v) {
  if (t->kind == Term::Kind::Var) return t->name == v;
  for (const auto &a : t->args)
    if (term_has_var(a, v)) return true;
  return false;
}

}  // namespace

std::vector<std::string> free_vars(const FormulaPtr &f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return {out.begin(), out.end()};
}

std::vector<std::string> free_vars(const Sequent &s) {
  std::set<std::string> out;
  for (const auto &a : s.antecedent) {
    std::set<std::string> bound;
    collect_free(a, bound, out);
  }
  std::set<std::string> bound;
  collect_free(s.succedent, bound, out);
  return {out.begin(), out.end()};
}

bool occurs_free(const FormulaPtr &f, const std::string &var) {
  auto fv = free_vars(f);
  return std::binary_search(fv.begin(), fv.end(), var);
}

std::set<std::string> all_vars(const FormulaPtr &f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr &)> go = [&](const FormulaPtr &g) {
    if (is_quantifier(g->op)) out.insert(g->name);
    for (const auto &t : g->terms) term_vars(t, out);
    for (const auto &k : g->kids) go(k);
  };
  go(f);
  return out;
}

std::set<std::string> all_vars(const Sequent &s) {
  std::set<std::string> out = all_vars(s.succedent);
  for (const auto &a : s.antecedent) {
    auto v = all_vars(a);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::set<std::string> bound_vars(const FormulaPtr &f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr &)> go = [&](const FormulaPtr &g) {
    if (is_quantifier(g->op)) out.insert(g->name);
    for (const auto &k : g->kids) go(k);
  };
  go(f);
  return out;
}

std::set<std::string> constants(const FormulaPtr &f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr &)> go = [&](const FormulaPtr &g) {
    for (const auto &t : g->terms) term_consts(t, out);
    for (const auto &k : g->kids) go(k);
  };
  go(f);
  return out;
}

std::set<std::string> constants(const Sequent &s) {
  std::set<std::string> out = constants(s.succedent);
  for (const auto &a : s.antecedent) {
    auto c = constants(a);
    out.insert(c.begin(), c.end());
  }
  return out;
}

TermPtr substitute(const TermPtr &t, const Bindings &b) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = b.find(t->name);
      return it == b.end() ? t : it->second;
    }
    case Term::Kind::Const: return t;
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      bool changed = false;
      for (const auto &a : t->args) {
        args.push_back(substitute(a, b));
        changed |= args.back() != a;
      }
      return changed ? Term::app(t->name, std::move(args)) : t;
    }
  }
  return t;
}

FormulaPtr substitute(const FormulaPtr &f, const Bindings &b) {
  if (b.empty()) return f;
  switch (f->op) {
    case Op::Top:
    case Op::Bot: return f;
    case Op::Atom:
    case Op::NegAtom: {
      std::vector<TermPtr> ts;
      bool changed = false;
      for (const auto &t : f->terms) {
        ts.push_back(substitute(t, b));
        changed |= ts.back() != t;
      }
      return changed ? Formula::atom(f->name, std::move(ts), f->op == Op::NegAtom) : f;
    }
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr: {
      auto a = substitute(f->kids[0], b);
      auto c = substitute(f->kids[1], b);
      return (a == f->kids[0] && c == f->kids[1]) ? f : Formula::binary(f->op, a, c);
    }
    default: {
      Bindings inner = b;
      inner.erase(f->name);
      if (inner.empty()) return f;
      for (const auto &[v, t] : inner) {
        if (term_has_var(t, f->name) && occurs_free(f->kids[0], v))
          throw CollisionError("substituting " + to_string(t) + " for " + v + " under binder " + f->name);
      }
      auto body = substitute(f->kids[0], inner);
      return body == f->kids[0] ? f : Formula::quant(f->op, f->name, body);
    }
  }
}

FormulaPtr substitute(const FormulaPtr &f, const std::string &var, const TermPtr &t) {
  return substitute(f, Bindings{{var, t}});
}

Sequent substitute(const Sequent &s, const Bindings &b) {
  Sequent out;
  for (const auto &a : s.antecedent) out.antecedent.push_back(substitute(a, b));
  out.succedent = substitute(s.succedent, b);
  return out;
}

namespace {

TermPtr rename_term_constants(const TermPtr &t, const std::map<std::string, std::string> &m) {
  if (t->kind == Term::Kind::Const) {
    auto it = m.find(t->name);
    return it == m.end() ? t : Term::constant(it->second);
  }
  if (t->kind == Term::Kind::Var) return t;
  std::vector<TermPtr> args;
  for (const auto &a : t->args) args.push_back(rename_term_constants(a, m));
  return Term::app(t->name, std::move(args));
}

}  // namespace

FormulaPtr rename_constants(const FormulaPtr &f, const std::map<std::string, std::string> &m) {
  if (m.empty()) return f;
  switch (f->op) {
    case Op::Top:
    case Op::Bot: return f;
    case Op::Atom:
    case Op::NegAtom: {
      std::vector<TermPtr> ts;
      for (const auto &t : f->terms) ts.push_back(rename_term_constants(t, m));
      return Formula::atom(f->name, std::move(ts), f->op == Op::NegAtom);
    }
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr: return Formula::binary(f->op, rename_constants(f->kids[0], m), rename_constants(f->kids[1], m));
    default: return Formula::quant(f->op, f->name, rename_constants(f->kids[0], m));
  }
}

// ---------------------------------------------------------------- numerals

bool is_numeral(const std::string &s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return s == "0" || s[0] == '1';
}

std::size_t numeral_size(const std::string &numeral) { return numeral == "0" ? 0 : numeral.size(); }

std::size_t native_magnitude(const Sequent &s) {
  std::size_t m = 0;
  for (const auto &c : constants(s)) m = std::max(m, numeral_size(c));
  return m;
}

std::string numeral_of(unsigned long long v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + (v & 1)));
    v >>= 1;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned long long numeral_value(const std::string &numeral) {
  unsigned long long v = 0;
  for (char c : numeral) {
    if (v >> 62) return ~0ULL;
    v = (v << 1) | static_cast<unsigned long long>(c - '0');
  }
  return v;
}

std::string smallest_fresh_numeral(const std::set<std::string> &avoid) {
  for (unsigned long long v = 0;; ++v) {
    auto n = numeral_of(v);
    if (!avoid.count(n)) return n;
  }
}

std::string fresh_variable(const std::string &base, const std::set<std::string> &avoid) {
  std::string stem = base;
  while (!stem.empty() && (stem.back() == '\'' || std::isdigit(static_cast<unsigned char>(stem.back()))))
    stem.pop_back();
  if (stem.empty()) stem = "v";
  for (int i = 1;; ++i) {
    auto v = stem + std::to_string(i);
    if (!avoid.count(v)) return v;
  }
}

// ---------------------------------------------------------------- occurrences

std::vector<Path> surface_occurrences(const FormulaPtr &f, Op kind) {
  std::vector<Path> out;
  Path cur;
  std::function<void(const FormulaPtr &)> go = [&](const FormulaPtr &g) {
    if (g->op == kind) out.push_back(cur);
    if (is_choice(g->op)) return;
    for (std::size_t i = 0; i < g->kids.size(); ++i) {
      cur.push_back(static_cast<int>(i));
      go(g->kids[i]);
      cur.pop_back();
    }
  };
  go(f);
  return out;
}

FormulaPtr subformula_at(const FormulaPtr &f, const Path &p) {
  FormulaPtr cur = f;
  for (int i : p) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->kids.size()) return nullptr;
    cur = cur->kids[i];
  }
  return cur;
}

FormulaPtr replace_at(const FormulaPtr &f, const Path &p, const FormulaPtr &repl) {
  std::function<FormulaPtr(const FormulaPtr &, std::size_t)> go = [&](const FormulaPtr &g, std::size_t d) {
    if (d == p.size()) return repl;
    int i = p[d];
    if (is_binary(g->op)) {
      auto a = i == 0 ? go(g->kids[0], d + 1) : g->kids[0];
      auto b = i == 1 ? go(g->kids[1], d + 1) : g->kids[1];
      return Formula::binary(g->op, a, b);
    }
    return Formula::quant(g->op, g->name, go(g->kids[0], d + 1));
  };
  return go(f, 0);
}

std::string move_prefix(const FormulaPtr &f, const Path &p) {
  std::string out;
  FormulaPtr cur = f;
  for (int i : p) {
    if (cur->op == Op::And || cur->op == Op::Or) out += std::to_string(i) + ".";
    cur = cur->kids[i];
  }
  return out;
}

std::optional<TermPtr> match_instance(const FormulaPtr &g, const std::string &x, const FormulaPtr &h,
                                      bool *unconstrained) {
  TermPtr bound_to;
  std::function<bool(const TermPtr &, const TermPtr &, bool)> mt = [&](const TermPtr &a, const TermPtr &b,
                                                                       bool shadowed) -> bool {
    if (!shadowed && a->kind == Term::Kind::Var && a->name == x) {
      if (!bound_to) {
        bound_to = b;
        return true;
      }
      return term_equal(bound_to, b);
    }
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!mt(a->args[i], b->args[i], shadowed)) return false;
    return true;
  };
  std::function<bool(const FormulaPtr &, const FormulaPtr &, bool)> mf = [&](const FormulaPtr &a,
                                                                             const FormulaPtr &b,
                                                                             bool shadowed) -> bool {
    if (a->op != b->op || a->name != b->name || a->terms.size() != b->terms.size() ||
        a->kids.size() != b->kids.size())
      return false;
    for (std::size_t i = 0; i < a->terms.size(); ++i)
      if (!mt(a->terms[i], b->terms[i], shadowed)) return false;
    bool sh = shadowed || (is_quantifier(a->op) && a->name == x);
    for (std::size_t i = 0; i < a->kids.size(); ++i)
      if (!mf(a->kids[i], b->kids[i], sh)) return false;
    return true;
  };
  if (!mf(g, h, false)) return std::nullopt;
  if (unconstrained) *unconstrained = !bound_to;
  return bound_to;
}

}  // namespace cl12
