#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cl12 {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string &msg, std::size_t pos)
      : std::runtime_error("syntax error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

class ArityError : public std::runtime_error {
public:
  explicit ArityError(const std::string &msg) : std::runtime_error("arity mismatch: " + msg) {}
};

class CollisionError : public std::runtime_error {
public:
  explicit CollisionError(const std::string &msg) : std::runtime_error("variable collision: " + msg) {}
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Application names "+" and "*" print infix.
struct Term {
  enum class Kind { Var, Const, App };
  Kind kind;
  std::string name;
  std::vector<TermPtr> args;

  static TermPtr var(std::string n);
  static TermPtr constant(std::string numeral);
  static TermPtr app(std::string f, std::vector<TermPtr> args);
};

enum class Op { Top, Bot, Atom, NegAtom, And, Or, CAnd, COr, All, Ex, CAll, CEx };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Negation-normal form: negation sits only on atoms. Atom predicate "=" is equality.
struct Formula {
  Op op;
  std::string name;            // predicate letter for atoms, bound variable for quantifiers
  std::vector<TermPtr> terms;  // atom arguments
  std::vector<FormulaPtr> kids;

  static FormulaPtr top();
  static FormulaPtr bot();
  static FormulaPtr atom(std::string pred, std::vector<TermPtr> args, bool negated = false);
  static FormulaPtr binary(Op op, FormulaPtr a, FormulaPtr b);
  static FormulaPtr quant(Op op, std::string var, FormulaPtr body);
};

struct Sequent {
  std::vector<FormulaPtr> antecedent;
  FormulaPtr succedent;
};

using Path = std::vector<int>;

bool is_choice(Op op);
bool is_quantifier(Op op);
bool is_binary(Op op);
Op dual(Op op);

bool term_equal(const TermPtr &a, const TermPtr &b);
bool formula_equal(const FormulaPtr &a, const FormulaPtr &b);
bool sequent_equal(const Sequent &a, const Sequent &b);

std::string to_string(const TermPtr &t);
std::string to_string(const FormulaPtr &f);
std::string to_string(const Sequent &s);

FormulaPtr parse_formula(const std::string &text);
Sequent parse_sequent(const std::string &text);
TermPtr parse_term(const std::string &text);

FormulaPtr negate(const FormulaPtr &f);
FormulaPtr implies(const FormulaPtr &a, const FormulaPtr &b);
FormulaPtr conjunction(const std::vector<FormulaPtr> &fs);
FormulaPtr disjunction(const std::vector<FormulaPtr> &fs);

FormulaPtr elementarize(const FormulaPtr &f);
FormulaPtr elementarize_sequent(const Sequent &s);
bool is_elementary(const FormulaPtr &f);
bool is_elementary(const Sequent &s);
int choice_count(const FormulaPtr &f);

using Bindings = std::map<std::string, TermPtr>;
TermPtr substitute(const TermPtr &t, const Bindings &b);
FormulaPtr substitute(const FormulaPtr &f, const Bindings &b);
FormulaPtr substitute(const FormulaPtr &f, const std::string &var, const TermPtr &t);
Sequent substitute(const Sequent &s, const Bindings &b);
// Replaces constants by terms (used to rename constants).
FormulaPtr rename_constants(const FormulaPtr &f, const std::map<std::string, std::string> &m);

std::vector<std::string> free_vars(const FormulaPtr &f);
std::vector<std::string> free_vars(const Sequent &s);
std::set<std::string> all_vars(const FormulaPtr &f);
std::set<std::string> all_vars(const Sequent &s);
std::set<std::string> bound_vars(const FormulaPtr &f);
std::set<std::string> constants(const FormulaPtr &f);
std::set<std::string> constants(const Sequent &s);
bool occurs_free(const FormulaPtr &f, const std::string &var);

std::size_t numeral_size(const std::string &numeral);
bool is_numeral(const std::string &s);
std::size_t native_magnitude(const Sequent &s);

std::vector<Path> surface_occurrences(const FormulaPtr &f, Op kind);
FormulaPtr subformula_at(const FormulaPtr &f, const Path &p);
FormulaPtr replace_at(const FormulaPtr &f, const Path &p, const FormulaPtr &repl);
// Move prefix addressing the subformula at p ("k." per parallel child, nothing for blind quantifiers).
std::string move_prefix(const FormulaPtr &f, const Path &p);

// If h == g[x := t] for some term t, returns t (nullptr if x is not free in g and h == g).
std::optional<TermPtr> match_instance(const FormulaPtr &g, const std::string &x, const FormulaPtr &h,
                                      bool *unconstrained = nullptr);

std::string fresh_variable(const std::string &base, const std::set<std::string> &avoid);
std::string smallest_fresh_numeral(const std::set<std::string> &avoid);
std::string numeral_of(unsigned long long v);
unsigned long long numeral_value(const std::string &numeral);

}  // namespace cl12
