#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cl12/syntax.hpp"

using namespace cl12;

TEST_CASE("round trip of canonical text") {
  for (const char *s : {"p(x) -> q(x)", "!x: ?y: y = cube(x)", "Ax: cube(x) = (x*x)*x", "(p | q) & r",
                        "p /\\ (q \\/ r)", "~(x = 10)", "Ay: (Even(y) | Odd(y) -> !x: (Even(x+y) | Odd(x+y)))"}) {
    auto f = parse_formula(s);
    auto g = parse_formula(to_string(f));
    CHECK(formula_equal(f, g));
    CHECK(to_string(f) == to_string(g));
  }
}

TEST_CASE("sequent printing") {
  auto s = parse_sequent("Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)");
  CHECK(s.antecedent.size() == 2);
  CHECK(to_string(s) == "Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)");
  CHECK(to_string(parse_sequent("=> T")) == "=> T");
}

TEST_CASE("implication is negation normal") {
  auto f = parse_formula("p & q -> r");
  CHECK(f->op == Op::Or);
  CHECK(f->kids[0]->op == Op::COr);
  CHECK(f->kids[0]->kids[0]->op == Op::NegAtom);
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parse_formula("p &"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("x = 012"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("p(x) & p(x,y)"), ArityError);
}

TEST_CASE("elementarization replaces choice subformulas") {
  auto f = parse_formula("(p | q) /\\ !x: r(x) /\\ Ax: ?y: s(x,y)");
  CHECK(to_string(elementarize(f)) == "F /\\ T /\\ Ax: F");
  CHECK(choice_count(f) == 3);
  CHECK(is_elementary(parse_formula("Ax: p(x) \\/ ~q")));
}

TEST_CASE("substitution and free variables") {
  auto f = parse_formula("!z: p(z,y) /\\ q(x)");
  CHECK(free_vars(f) == std::vector<std::string>{"x", "y"});
  auto g = substitute(f, "x", Term::constant("10"));
  CHECK(to_string(g) == "!z: p(z,y) /\\ q(10)");
  CHECK(to_string(substitute(f, "z", Term::constant("1"))) == to_string(f));
}

TEST_CASE("parse-time renaming avoids clashes with free variables") {
  auto s = parse_sequent("p(x) => !x: q(x)");
  auto b = bound_vars(s.succedent);
  CHECK(b.count("x") == 0);
  CHECK(free_vars(s) == std::vector<std::string>{"x"});
}

TEST_CASE("match_instance recovers the instantiating term") {
  auto g = parse_formula("?y: y = cube(x)");
  auto h = parse_formula("?y: y = cube(10)");
  auto t = match_instance(g->kids[0], "y", parse_formula("10 = cube(x)"));
  REQUIRE(t);
  CHECK(to_string(*t) == "10");
  CHECK(!match_instance(g, "y", h));
  auto u = match_instance(g, "x", h);
  REQUIRE(u);
  CHECK(to_string(*u) == "10");
}

TEST_CASE("numerals") {
  CHECK(numeral_of(8) == "1000");
  CHECK(numeral_value("1000") == 8);
  CHECK(numeral_size("0") == 0);
  CHECK(numeral_size("101") == 3);
  CHECK(smallest_fresh_numeral({"0", "1", "11"}) == "10");
}

TEST_CASE("property: negation is an involution and printing round-trips") {
  std::mt19937 rng(7);
  std::function<FormulaPtr(int)> gen = [&](int d) -> FormulaPtr {
    int k = d == 0 ? rng() % 3 : rng() % 9;
    auto v = Term::var(std::string(1, "xy"[rng() % 2]));
    switch (k) {
      case 0: return Formula::atom("p", {v}, rng() % 2);
      case 1: return Formula::atom("=", {v, Term::constant("10")}, rng() % 2);
      case 2: return rng() % 2 ? Formula::top() : Formula::bot();
      case 3: return Formula::binary(Op::And, gen(d - 1), gen(d - 1));
      case 4: return Formula::binary(Op::Or, gen(d - 1), gen(d - 1));
      case 5: return Formula::binary(Op::CAnd, gen(d - 1), gen(d - 1));
      case 6: return Formula::binary(Op::COr, gen(d - 1), gen(d - 1));
      case 7: return Formula::quant(rng() % 2 ? Op::All : Op::CEx, "u", gen(d - 1));
      default: return Formula::quant(rng() % 2 ? Op::Ex : Op::CAll, "w", gen(d - 1));
    }
  };
  for (int i = 0; i < 300; ++i) {
    auto f = gen(4);
    CHECK(formula_equal(negate(negate(f)), f));
    CHECK(formula_equal(parse_formula(to_string(f)), f));
  }
}
