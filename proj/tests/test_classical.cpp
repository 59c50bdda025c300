#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cl12/classical.hpp"

using namespace cl12;

namespace {

VerdictKind kind(const std::string &s) { return decide_validity(parse_formula(s)).kind; }

// Independent oracle: brute force over every interpretation of the given 0-ary and unary letters.
bool brute_valid(const FormulaPtr &f, const std::vector<std::string> &props, const std::vector<std::string> &unary,
                 std::size_t n) {
  std::size_t bits = props.size() + unary.size() * n;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    Interpretation I;
    I.carrier = n;
    std::size_t b = 0;
    for (const auto &p : props) {
      I.predicates[p];
      if (mask >> b++ & 1) I.predicates[p].tuples.insert(std::vector<Element>{});
    }
    for (const auto &p : unary) {
      I.predicates[p];
      for (Element e = 0; e < n; ++e)
        if (mask >> b++ & 1) I.predicates[p].tuples.insert({e});
    }
    if (!truth(I, {}, f)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("trivial and propositional verdicts") {
  CHECK(kind("Ax: p(x) -> T") == VerdictKind::Valid);
  CHECK(kind("p \\/ ~p") == VerdictKind::Valid);
  CHECK(kind("p -> q") == VerdictKind::Invalid);
}

TEST_CASE("countermodel for a lone universal") {
  auto f = parse_formula("F \\/ Ax: p(x)");
  auto v = decide_validity(f);
  REQUIRE(v.kind == VerdictKind::Invalid);
  REQUIRE(v.model);
  CHECK(!truth(v.model->interp, v.model->valuation, f));
  CHECK(v.model->interp.size() == 1);
}

TEST_CASE("equality reasoning for the cube stability query") {
  auto s = parse_sequent("Ax: cube(x) = (x*x)*x, t = s*s, r = t*s => r = cube(s)");
  CHECK(is_stable(s).kind == VerdictKind::Valid);
  auto bad = parse_sequent("Ax: cube(x) = (x*x)*x, t = s*s, r = t*t => r = cube(s)");
  auto v = is_stable(bad);
  REQUIRE(v.kind == VerdictKind::Invalid);
  CHECK(!truth(v.model->interp, v.model->valuation, elementarize_sequent(bad)));
}

TEST_CASE("stability of choice sequents") {
  CHECK(is_stable(parse_sequent("Ax: p(x) => !x: p(x)")).kind == VerdictKind::Valid);
  CHECK(is_stable(parse_sequent("=> (?x: ~p(x)) \\/ Ax: p(x)")).kind == VerdictKind::Invalid);
  CHECK(is_stable(parse_sequent("=> T")).kind == VerdictKind::Valid);
}

TEST_CASE("first-order classics") {
  CHECK(kind("Ax: p(x) -> p(y)") == VerdictKind::Valid);
  CHECK(kind("Ex: (p(x) -> Ay: p(y))") == VerdictKind::Valid);
  CHECK(kind("(Ax: Ey: r(x,y)) -> Ey: Ax: r(x,y)") == VerdictKind::Invalid);
  CHECK(kind("(Ey: Ax: r(x,y)) -> Ax: Ey: r(x,y)") == VerdictKind::Valid);
  CHECK(kind("x = y -> f(x) = f(y)") == VerdictKind::Valid);
  CHECK(kind("f(x) = f(y) -> x = y") == VerdictKind::Invalid);
  CHECK(kind("Ax: Ay: x = y") == VerdictKind::Invalid);
}

TEST_CASE("property: verdicts agree with brute force on monadic formulas") {
  std::mt19937 rng(3);
  std::function<FormulaPtr(int, bool)> gen = [&](int d, bool inside) -> FormulaPtr {
    int k = d == 0 ? rng() % 2 : rng() % 6;
    switch (k) {
      case 0: return Formula::atom(rng() % 2 ? "p" : "q", {}, rng() % 2);
      case 1:
        if (inside) return Formula::atom(rng() % 2 ? "r" : "s", {Term::var("u")}, rng() % 2);
        return Formula::atom("p", {}, rng() % 2);
      case 2: return Formula::binary(Op::And, gen(d - 1, inside), gen(d - 1, inside));
      case 3: return Formula::binary(Op::Or, gen(d - 1, inside), gen(d - 1, inside));
      case 4: return inside ? gen(d - 1, inside) : Formula::quant(Op::All, "u", gen(d - 1, true));
      default: return inside ? gen(d - 1, inside) : Formula::quant(Op::Ex, "u", gen(d - 1, true));
    }
  };
  int decided = 0;
  for (int i = 0; i < 150; ++i) {
    auto f = gen(4, false);
    auto v = decide_validity(f);
    // Monadic formulas with two unary letters have countermodels of size <= 4 when invalid.
    bool truth_small = brute_valid(f, {"p", "q"}, {"r", "s"}, 1) && brute_valid(f, {"p", "q"}, {"r", "s"}, 2) &&
                       brute_valid(f, {"p", "q"}, {"r", "s"}, 3) && brute_valid(f, {"p", "q"}, {"r", "s"}, 4);
    if (v.kind == VerdictKind::Valid) CHECK(truth_small);
    if (v.kind == VerdictKind::Invalid) {
      CHECK(!truth_small);
      CHECK(!truth(v.model->interp, v.model->valuation, f));
    }
    if (v.kind != VerdictKind::Unknown) ++decided;
  }
  CHECK(decided == 150);
}
