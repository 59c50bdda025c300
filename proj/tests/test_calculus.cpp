#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "cl12/calculus.hpp"
#include "cl12/io.hpp"

using namespace cl12;

namespace {

const char *kCube = "Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)";

ProveStatus status(const std::string &s) { return prove(parse_sequent(s)).status; }

}  // namespace

TEST_CASE("hand proofs check") {
  auto cube = load_proof("tests/data/cube_proof.json");
  CHECK(cube.size() == 10);
  auto r = check_proof(cube);
  CHECK_MESSAGE(r.ok, r.violation);
  CHECK(sequent_equal(cube.back().seq, parse_sequent(kCube)));
  auto ex = load_proof("tests/data/choose_exists_proof.json");
  CHECK(check_proof(ex).ok);
}

TEST_CASE("tampered choose parameter is reported at its step") {
  auto cube = load_proof("tests/data/cube_proof.json");
  cube[1].rule.term = "s";
  auto r = check_proof(cube);
  CHECK(!r.ok);
  CHECK(r.step == 1);
  CHECK(r.violation.find("premise mismatch") != std::string::npos);
}

TEST_CASE("wait violations are named") {
  auto x = parse_sequent("=> (?x: ~p(x)) \\/ Ax: p(x)");
  CHECK(check_step(x, Rule{RuleKind::Wait}, {}).find("unstable") == 0);
  auto y = parse_sequent("=> !x: p(x)");
  CHECK(check_step(y, Rule{RuleKind::Wait}, {}).find("missing wait premise") == 0);
  // The instantiating variable must not occur in the conclusion.
  auto z = parse_sequent("p(y) => !x: p(x)");
  CHECK(!check_step(z, Rule{RuleKind::Wait}, {parse_sequent("p(y) => p(y)")}).empty());
  CHECK(check_step(z, Rule{RuleKind::Wait}, {parse_sequent("p(y) => p(w)")}).empty());
  CHECK(check_step(parse_sequent("Ax: p(x) => !x: p(x)"), Rule{RuleKind::Wait},
                   {parse_sequent("Ax: p(x) => p(y)"), parse_sequent("=> T")})
            .empty());
}

TEST_CASE("wait premise generation") {
  auto x = parse_sequent("p | q, ?z: r(z,y) => (a & b) \\/ !x: s(x)");
  auto ps = wait_premises(x);
  CHECK(ps.size() == 6);
  auto xs = all_vars(x);
  for (const auto &p : ps)
    for (const auto &v : free_vars(p))
      if (!xs.count(v)) CHECK(v != "y");
}

TEST_CASE("replicate appends a copy") {
  auto x = parse_sequent("p & q, r => s");
  auto p = rule_premise(x, Rule{RuleKind::Replicate, 0});
  CHECK(to_string(p) == "p & q, r, p & q => s");
  CHECK_THROWS_AS(rule_premise(x, Rule{RuleKind::Replicate, 2}), RuleError);
}

TEST_CASE("search finds and refutes the quantifier-order examples") {
  auto r = prove(parse_sequent("=> !x: ?y: (p(x) -> p(y))"));
  REQUIRE(r.status == ProveStatus::Proved);
  CHECK(r.proof.size() == 3);
  CHECK(check_proof(r.proof).ok);
  CHECK(status("=> ?y: !x: (p(x) -> p(y))") == ProveStatus::Unprovable);
  CHECK(status("=> Ax: p(x) -> !x: p(x)") == ProveStatus::Proved);
  CHECK(status("=> !x: p(x) -> Ax: p(x)") == ProveStatus::Unprovable);
}

TEST_CASE("antecedent reuse needs the sequent form") {
  auto r = prove(parse_sequent("p & q => (p & q) /\\ (p & q)"));
  REQUIRE(r.status == ProveStatus::Proved);
  CHECK(check_proof(r.proof).ok);
  CHECK(status("=> (p & q) -> (p & q) /\\ (p & q)") == ProveStatus::Unprovable);
}

TEST_CASE("search rediscovers the cube proof") {
  auto t0 = std::chrono::steady_clock::now();
  auto r = prove(parse_sequent(kCube));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  REQUIRE(r.status == ProveStatus::Proved);
  CHECK(check_proof(r.proof).ok);
  CHECK(secs < 10.0);
}

TEST_CASE("conservative on elementary sequents") {
  for (const char *s : {"=> p \\/ ~p", "p => q", "Ax: p(x) => p(c)", "p(x) => Ax: p(x)", "x = y, p(x) => p(y)"}) {
    auto x = parse_sequent(s);
    auto v = is_stable(x);
    auto r = prove(x);
    CHECK((r.status == ProveStatus::Proved) == (v.kind == VerdictKind::Valid));
    CHECK((r.status == ProveStatus::Unprovable) == (v.kind == VerdictKind::Invalid));
  }
}

TEST_CASE("property: every found proof re-checks") {
  std::mt19937 rng(5);
  const char *atoms[] = {"p", "q", "r(x)", "r(y)", "r(0)"};
  std::function<std::string(int)> gen = [&](int d) -> std::string {
    if (d == 0) return atoms[rng() % 5];
    switch (rng() % 6) {
      case 0: return "(" + gen(d - 1) + " & " + gen(d - 1) + ")";
      case 1: return "(" + gen(d - 1) + " | " + gen(d - 1) + ")";
      case 2: return "(" + gen(d - 1) + " /\\ " + gen(d - 1) + ")";
      case 3: return "(" + gen(d - 1) + " \\/ ~" + atoms[rng() % 5] + ")";
      case 4: return "!x: " + gen(d - 1);
      default: return "?y: " + gen(d - 1);
    }
  };
  int proved = 0;
  for (int i = 0; i < 60; ++i) {
    auto text = gen(2) + " => " + gen(2);
    Sequent s;
    try {
      s = parse_sequent(text);
    } catch (const std::exception &) {
      continue;
    }
    ProverOptions o;
    o.replicate_cap = 1;
    auto r = prove(s, o);
    if (r.status == ProveStatus::Proved) {
      ++proved;
      auto c = check_proof(r.proof);
      CHECK_MESSAGE(c.ok, text << ": " << c.violation);
      CHECK(sequent_equal(r.proof.back().seq, s));
    }
  }
  CHECK(proved > 0);
}

TEST_CASE("proof json round trip") {
  auto cube = load_proof("tests/data/cube_proof.json");
  auto again = proof_from_json(proof_to_json(cube));
  REQUIRE(again.size() == cube.size());
  for (std::size_t i = 0; i < cube.size(); ++i) {
    CHECK(sequent_equal(again[i].seq, cube[i].seq));
    CHECK(again[i].premises == cube[i].premises);
  }
}
