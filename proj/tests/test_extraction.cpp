#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cl12/extraction.hpp"
#include "cl12/io.hpp"

using namespace cl12;

namespace {

const char *kCube = "Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)";

std::vector<std::string> numerals(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(numeral_of(i));
  return out;
}

}  // namespace

TEST_CASE("cube strategy against the worked environment") {
  auto k = extract(load_proof("tests/data/cube_proof.json"));
  ScriptedEnvironment env({{0, "1.#10"}, {3, "0.1.0.#100"}, {5, "0.1.1.#1000"}});
  auto I = load_interpretation("tests/data/arith16.json");
  auto rec = play(*k, env, initial_state(parse_sequent(kCube)), I);
  CHECK(rec.winner == Player::Top);
  CHECK(!rec.illegal);
  Run worked = parse_run(
      "T 0.1.:\nB 1.#10\nT 0.1.0.#10\nT 0.1.0.#10\nB 0.1.0.#100\nT 0.1.1.#100\nT 0.1.1.#10\nB 0.1.1.#1000\nT 1.#1000\n");
  Run ours = parse_run(
      "B 1.#10\nT 0.1.:\nT 0.1.0.#10\nT 0.1.0.#10\nB 0.1.0.#100\nT 0.1.1.#100\nT 0.1.1.#10\nB 0.1.1.#1000\nT 1.#1000\n");
  CHECK(to_string(rec.run) == to_string(ours));
  // The root step is Wait, so the replication comes after the environment's choice.
  CHECK(is_delay(rec.run, worked, Player::Top));
  CHECK(to_string(rec.final_state) == to_string(apply_run(rec.initial, worked).state));
  auto wb = well_behaved_monitor(rec, 1);
  CHECK(wb.replications == 1);
  CHECK(wb.focused);
  std::size_t native = native_magnitude(parse_sequent(kCube));
  CHECK(check_amplitude(rec, [&](std::size_t l) { return std::max(l, native); }));
}

TEST_CASE("choose-exists proof copies the environment's constant") {
  auto p = load_proof("tests/data/choose_exists_proof.json");
  for (const char *c : {"0", "1", "1011"}) {
    auto k = extract(p);
    ScriptedEnvironment env({{0, std::string("1.#") + c}});
    Interpretation I;
    I.carrier = 2;
    I.naming_default = 0;
    I.predicates["p"] = PredicateDef{{}, {{1}}};
    auto rec = play(*k, env, initial_state(p.back().seq), I);
    REQUIRE(rec.run.size() == 2);
    CHECK(rec.run[1].move == std::string("1.#") + c);
    CHECK(rec.winner == Player::Top);
  }
}

TEST_CASE("wait-only proof never moves") {
  Proof p{{parse_sequent("=> p \\/ ~p"), Rule{RuleKind::Wait}, {}}};
  auto k = extract(p);
  ScriptedEnvironment env({});
  Interpretation I;
  I.predicates["p"] = PredicateDef{};
  auto rec = play(*k, env, initial_state(p[0].seq), I);
  CHECK(rec.run.empty());
  CHECK(rec.winner == Player::Top);
}

TEST_CASE("unchecked proofs are refused") {
  auto p = load_proof("tests/data/cube_proof.json");
  p[1].rule.term = "s";
  CHECK_THROWS_AS(extract(p), ExtractionError);
}

TEST_CASE("closure variables are read before the body") {
  auto x = parse_sequent("p(y) => ?z: p(z)");
  Proof pr{{parse_sequent("p(y) => p(y)"), Rule{RuleKind::Wait}, {}},
           {x, Rule{RuleKind::ChooseExists, -1, {}, 0, "y"}, {0}}};
  auto k = extract(pr);
  ScriptedEnvironment env({{2, "#101"}});
  Interpretation I;
  I.carrier = 8;
  I.ideal_naming = true;
  I.predicates["p"] = PredicateDef{{}, {{5}}};
  auto rec = play(*k, env, initial_state(x), I);
  REQUIRE(rec.run.size() == 2);
  CHECK(rec.run[1].move == "1.#101");
  CHECK(rec.winner == Player::Top);
}

TEST_CASE("property: extracted strategies win against random environments") {
  auto I = load_interpretation("tests/data/arith16.json");
  auto cube = load_proof("tests/data/cube_proof.json");
  auto s = parse_sequent(kCube);
  std::size_t native = native_magnitude(s);
  RandomEnvOptions o;
  o.pool = numerals(16);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto k = extract(cube, false);
    RandomEnvironment env(seed, o);
    auto rec = play(*k, env, initial_state(s), I);
    CHECK(rec.winner == Player::Top);
    CHECK(rec.flags.empty());
    CHECK(check_amplitude(rec, [&](std::size_t l) { return std::max(l, native); }));
    auto wb = well_behaved_monitor(rec, replicate_count(cube));
    CHECK(wb.replications_within_cap);
    CHECK(wb.focused);
  }
}
