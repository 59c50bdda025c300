#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cl12/runtime.hpp"

using namespace cl12;

namespace {

RunRecord doubling_play(const std::string &c) {
  DoublingStrategy m;
  ScriptedEnvironment env({{0, "#" + c}});
  return play(m, env, initial_formula_state(parse_formula("!x: ?y: y = 10*x")), Interpretation::arithmetic(6));
}

}  // namespace

TEST_CASE("magnitude of moves") {
  CHECK(magnitude("0.0") == 0);
  CHECK(magnitude("1.1.#10") == 2);
  CHECK(magnitude("0.#1000") == 4);
  CHECK(magnitude("#0") == 0);
  CHECK(magnitude("0.#11.1.#1000") == 4);
  CHECK_THROWS_AS(magnitude("1.#"), MoveFormatError);
  CHECK_THROWS_AS(magnitude("#01"), MoveFormatError);
}

TEST_CASE("do-nothing on a trivially true sequent") {
  DoNothingStrategy m;
  ScriptedEnvironment env({});
  auto rec = play(m, env, initial_state(parse_sequent("=> T")), Interpretation{});
  CHECK(rec.winner == Player::Top);
  CHECK(rec.run.empty());
  CHECK(rec.meters.amplitude == 0);
  CHECK(rec.meters.space == 0);
  CHECK(well_behaved_monitor(rec, 0).replications == 0);
  CHECK(check_amplitude(rec, [](std::size_t) { return 0; }));
}

TEST_CASE("doubling plays in amplitude l+1") {
  for (const char *c : {"1", "101", "11111"}) {
    auto rec = doubling_play(c);
    REQUIRE(rec.run.size() == 2);
    CHECK(rec.winner == Player::Top);
    CHECK(rec.meters.amplitude == std::string(c).size() + 1);
    CHECK(check_amplitude(rec, [](std::size_t l) { return l + 1; }));
  }
  CHECK(!check_amplitude(doubling_play("1"), [](std::size_t l) { return l; }));
  auto zero = doubling_play("0");
  CHECK(zero.run.back().move == "#0");
  CHECK(zero.meters.amplitude == 0);
}

TEST_CASE("unarify and tricomplexity") {
  auto plus = unarify([](const std::vector<std::size_t> &v) { return v[0] + v[1]; }, 2);
  CHECK(plus(3) == 6);
  auto id = unarify([](const std::vector<std::size_t> &v) { return v[0]; }, 1);
  CHECK(id(7) == 7);
  auto rec = doubling_play("101");
  CHECK(tricomplexity(
      rec, [](std::size_t l) { return l + 1; }, [](std::size_t) { return 0; }, [](std::size_t l) { return l; }));
  CHECK(!tricomplexity(
      rec, [](std::size_t l) { return l; }, [](std::size_t) { return 0; }, [](std::size_t l) { return l; }));
}

TEST_CASE("unfocused antecedent move raises the focus flag") {
  ScriptedStrategy m({"0.0.:", "0.0..0"});
  ScriptedEnvironment env({});
  Interpretation I;
  I.predicates["p"] = PredicateDef{};
  I.predicates["q"] = PredicateDef{};
  auto rec = play(m, env, initial_state(parse_sequent("p & q => p")), I);
  REQUIRE(!rec.illegal);
  auto wb = well_behaved_monitor(rec, 1);
  CHECK(wb.replications == 1);
  CHECK(wb.replications_within_cap);
  CHECK(!wb.focused);
  CHECK(!well_behaved_monitor(rec, 0).replications_within_cap);
}

TEST_CASE("illegal moves decide the play") {
  ScriptedStrategy bad({"1.#1"});
  ScriptedEnvironment quiet({});
  auto rec = play(bad, quiet, initial_state(parse_sequent("=> p | q")), Interpretation{});
  CHECK(rec.illegal);
  CHECK(rec.offender == Player::Top);
  CHECK(rec.winner == Player::Bot);

  DoNothingStrategy idle;
  ScriptedEnvironment rude({{0, "1.0"}});
  auto rec2 = play(idle, rude, initial_state(parse_sequent("=> p | q")), Interpretation{});
  CHECK(rec2.winner == Player::Top);
  ScriptedEnvironment rude2({{0, "1.0"}});
  PlayOptions clean;
  clean.clean_environment = true;
  auto rec3 = play(idle, rude2, initial_state(parse_sequent("=> p | q")), Interpretation{}, clean);
  CHECK(!rec3.illegal);
  CHECK(rec3.rejected.size() == 1);
  CHECK(rec3.winner == Player::Bot);
}

TEST_CASE("script text round trip") {
  std::vector<ScriptEntry> s{{0, "1.#10"}, {3, "0.1.0.#100"}, {3, "1.0"}, {5, "0.1.1.#1000"}};
  auto back = parse_script(serialize_script(s));
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back[i].tick == s[i].tick);
    CHECK(back[i].move == s[i].move);
  }
  CHECK_THROWS_AS(parse_script("jump 3\n"), MoveFormatError);
}

TEST_CASE("property: meters follow their definitions and replays are bit-exact") {
  auto st = initial_state(parse_sequent("p | q, !x: ?y: r(x,y) => (p & q) \\/ !z: ?w: r(z,w)"));
  Interpretation I;
  I.carrier = 2;
  I.naming_default = 0;
  I.predicates["p"] = PredicateDef{};
  I.predicates["q"] = PredicateDef{};
  I.predicates["r"] = PredicateDef{};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomEnvOptions o;
    o.pool = {"0", "1", "10", "111"};
    ScriptedStrategy m({"0.1.:", "0.1.0.#1", "1.1.#10"});
    RandomEnvironment env(seed, o);
    auto rec = play(m, env, st, I);
    ScriptedStrategy m2({"0.1.:", "0.1.0.#1", "1.1.#10"});
    RandomEnvironment env2(seed, o);
    auto again = play(m2, env2, st, I);
    CHECK(again.run == rec.run);
    CHECK(again.meters.amplitude == rec.meters.amplitude);
    std::size_t prev = 0, amp = 0;
    std::optional<std::size_t> last_bot;
    for (std::size_t i = 0; i < rec.run.size(); ++i) {
      const auto &mr = rec.moves[i];
      CHECK(mr.background >= prev);
      prev = mr.background;
      if (rec.run[i].player == Player::Bot) {
        last_bot = mr.tick;
      } else if (!(rec.illegal && i + 1 == rec.run.size())) {
        amp = std::max(amp, mr.magnitude);
        CHECK(mr.timecost == mr.tick - last_bot.value_or(0));
      }
    }
    CHECK(rec.meters.amplitude == amp);
  }
}
