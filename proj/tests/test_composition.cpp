#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cl12/composition.hpp"
#include "cl12/extraction.hpp"

using namespace cl12;

namespace {

const char *kCube = "Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)";
const char *kTwoCopies = "?x: !y: p(x,y) => ?x: (!y: p(x,y) /\\ !y: p(x,y))";

std::vector<std::string> numerals(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(numeral_of(i));
  return out;
}

struct Cube {
  Proof proof = load_proof("tests/data/cube_proof.json");
  Sequent seq = parse_sequent(kCube);
  Interpretation I = load_interpretation("tests/data/arith16.json");
  std::unique_ptr<ProofStrategy> k = extract(proof);
  DoNothingStrategy blind;
  TableSolution times = table_from_function(I, "*", 2);
  std::vector<const Strategy *> solutions() const { return {&blind, &times}; }
  GameState game() const { return initial_formula_state(seq.succedent); }
};

RunRecord run_direct(const Cube &c, EnvironmentAgent &env) {
  auto m = compose_direct(*c.k, c.solutions(), c.seq);
  return play(*m, env, c.game(), c.I);
}

}  // namespace

TEST_CASE("table solutions") {
  auto I = load_interpretation("tests/data/arith16.json");
  auto t = table_from_function(I, "*", 2);
  CHECK(t.table().size() == 256);
  CHECK(t.table().at({"10", "11"}) == "110");
  CHECK(t.table().at({"1000", "10"}) == "0");
  auto back = table_from_json(table_to_json(t));
  CHECK(back.table() == t.table());
  CHECK_THROWS_AS(table_from_json(Json::parse(R"({"arity": 2, "table": {"1": "1"}})")), CompositionError);
  auto fb = table_from_json(Json::parse(R"({"arity": 1, "table": {}, "default": "11"})"));
  ScriptedEnvironment env({{0, "#101"}});
  auto rec = play(fb, env, initial_formula_state(parse_formula("!x: ?y: y = y")), Interpretation::arithmetic(4));
  REQUIRE(rec.run.size() == 2);
  CHECK(rec.run[1].move == "#11");
}

TEST_CASE("b of the cube proof") {
  Cube c;
  CHECK(compute_b(c.proof) == 9);
}

TEST_CASE("direct composition computes cubes") {
  Cube c;
  for (unsigned v = 0; v < 16; ++v) {
    ScriptedEnvironment env({{0, "#" + numeral_of(v)}});
    auto rec = run_direct(c, env);
    REQUIRE(rec.run.size() == 2);
    CHECK(rec.run[1].move == "#" + numeral_of((v * v * v) % 16));
    CHECK(rec.winner == Player::Top);
    CHECK(rec.flags.empty());
  }
  ScriptedEnvironment env({{0, "#10"}});
  auto m = compose_direct(*c.k, c.solutions(), c.seq);
  auto rec = play(*m, env, c.game(), c.I);
  CHECK(to_string(rec.run) == to_string(parse_run("B #10\nT #1000\n")));
  Run k_run = parse_run(
      "B 1.#10\nT 0.1.:\nT 0.1.0.#10\nT 0.1.0.#10\nB 0.1.0.#100\nT 0.1.1.#100\nT 0.1.1.#10\nB 0.1.1.#1000\nT 1.#1000\n");
  CHECK(to_string(m->k_run()) == to_string(k_run));
  REQUIRE(m->copy_run(1, "1"));
  CHECK(to_string(*m->copy_run(1, "1")) == to_string(parse_run("B #100\nB #10\nT #1000\n")));
}

TEST_CASE("composition without antecedent is K's consequent play") {
  auto p = load_proof("tests/data/choose_exists_proof.json");
  const Sequent &s = p.back().seq;
  Interpretation I;
  I.carrier = 2;
  I.naming_default = 0;
  I.predicates["p"] = PredicateDef{{}, {{1}}};
  for (const char *c : {"0", "11"}) {
    auto k = extract(p);
    ScriptedEnvironment e1({{0, std::string("#") + c}});
    auto direct = compose_direct(*k, {}, s);
    auto rec = play(*direct, e1, initial_formula_state(s.succedent), I);
    ScriptedEnvironment e2({{0, std::string("1.#") + c}});
    auto alone = play(*k, e2, initial_state(s), I);
    REQUIRE(rec.run.size() == alone.run.size());
    for (std::size_t i = 0; i < rec.run.size(); ++i) CHECK("1." + rec.run[i].move == alone.run[i].move);
    ScriptedEnvironment e3({{0, std::string("#") + c}});
    auto re = compose_recompute(*extract(p), {}, s, compute_b(p));
    CHECK(play(*re, e3, initial_formula_state(s.succedent), I).run == rec.run);
  }
}

TEST_CASE("recompute mode matches direct mode on the cube") {
  Cube c;
  std::size_t b = compute_b(c.proof);
  ScriptedEnvironment env({{0, "#10"}});
  auto m = compose_recompute(*c.k, c.solutions(), c.seq, b);
  auto rec = play(*m, env, c.game(), c.I);
  CHECK(to_string(rec.run) == to_string(parse_run("B #10\nT #1000\n")));
  CHECK(rec.flags.empty());
  const auto &st = m->stats();
  CHECK(m->history().size() == 9);
  CHECK(st.history_max <= b);
  CHECK(st.restarts <= b);
  CHECK(st.max_depth <= b);
  CHECK(st.max_depth >= 2);
  CHECK(st.max_hindex <= b);
  CHECK(st.retained_strings == 0);
  CHECK(st.violations.empty());

  SUBCASE("fetching the first copy's answer symbol by symbol") {
    MachineId n10{false, 1, "0"};
    std::string got;
    for (std::size_t y = 1; y <= 4; ++y) got += m->fetch_symbol(n10, 0, y);
    CHECK(got == "#100");
    CHECK(m->fetch_symbol(n10, 0, 5) == '\0');
    MachineId n11{false, 1, "1"};
    std::string second;
    for (std::size_t y = 1; y <= 5; ++y) second += m->fetch_symbol(n11, 0, y);
    CHECK(second == "#1000");
    CHECK(m->stats().violations.empty());
  }
  SUBCASE("history keeps authors and sizes only") {
    const auto &h = m->history();
    CHECK(h[0].author == HistoryEntry::Author::Env);
    CHECK(h[0].size == 3);
    CHECK(h[1].author == HistoryEntry::Author::K);
    CHECK(h[1].replicative);
    CHECK(h[4].author == HistoryEntry::Author::N);
    CHECK(h[4].address == "0");
    CHECK(h[4].size == 4);
    CHECK(h[8].member == -1);
  }
}

TEST_CASE("cube against the zero constant") {
  Cube c;
  ScriptedEnvironment e1({{0, "#0"}});
  auto rec = run_direct(c, e1);
  CHECK(rec.run.back().move == "#0");
  ScriptedEnvironment e2({{0, "#0"}});
  auto m = compose_recompute(*c.k, c.solutions(), c.seq, compute_b(c.proof));
  CHECK(play(*m, e2, c.game(), c.I).run == rec.run);
}

TEST_CASE("property: both modes agree and stay within amplitude l+4b") {
  Cube c;
  std::size_t b = compute_b(c.proof);
  RandomEnvOptions o;
  o.pool = numerals(16);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomEnvironment e1(seed, o), e2(seed, o);
    auto direct = run_direct(c, e1);
    auto m = compose_recompute(*c.k, c.solutions(), c.seq, b);
    auto re = play(*m, e2, c.game(), c.I);
    CHECK(re.run == direct.run);
    CHECK(direct.winner == Player::Top);
    CHECK(re.winner == Player::Top);
    CHECK(direct.flags.empty());
    CHECK(re.flags.empty());
    CHECK(check_amplitude(direct, [&](std::size_t l) { return l + 4 * b; }));
    const auto &st = m->stats();
    CHECK(st.history_max <= b);
    CHECK(st.restarts <= b);
    CHECK(st.max_depth <= b);
    CHECK(st.retained_strings == 0);
    CHECK(st.violations.empty());
  }
}

TEST_CASE("two copies of one antecedent resource") {
  Sequent s = parse_sequent(kTwoCopies);
  auto pr = prove(s);
  REQUIRE(pr.status == ProveStatus::Proved);
  auto k = extract(pr.proof);
  Interpretation I;
  I.carrier = 2;
  I.ideal_naming = true;
  I.predicates["p"] = PredicateDef{{}, {{1, 0}, {1, 1}}};
  ScriptedStrategy n({"#1"});
  std::size_t b = compute_b(pr.proof);
  RandomEnvOptions o;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomEnvironment e1(seed, o), e2(seed, o);
    auto direct = compose_direct(*k, {&n}, s);
    auto r1 = play(*direct, e1, initial_formula_state(s.succedent), I);
    auto re = compose_recompute(*k, {&n}, s, b);
    auto r2 = play(*re, e2, initial_formula_state(s.succedent), I);
    CHECK(r1.winner == Player::Top);
    CHECK(r1.run == r2.run);
    CHECK(re->stats().violations.empty());
    CHECK(re->stats().history_max <= b);
  }
}

TEST_CASE("embedded illegal moves abort the mediator") {
  Cube c;
  ScriptedStrategy rogue({"0"});
  std::vector<const Strategy *> sol{&c.blind, &rogue};
  ScriptedEnvironment e1({{0, "#10"}});
  auto m = compose_direct(*c.k, sol, c.seq);
  auto rec = play(*m, e1, c.game(), c.I);
  CHECK(m->aborted());
  CHECK(rec.run.size() == 1);
  ScriptedEnvironment e2({{0, "#10"}});
  auto r = compose_recompute(*c.k, sol, c.seq, compute_b(c.proof));
  play(*r, e2, c.game(), c.I);
  CHECK(r->aborted());
}

TEST_CASE("recompute mode refuses free variables and wrong arity") {
  Cube c;
  Sequent open = parse_sequent("p(y) => ?z: p(z)");
  DoNothingStrategy idle;
  CHECK_THROWS_AS(compose_recompute(idle, {&idle}, open, 4), CompositionError);
  CHECK_THROWS_AS(compose_direct(*c.k, {&c.blind}, c.seq), CompositionError);
}
