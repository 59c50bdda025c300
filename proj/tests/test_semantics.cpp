#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "cl12/semantics.hpp"

using namespace cl12;

namespace {

LabMove T(const std::string &m) { return {Player::Top, m}; }
LabMove B(const std::string &m) { return {Player::Bot, m}; }

const char *kCube = "Ax: cube(x) = (x*x)*x, !x: !y: ?z: z = x*y => !x: ?y: y = cube(x)";

Run cube_run() {
  return {T("0.1.:"), B("1.#10"), T("0.1.0.#10"), T("0.1.0.#10"), B("0.1.0.#100"),
          T("0.1.1.#100"), T("0.1.1.#10"), B("0.1.1.#1000"), T("1.#1000")};
}

Interpretation letters(const std::string &names, const std::string &true_ones) {
  Interpretation I;
  for (char c : names) {
    I.predicates[std::string(1, c)] = {};
    if (true_ones.find(c) != std::string::npos) I.predicates[std::string(1, c)].tuples.insert(std::vector<Element>{});
  }
  return I;
}

}  // namespace

TEST_CASE("builtin arithmetic wraps around the carrier") {
  auto I = Interpretation::arithmetic(4);
  CHECK(I.size() == 16);
  CHECK(I.name("1000") == 8);
  CHECK(I.name("10011") == 3);
  CHECK(I.apply("*", {4, 5}) == 4);
  CHECK(I.apply("cube", {2}) == 8);
  CHECK(I.apply("cube", {3}) == 11);
  CHECK(I.apply("succ", {15}) == 0);
  CHECK(I.holds("Even", {14}));
  CHECK(truth(I, {}, parse_formula("Ax: cube(x) = (x*x)*x")));
  CHECK(truth(I, {}, parse_formula("Ax: Ay: (Even(x) -> Even(x+y) \\/ Odd(y))")));
  auto strict = I;
  strict.wrap = false;
  CHECK_THROWS_AS(strict.apply("*", {4, 4}), EvaluationError);
  CHECK_THROWS_AS(strict.name("10000"), EvaluationError);
}

TEST_CASE("initial states") {
  auto st = initial_state(parse_sequent(kCube));
  CHECK(st.pending.empty());
  CHECK(st.antecedent.size() == 2);
  CHECK(to_string(st) == kCube);
  auto open = initial_state(parse_sequent("=> p(x)"));
  CHECK(open.pending == std::vector<std::string>{"x"});
  CHECK(!check_move(open, T("#1")).legal);
  CHECK(check_move(open, B("#1")).legal);
  CHECK(initial_state(parse_sequent("=> T")).antecedent.empty());
}

TEST_CASE("census of legal runs for a choice implication") {
  auto st = initial_formula_state(parse_formula("(0 = 0 & 0 = 1) -> (10 = 11 & 10 = 10)"));
  auto I = Interpretation::arithmetic(2);
  auto runs = legal_runs(st, I);
  CHECK(runs.size() == 13);
  auto win = [&](const Run &r) { return winner(st, r, I); };
  CHECK(win({}) == Player::Top);
  CHECK(win({T("0.0")}) == Player::Top);
  CHECK(win({T("0.1")}) == Player::Top);
  CHECK(win({B("1.0")}) == Player::Bot);
  CHECK(win({B("1.1")}) == Player::Top);
  CHECK(win({T("0.0"), B("1.0")}) == Player::Bot);
  CHECK(win({B("1.0"), T("0.0")}) == Player::Bot);
  for (const auto &e : runs) {
    bool lost = e.run.size() == 1 ? e.run[0] == B("1.0")
                                  : e.run.size() == 2 && std::count(e.run.begin(), e.run.end(), B("1.0")) &&
                                        std::count(e.run.begin(), e.run.end(), T("0.0"));
    CHECK((e.winner == Player::Bot) == lost);
  }
  CHECK(winnable(st, I));
}

TEST_CASE("branching recurrence trace") {
  auto G = parse_formula("p | (q & (r & (s | t)))");
  auto st = initial_branching_state(G);
  Run gamma = {B(":"), T(".1"), B("0.0"), B("1.1"), B(":1"), B("10.0"), B("11.1"), T("11.0")};
  auto r = check_move(st, gamma[0]);
  REQUIRE(r.legal);
  CHECK(r.next.antecedent[0].leaves.size() == 2);
  auto r2 = check_move(r.next, gamma[1]);
  REQUIRE(r2.legal);
  CHECK(!r2.focused);
  auto q_rest = parse_formula("q & (r & (s | t))");
  for (const auto &l : r2.next.antecedent[0].leaves) CHECK(formula_equal(l.formula, q_rest));
  auto fin = apply_run(st, gamma);
  REQUIRE(fin.legal);
  CHECK(tree_to_string(fin.state.antecedent[0]) == "q o (r o s)");
  CHECK(to_string(projection_bits(gamma, "0")) == "<T1, B0>");
  CHECK(to_string(projection_bits(gamma, "10")) == "<T1, B1, B0>");
  CHECK(to_string(projection_bits(gamma, "11")) == "<T1, B1, B1, T0>");
  // Leaf remainder equals the original formula advanced by the projected run.
  for (const auto &l : fin.state.antecedent[0].leaves) {
    auto proj = apply_run(initial_formula_state(G), projection_bits(gamma, l.address));
    REQUIRE(proj.legal);
    CHECK(formula_equal(proj.state.succedent, l.formula));
  }
  CHECK(!check_move(st, T(":")).legal);
  auto I = letters("pqrst", "qrs");
  CHECK(wn(fin.state, I) == Player::Top);
  CHECK(wn(fin.state, letters("pqrst", "qr")) == Player::Bot);
}

TEST_CASE("blind quantifier passes moves through") {
  auto f = parse_formula("Ay: (Even(y) | Odd(y) -> !x: (Even(x+y) | Odd(x+y)))");
  auto st = initial_formula_state(f);
  auto r = apply_run(st, {B("1.#11"), B("0.0"), T("1.1")});
  REQUIRE(r.legal);
  CHECK(formula_equal(r.state.succedent, parse_formula("Ay: (Even(y) -> Odd(11+y))")));
  CHECK(wn(r.state, Interpretation::arithmetic(4)) == Player::Top);
}

TEST_CASE("cube run reaches a true position") {
  auto st = initial_state(parse_sequent(kCube));
  auto r = apply_run(st, cube_run());
  REQUIRE(r.legal);
  CHECK(to_string(r.state) ==
        "Ax: cube(x) = (x*x)*x, (100 = 10*10) o (1000 = 100*10) => 1000 = cube(10)");
  CHECK(wn(r.state, Interpretation::arithmetic(4)) == Player::Top);
  auto bad = apply_run(st, {B("1.#10"), B("0.1.:")});
  CHECK(!bad.legal);
  CHECK(bad.offender == Player::Bot);
  CHECK(bad.index == 1);
}

TEST_CASE("projection onto components") {
  Run r = {T("0.1"), B("1.0")};
  CHECK(to_string(projection_component(r, 1)) == "<B0>");
  CHECK(to_string(projection_component(r, 0)) == "<T1>");
  CHECK(projection_component({}, 0).empty());
}

TEST_CASE("delay relation") {
  Run phi = {B("a"), T("b"), B("c"), T("d")};
  Run gamma = {T("b"), B("a"), T("d"), B("c")};
  CHECK(is_delay(phi, gamma, Player::Top));
  CHECK(is_delay(gamma, gamma, Player::Bot));
  // Postponing bottom's move is a bottom-delay; advancing it is not.
  CHECK(is_delay({T("b"), B("a")}, {B("a"), T("b")}, Player::Bot));
  CHECK(!is_delay({B("a"), T("b")}, {T("b"), B("a")}, Player::Bot));
  CHECK(!is_delay(phi, gamma, Player::Bot));
}

TEST_CASE("winnability oracle") {
  auto I = Interpretation::arithmetic(2);
  CHECK(winnable(initial_formula_state(Formula::top()), I));
  CHECK(!winnable(initial_formula_state(Formula::bot()), I));
  auto st = initial_state(parse_sequent("=> Even(x) | Odd(x)"));
  WinnableOptions o;
  o.pool = {"0", "1", "10"};
  CHECK(winnable(st, I, o));
  CHECK(!winnable(initial_state(parse_sequent("=> Even(x) & Odd(x)")), I, o));
}

TEST_CASE("property: static delays of won runs stay legal and won") {
  auto st = initial_state(parse_sequent("p & q, r | s => (p | r) & (q | s)"));
  auto I = letters("pqrs", "pr");
  std::mt19937 rng(11);
  MoveOptions opt;
  opt.unfocused = true;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GameState cur = st;
    Run run;
    for (int k = 0; k < 6; ++k) {
      Player p = rng() % 2 ? Player::Top : Player::Bot;
      auto ms = legal_moves(cur, p, opt);
      if (ms.empty()) continue;
      auto m = ms[rng() % ms.size()];
      auto r = check_move(cur, {p, m});
      REQUIRE(r.legal);
      if (r.replicative) CHECK(r.next.antecedent.size() == cur.antecedent.size());
      run.push_back({p, m});
      cur = r.next;
    }
    if (wn(cur, I) != Player::Top) continue;
    // Delay top's moves: stably move every bottom move before the top moves.
    Run delayed;
    for (const auto &m : run)
      if (m.player == Player::Bot) delayed.push_back(m);
    for (const auto &m : run)
      if (m.player == Player::Top) delayed.push_back(m);
    if (!is_delay(delayed, run, Player::Top)) continue;
    auto r = apply_run(st, delayed);
    if (!r.legal) {
      CHECK(r.offender == Player::Bot);
      continue;
    }
    CHECK(wn(r.state, I) == Player::Top);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("property: replication adds exactly one leaf") {
  auto st = initial_state(parse_sequent("!x: p(x), q => !x: p(x)"));
  auto r = check_move(st, T("0.0.:"));
  REQUIRE(r.legal);
  CHECK(r.next.antecedent[0].leaves.size() == 2);
  auto r2 = check_move(r.next, T("0.0.0.#1"));
  REQUIRE(r2.legal);
  CHECK(r2.next.antecedent[0].leaves.size() == 2);
}
