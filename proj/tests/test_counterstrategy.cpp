#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cl12/counterstrategy.hpp"
#include "cl12/extraction.hpp"

using namespace cl12;

namespace {

const std::vector<std::string> kUnprovable{
    "=> !x: p(x) -> Ax: p(x)",
    "=> ?y: !x: (p(x) -> p(y))",
    "=> (p & q) -> (p & q) /\\ (p & q)",
    "=> !x: ?y: y = f(x)",
    "=> ?x: !y: p(x,y) -> ?x: (!y: p(x,y) /\\ !y: p(x,y))",
    "=> ?x: !y: p(x,y) /\\ ?x: !y: p(x,y) -> ?x: (!y: p(x,y) /\\ !y: p(x,y))",
};

// Picks a random legal move now and then; at most `budget` moves and one replication.
class RandomMachine : public Strategy {
public:
  RandomMachine(GameState start, std::uint64_t seed, std::size_t budget)
      : start_(std::move(start)), rng_(seed), budget_(budget) {}
  Action step(const RunView &view) override {
    if (made_ >= budget_ || std::uniform_int_distribution<int>(0, 2)(rng_) != 0) return Action::wait();
    Run run;
    for (std::size_t i = 0; i < view.size(); ++i) run.push_back({view.label(i), view.move(i)});
    auto st = apply_run(start_, run).state;
    if (!st.pending.empty()) return Action::wait();
    MoveOptions o;
    o.replications = !replicated_;
    auto moves = legal_moves(st, Player::Top, o);
    if (moves.empty()) return Action::wait();
    std::string m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng_)];
    if (m.find(':') != std::string::npos) replicated_ = true;
    ++made_;
    return Action::make(m);
  }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<RandomMachine>(*this); }

private:
  GameState start_;
  std::mt19937_64 rng_;
  std::size_t budget_;
  std::size_t made_ = 0;
  bool replicated_ = false;
};

void check_refutation(const Sequent &s, const Refutation &r) {
  REQUIRE_MESSAGE(r.ok, to_string(s) << ": " << r.reason);
  auto a = apply_run(r.initial, r.run);
  if (!r.machine_illegal) CHECK(a.legal);
  CHECK(r.interpretation.size() <= 3);
  CHECK(winner(r.initial, r.run, r.interpretation) == Player::Bot);
}

}  // namespace

TEST_CASE("do-nothing loses every unprovable corpus sequent") {
  for (const auto &text : kUnprovable) {
    auto s = parse_sequent(text);
    DoNothingStrategy idle;
    check_refutation(s, refute(s, idle));
  }
}

TEST_CASE("resource example: one antecedent copy cannot serve both conjuncts") {
  auto s = parse_sequent("=> (p & q) -> (p & q) /\\ (p & q)");
  DoNothingStrategy idle;
  auto r = refute(s, idle);
  check_refutation(s, r);
  // One choice in a conjunct already makes the sequent unstable.
  REQUIRE(r.run.size() == 1);
  CHECK(r.run[0].player == Player::Bot);
  CHECK(r.run[0].move.rfind("1.1.", 0) == 0);
  for (const char *first : {"1.0.0", "1.0.1"}) {
    ScriptedStrategy m({first});
    auto r2 = refute(s, m);
    check_refutation(s, r2);
  }
}

TEST_CASE("a committed witness meets a fresh constant") {
  auto s = parse_sequent("=> ?y: !x: (p(x) -> p(y))");
  ScriptedStrategy m({"1.#0"});
  auto r = refute(s, m);
  check_refutation(s, r);
  CHECK(to_string(r.run) == to_string(parse_run("T 1.#0\nB 1.#1\n")));
  auto I = r.interpretation;
  CHECK(I.holds("p", {I.name("1")}));
  CHECK(!I.holds("p", {I.name("0")}));
}

TEST_CASE("an unstable sequent is left alone") {
  auto s = parse_sequent("=> !x: p(x) -> Ax: p(x)");
  Counterstrategy c(s);
  DoNothingStrategy idle;
  auto rec = play(idle, c, initial_state(s), blank_interpretation(s));
  CHECK(rec.run.empty());
  CHECK(c.done());
  CHECK(!c.failed());
}

TEST_CASE("machine answers are read back through the vc-mapping") {
  auto s = parse_sequent("=> !x: ?y: y = f(x)");
  ScriptedStrategy m({"1.#0"});
  auto r = refute(s, m);
  // The counterstrategy's fresh x is 0, so the machine's answer 0 is read as the variable itself.
  check_refutation(s, r);
  CHECK(r.run.front().move == "1.#0");
  CHECK(r.run.front().player == Player::Bot);
}

TEST_CASE("free variables get distinct fresh constants") {
  auto s = parse_sequent("p(x), q(y) => r(x, y, 0)");
  DoNothingStrategy idle;
  auto r = refute(s, idle);
  check_refutation(s, r);
  REQUIRE(r.run.size() == 2);
  CHECK(r.mapping.at("x") != r.mapping.at("y"));
  CHECK(r.mapping.at("x") != "0");
  CHECK(r.mapping.at("y") != "0");
}

TEST_CASE("provable sequents are refused") {
  auto s = parse_sequent("=> !x: ?y: (p(x) -> p(y))");
  DoNothingStrategy idle;
  auto r = refute(s, idle);
  CHECK(!r.ok);
  CHECK(r.reason.find("refused") == 0);
  CHECK_NOTHROW(refutation_to_json(r));
}

TEST_CASE("extracted strategies of other sequents are refuted") {
  auto cube = load_proof("tests/data/cube_proof.json");
  auto ce = load_proof("tests/data/choose_exists_proof.json");
  for (const auto *p : {&cube, &ce})
    for (const auto &text : {kUnprovable[1], kUnprovable[3]}) {
      auto s = parse_sequent(text);
      auto k = extract(*p);
      check_refutation(s, refute(s, *k));
    }
}

TEST_CASE("property: random legal machines are refuted and the counterstrategy stays legal") {
  for (const auto &text : kUnprovable) {
    auto s = parse_sequent(text);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      RandomMachine m(initial_state(s), seed, 4);
      auto r = refute(s, m);
      check_refutation(s, r);
    }
  }
}
