#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/syntax.hpp"

namespace cl12 {

class EvaluationError : public std::runtime_error {
public:
  explicit EvaluationError(const std::string &msg) : std::runtime_error("evaluation: " + msg) {}
};

using Element = std::uint32_t;

struct FunctionDef {
  std::string builtin;  // "succ", "add", "mul", "cube"; empty for tables
  std::map<std::vector<Element>, Element> table;
  std::optional<Element> fallback;
};

struct PredicateDef {
  std::string builtin;  // "Even", "Odd"; empty for tuple sets
  std::set<std::vector<Element>> tuples;
};

// Finite universe {0..carrier-1}. Builtin arithmetic and ideal naming reduce modulo the
// carrier when wrap is set, otherwise a value outside the carrier is an evaluation error.
class Interpretation {
public:
  std::size_t carrier = 1;
  bool wrap = true;
  bool ideal_naming = false;
  std::map<std::string, Element> naming;
  std::optional<Element> naming_default;
  std::map<std::string, FunctionDef> functions;
  std::map<std::string, PredicateDef> predicates;

  std::size_t size() const { return carrier; }
  Element name(const std::string &constant) const;
  Element apply(const std::string &f, const std::vector<Element> &args) const;
  bool holds(const std::string &p, const std::vector<Element> &args) const;
  std::string element_label(Element e) const;

  // Carrier {0..2^bits-1} with wraparound, ideal naming, + * cube succ, Even Odd.
  static Interpretation arithmetic(unsigned bits);
};

using Valuation = std::map<std::string, Element>;

Element eval_term(const Interpretation &I, const Valuation &v, const TermPtr &t);
// Classical truth of an elementary formula; free variables must be in v.
bool truth(const Interpretation &I, const Valuation &v, const FormulaPtr &f);

enum class Player { Top, Bot };
inline Player opponent(Player p) { return p == Player::Top ? Player::Bot : Player::Top; }
char player_char(Player p);
std::string player_name(Player p);

struct LabMove {
  Player player;
  std::string move;
  bool operator==(const LabMove &o) const { return player == o.player && move == o.move; }
};
using Run = std::vector<LabMove>;

std::string to_string(const LabMove &m);
std::string to_string(const Run &r);
// One labmove per line: "T <move>" or "B <move>".
std::string serialize_run(const Run &r);
Run parse_run(const std::string &text);

struct Leaf {
  std::string address;
  FormulaPtr formula;
};

struct Tree {
  std::vector<Leaf> leaves;  // sorted by address
};

enum class Shape { Sequent, Formula, Branching };

struct GameState {
  Shape shape = Shape::Sequent;
  std::vector<std::string> pending;              // free variables still awaiting the environment's #c
  std::map<std::string, std::string> valuation;  // closure choices made so far
  std::vector<Tree> antecedent;                  // Branching shape keeps its tree at index 0
  FormulaPtr succedent;                          // Formula shape keeps its formula here
  Sequent origin;
};

GameState initial_state(const Sequent &s);
GameState initial_formula_state(const FormulaPtr &f);
GameState initial_branching_state(const FormulaPtr &f);

struct MoveResult {
  bool legal = false;
  GameState next;
  std::string reason;
  bool antecedent = false;
  bool replicative = false;
  bool focused = true;
};

MoveResult check_move(const GameState &st, const LabMove &lm);

// One move inside a formula; swapped when the formula sits in the antecedent (roles exchange).
std::optional<FormulaPtr> formula_after_move(const FormulaPtr &f, const std::string &m, Player mover, bool swapped,
                                             std::string *why = nullptr);
bool is_bit_string(const std::string &s);
bool is_address_prefix(const std::string &u, const std::string &w);

struct ApplyResult {
  bool legal = true;
  GameState state;  // position after the longest legal prefix
  Player offender = Player::Top;
  std::size_t index = 0;
  std::string reason;
};

ApplyResult apply_run(const GameState &st, const Run &run);

Player wn(const GameState &st, const Interpretation &I);
// Winner of a run from st: the first illegal mover loses, otherwise wn of the reached position.
Player winner(const GameState &st, const Run &run, const Interpretation &I);

std::string to_string(const GameState &st);
std::string tree_to_string(const Tree &t);

// Elementary formula that is true under an interpretation iff the position is won by the machine.
FormulaPtr position_formula(const GameState &st);

struct MoveOptions {
  std::vector<std::string> pool{"0", "1"};
  bool unfocused = false;
  bool replications = true;
};

std::vector<std::string> legal_moves(const GameState &st, Player p, const MoveOptions &opt = {});

Run projection_component(const Run &run, int i);
Run projection_bits(const Run &run, const std::string &v);
bool is_delay(const Run &phi, const Run &gamma, Player p);

struct CensusEntry {
  Run run;
  Player winner;
};

class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string &msg) : std::runtime_error("budget exceeded: " + msg) {}
};

std::vector<CensusEntry> legal_runs(const GameState &st, const Interpretation &I, const MoveOptions &opt = {},
                                    std::size_t max_runs = 100000);

struct WinnableOptions {
  std::vector<std::string> pool{"0", "1"};
  int replication_budget = 4;
  std::size_t step_budget = 2000000;
};

bool winnable(const GameState &st, const Interpretation &I, const WinnableOptions &opt = {});

}  // namespace cl12
