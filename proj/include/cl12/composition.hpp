#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/calculus.hpp"
#include "cl12/io.hpp"
#include "cl12/runtime.hpp"

namespace cl12 {

class CompositionError : public std::runtime_error {
public:
  explicit CompositionError(const std::string &msg) : std::runtime_error("composition: " + msg) {}
};

// Reads `arity` constants from the environment, then answers "#v" from a table.
class TableSolution : public Strategy {
public:
  using Table = std::map<std::vector<std::string>, std::string>;
  TableSolution(std::size_t arity, Table table, std::optional<std::string> fallback = std::nullopt)
      : arity_(arity), table_(std::move(table)), fallback_(std::move(fallback)) {}

  Action step(const RunView &run) override;
  std::size_t scratch_size() const override { return arity_ + 1; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<TableSolution>(*this); }
  std::vector<std::string> flags() const override { return flags_; }

  std::size_t arity() const { return arity_; }
  const Table &table() const { return table_; }
  const std::optional<std::string> &fallback() const { return fallback_; }

private:
  std::size_t arity_;
  Table table_;
  std::optional<std::string> fallback_;
  bool done_ = false;
  std::vector<std::string> flags_;
};

// Table of function letter f over the whole carrier.
TableSolution table_from_function(const Interpretation &I, const std::string &f, std::size_t arity);
// {"arity": k, "table": {"c1 c2 ...": "v", ...}, "default": "v"}
TableSolution table_from_json(const Json &j);
Json table_to_json(const TableSolution &t);

// Upper bound on the moves of one play of the proof's sequent game under the extracted strategy:
// closure moves, one move per choice operator, and per Replicate step the new copy plus the move itself.
std::size_t compute_b(const Proof &p);

// Copycat mediator playing the succedent of s (as a formula game) from K and the antecedent solutions.
class DirectComposition : public Strategy {
public:
  DirectComposition(const Strategy &k, const std::vector<const Strategy *> &solutions, const Sequent &s);
  DirectComposition(const DirectComposition &o);

  Action step(const RunView &run) override;
  std::size_t scratch_size() const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<DirectComposition>(*this); }
  std::vector<std::string> flags() const override { return flags_; }

  bool aborted() const { return aborted_; }
  // K's imaginary run in the sequent game.
  const Run &k_run() const { return k_run_; }
  // Run seen by copy w of solution i.
  const Run *copy_run(int member, const std::string &address) const;

private:
  struct Copy {
    std::unique_ptr<Strategy> machine;
    Run run;
  };
  using CopyKey = std::pair<int, std::string>;

  void abort(const std::string &why);
  bool k_move(const std::string &m);
  bool absorb(const RunView &run);

  Sequent seq_;
  std::unique_ptr<Strategy> k_;
  std::vector<std::unique_ptr<Strategy>> initial_;
  std::map<CopyKey, Copy> copies_;
  Run k_run_;
  GameState k_state_;
  std::vector<std::string> real_pending_;
  std::map<std::string, std::string> real_closure_;
  bool closed_ = false;
  std::size_t cursor_ = 0;
  bool aborted_ = false;
  std::vector<std::string> flags_;
};

struct HistoryEntry {
  enum class Author { Env, K, N };
  Author author = Author::Env;
  std::size_t size = 0;       // symbols in the move
  int member = -1;            // antecedent component; -1 for K's consequent moves and the environment
  std::string address;        // copy address for N; leaf address for K's antecedent moves
  bool replicative = false;   // K's ":w" moves
};

struct MachineId {
  bool k = true;
  int member = -1;
  std::string address;
};

struct Sketch {
  std::unique_ptr<Strategy> machine;
  std::size_t moves_made = 0;
  std::size_t pending = 0;  // length of the output being assembled
  std::size_t delta = 0;    // length of the last step's output
  int tag = -2;             // component of K's pending output; -2 when none
  std::string output;       // transient; must be empty between Make History iterations
};

struct RecomputeStats {
  std::size_t b = 0;
  std::size_t history_max = 0;
  std::size_t restarts = 0;
  std::size_t iterations = 0;
  std::size_t fetch_calls = 0;
  std::size_t update_calls = 0;
  std::size_t max_depth = 0;
  std::size_t max_hindex = 0;
  std::size_t retained_strings = 0;  // sketches holding output at an iteration boundary
  std::vector<std::string> violations;
};

// Memory-frugal mediator: keeps the global history (sizes and addresses, no move text) and one sketch
// per machine, recovering past moves by replaying their authors. Closed sequents only.
class RecomputeComposition : public Strategy {
public:
  RecomputeComposition(const Strategy &k, const std::vector<const Strategy *> &solutions, const Sequent &s,
                       std::size_t b);
  RecomputeComposition(const RecomputeComposition &o);

  Action step(const RunView &run) override;
  std::size_t scratch_size() const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<RecomputeComposition>(*this); }
  std::vector<std::string> flags() const override { return flags_; }

  const std::vector<HistoryEntry> &history() const { return history_; }
  const RecomputeStats &stats() const { return stats_; }
  bool aborted() const { return aborted_; }

  // Yth symbol (1-based) of g's (X+1)th move, by replay. Public for inspection; needs the last real run.
  char fetch_symbol(const MachineId &g, std::size_t x, std::size_t y);

private:
  class HistoryView;
  friend class HistoryView;

  using CopyKey = std::pair<int, std::string>;

  std::unique_ptr<Strategy> fresh(const MachineId &g) const;
  bool authored_by(const HistoryEntry &e, const MachineId &g) const;
  bool relevant_to(const HistoryEntry &e, const MachineId &g) const;
  // Position in the history of g's (m+1)th move, or the history length.
  std::size_t hindex(const MachineId &g, std::size_t m) const;
  std::size_t count_moves(const MachineId &g) const;
  std::string entry_text(std::size_t pos, const MachineId &viewer, std::size_t caller_index);
  std::string fetch_text(const MachineId &g, std::size_t x, std::size_t from, std::size_t caller_index);
  char fetch_at(const MachineId &g, std::size_t x, std::size_t y, std::size_t caller_index);
  std::string replay_move(const MachineId &g, std::size_t x, std::size_t index);
  Action step_at(const MachineId &g, Strategy &m, std::size_t index);
  std::optional<std::string> update_sketch(const MachineId &g, Sketch &sk);
  std::vector<CopyKey> live_copies() const;
  void initialize();
  void restart();
  void violation(const std::string &what);
  void abort(const std::string &why);

  Sequent seq_;
  std::size_t b_;
  std::unique_ptr<Strategy> k0_;
  std::vector<std::unique_ptr<Strategy>> n0_;
  std::vector<HistoryEntry> history_;
  Sketch k_sketch_;
  std::map<CopyKey, Sketch> n_sketches_;
  bool fresh_ = true;
  GameState k_state_;
  std::vector<std::string> real_env_;  // environment moves read off the real run tape
  std::vector<std::size_t> index_stack_;
  RecomputeStats stats_;
  bool aborted_ = false;
  std::vector<std::string> flags_;
};

std::unique_ptr<DirectComposition> compose_direct(const Strategy &k, const std::vector<const Strategy *> &solutions,
                                                  const Sequent &s);
std::unique_ptr<RecomputeComposition> compose_recompute(const Strategy &k,
                                                        const std::vector<const Strategy *> &solutions,
                                                        const Sequent &s, std::size_t b);

}  // namespace cl12
