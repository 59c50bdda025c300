#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/semantics.hpp"

namespace cl12 {

class MoveFormatError : public std::runtime_error {
public:
  explicit MoveFormatError(const std::string &msg) : std::runtime_error("move format: " + msg) {}
};

// Bit length of the greatest constant c with "#c" in the move; 0 without '#'.
std::size_t magnitude(const std::string &move);

// Read access to a run as the observing machine sees it.
class RunView {
public:
  virtual ~RunView() = default;
  virtual std::size_t size() const = 0;
  virtual Player label(std::size_t i) const = 0;
  virtual std::string move(std::size_t i) const = 0;
};

class VectorRunView : public RunView {
public:
  explicit VectorRunView(const Run &run) : run_(run) {}
  std::size_t size() const override { return run_.size(); }
  Player label(std::size_t i) const override { return run_[i].player; }
  std::string move(std::size_t i) const override { return run_[i].move; }

private:
  const Run &run_;
};

struct Action {
  bool emit = false;
  std::string move;
  static Action wait() { return {}; }
  static Action make(std::string m) { return {true, std::move(m)}; }
};

// Deterministic reactive machine playing the top role. Moves are emitted whole.
class Strategy {
public:
  virtual ~Strategy() = default;
  virtual Action step(const RunView &run) = 0;
  // Size of the mutable working set, in cells.
  virtual std::size_t scratch_size() const { return 0; }
  virtual std::unique_ptr<Strategy> clone() const = 0;
  // Monitor flags raised so far (dispatch failures, aborts).
  virtual std::vector<std::string> flags() const { return {}; }
};

class DoNothingStrategy : public Strategy {
public:
  Action step(const RunView &) override { return Action::wait(); }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<DoNothingStrategy>(*this); }
};

// Emits the listed moves in order, one per step.
class ScriptedStrategy : public Strategy {
public:
  explicit ScriptedStrategy(std::vector<std::string> moves) : moves_(std::move(moves)) {}
  Action step(const RunView &) override;
  std::size_t scratch_size() const override { return 1; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<ScriptedStrategy>(*this); }

private:
  std::vector<std::string> moves_;
  std::size_t next_ = 0;
};

// Solution of !x ?y (y = 10*x): answers #c with #c0.
class DoublingStrategy : public Strategy {
public:
  Action step(const RunView &run) override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<DoublingStrategy>(*this); }

private:
  bool done_ = false;
};

// The bottom player. act() returns the moves injected on this tick (possibly several).
class EnvironmentAgent {
public:
  virtual ~EnvironmentAgent() = default;
  virtual std::vector<std::string> act(const GameState &st, const RunView &run, std::size_t tick) = 0;
  // No further moves will ever come.
  virtual bool done() const = 0;
};

struct ScriptEntry {
  std::size_t tick = 0;
  std::string move;
};

// Script file: lines "tick N" set the tick for the following "move <string>" lines.
std::vector<ScriptEntry> parse_script(const std::string &text);
std::string serialize_script(const std::vector<ScriptEntry> &script);

class ScriptedEnvironment : public EnvironmentAgent {
public:
  explicit ScriptedEnvironment(std::vector<ScriptEntry> script) : script_(std::move(script)) {}
  std::vector<std::string> act(const GameState &, const RunView &, std::size_t tick) override;
  bool done() const override { return next_ >= script_.size(); }

private:
  std::vector<ScriptEntry> script_;
  std::size_t next_ = 0;
};

struct RandomEnvOptions {
  std::vector<std::string> pool{"0", "1"};
  bool unfocused = true;
  double move_probability = 0.5;
  double quit_probability = 0.05;
  std::size_t max_moves = 16;
};

// Seeded environment drawing from the legal-move pool each tick.
class RandomEnvironment : public EnvironmentAgent {
public:
  RandomEnvironment(std::uint64_t seed, RandomEnvOptions opt = {}) : rng_(seed), opt_(std::move(opt)) {}
  std::vector<std::string> act(const GameState &st, const RunView &, std::size_t) override;
  bool done() const override { return done_; }

private:
  std::mt19937_64 rng_;
  RandomEnvOptions opt_;
  std::size_t made_ = 0;
  std::size_t barren_ = 0;
  bool done_ = false;
};

// Callback-driven environment; the callback returns nullopt to quit.
class InteractiveEnvironment : public EnvironmentAgent {
public:
  using Callback = std::function<std::optional<std::vector<std::string>>(const GameState &, const RunView &)>;
  explicit InteractiveEnvironment(Callback cb) : cb_(std::move(cb)) {}
  std::vector<std::string> act(const GameState &st, const RunView &run, std::size_t) override;
  bool done() const override { return quit_; }

private:
  Callback cb_;
  bool quit_ = false;
};

struct PlayOptions {
  std::size_t max_ticks = 1000;
  // Reject illegal environment moves instead of recording a machine win.
  bool clean_environment = false;
  // Consecutive idle ticks (machine waiting, environment finished) that end the play.
  std::size_t idle_ticks = 2;
};

struct MoveRecord {
  std::size_t tick = 0;
  std::size_t magnitude = 0;
  std::size_t background = 0;  // greatest magnitude of earlier bottom moves
  std::size_t timecost = 0;    // top moves only
  bool antecedent = false;
  bool replicative = false;
  bool focused = true;
};

struct SpaceSample {
  std::size_t tick = 0;
  std::size_t background = 0;
  std::size_t scratch = 0;
};

struct Meters {
  std::size_t amplitude = 0;  // greatest top-move magnitude
  std::size_t time = 0;       // greatest timecost
  std::size_t space = 0;      // greatest scratch size
  std::size_t background = 0;
};

struct RunRecord {
  GameState initial;
  GameState final_state;
  Run run;
  std::vector<MoveRecord> moves;  // parallel to run
  std::vector<SpaceSample> space;
  Meters meters;
  bool illegal = false;
  Player offender = Player::Top;
  std::string reason;
  std::vector<std::string> rejected;  // environment moves refused under the clean-environment flag
  std::vector<std::string> flags;     // machine monitor flags
  std::size_t ticks = 0;
  Player winner = Player::Top;
};

RunRecord play(Strategy &machine, EnvironmentAgent &env, const GameState &start, const Interpretation &I,
               const PlayOptions &opt = {});

using Bound = std::function<std::size_t(std::size_t)>;
using NaryBound = std::function<std::size_t(const std::vector<std::size_t> &)>;

// Every top move's magnitude is at most h(background); vacuous when the environment played illegally.
bool check_amplitude(const RunRecord &rec, const Bound &h);

struct WellBehavedReport {
  std::size_t replications = 0;
  bool replications_within_cap = true;
  std::size_t unfocused = 0;
  bool focused = true;
  std::string providence = "vacuous: moves are emitted whole";
  std::string tape_conditions = "not modeled";
};

WellBehavedReport well_behaved_monitor(const RunRecord &rec, std::size_t replication_cap);

Bound unarify(const NaryBound &h, std::size_t arity);
// Amplitude, space and time bounds against the recorded meters.
bool tricomplexity(const RunRecord &rec, const Bound &amplitude, const Bound &space, const Bound &time);

}  // namespace cl12
