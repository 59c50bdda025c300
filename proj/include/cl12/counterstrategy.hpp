#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/calculus.hpp"
#include "cl12/io.hpp"
#include "cl12/runtime.hpp"

namespace cl12 {

class CounterstrategyError : public std::runtime_error {
public:
  explicit CounterstrategyError(const std::string &msg) : std::runtime_error("counterstrategy: " + msg) {}
};

// Injective variable-to-constant assignment whose range avoids the sequent's constants.
using VcMapping = std::map<std::string, std::string>;

struct CounterOptions {
  ProverOptions prover;
  OracleOptions oracle;
};

// Environment that defeats any machine on an unprovable sequent: chooses fresh constants for the
// free variables, then keeps the current sequent Y unprovable, moving while Y is stable.
class Counterstrategy : public EnvironmentAgent {
public:
  Counterstrategy(const Sequent &s, CounterOptions opt = {});

  std::vector<std::string> act(const GameState &st, const RunView &run, std::size_t tick) override;
  bool done() const override { return failed_ || !stable_; }

  const Sequent &current() const { return y_; }
  const VcMapping &mapping() const { return e_; }
  Sequent instantiated() const;
  bool failed() const { return failed_; }
  const std::string &failure() const { return failure_; }
  std::size_t machine_replications() const { return replications_; }

private:
  struct Member {
    int real = 0;
    std::string address;
  };
  struct Candidate {
    Sequent z;
    std::string move;  // with "#" standing for the fresh constant
    std::string fresh_var;
  };

  void fail(const std::string &why);
  void observe(const RunView &run);
  void machine_move(const std::string &m);
  std::optional<FormulaPtr> advance(const FormulaPtr &f, const std::string &beta, bool swapped);
  std::vector<Candidate> candidates() const;
  std::string fresh_constant() const;
  ProverOptions prover_options() const;

  Sequent y_;
  VcMapping e_;
  std::vector<Member> members_;
  CounterOptions opt_;
  bool closed_ = false;
  bool stable_ = true;
  bool failed_ = false;
  std::string failure_;
  std::size_t cursor_ = 0;
  std::size_t replications_ = 0;
};

struct RefuteOptions {
  CounterOptions counter;
  std::size_t max_ticks = 200;
  std::size_t replication_budget = 8;
};

struct Refutation {
  bool ok = false;
  std::string reason;
  Run run;
  GameState initial;
  GameState final_state;
  Interpretation interpretation;
  bool machine_illegal = false;
  VcMapping mapping;
};

// Predicates empty, functions constantly 0, one element: defines every letter of s.
Interpretation blank_interpretation(const Sequent &s);

// Plays the counterstrategy against the machine and searches a falsifying interpretation of the
// reached position. Refuses unless the sequent is Unprovable.
Refutation refute(const Sequent &s, Strategy &machine, const RefuteOptions &opt = {});

Json refutation_to_json(const Refutation &r);

}  // namespace cl12
