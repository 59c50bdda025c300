#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cl12/classical.hpp"
#include "cl12/syntax.hpp"

namespace cl12 {

enum class RuleKind { Wait, ChooseOr, ChooseAnd, ChooseExists, ChooseAll, Replicate };

std::string rule_name(RuleKind k);
RuleKind rule_from_name(const std::string &s);

struct Rule {
  RuleKind kind = RuleKind::Wait;
  int member = -1;  // antecedent member for ChooseAnd, ChooseAll, Replicate
  Path path;        // surface occurrence inside the member or the succedent
  int choice = 0;   // ChooseOr, ChooseAnd
  std::string term; // ChooseExists, ChooseAll: a constant or a variable
};

struct ProofStep {
  Sequent seq;
  Rule rule;
  std::vector<std::size_t> premises;  // zero-based indices of earlier steps
};

using Proof = std::vector<ProofStep>;

class RuleError : public std::runtime_error {
public:
  explicit RuleError(const std::string &msg) : std::runtime_error(msg) {}
};

TermPtr choose_term(const std::string &t);

// Premise of a Choose or Replicate step read bottom-up; throws RuleError on bad parameters.
Sequent rule_premise(const Sequent &conclusion, const Rule &r);

// Premises demanded by Wait; fresh variables avoid every variable of the conclusion and `avoid`.
std::vector<Sequent> wait_premises(const Sequent &x, std::set<std::string> avoid = {});

// Empty string when the step is correct, otherwise a named violation.
std::string check_step(const Sequent &conclusion, const Rule &r, const std::vector<Sequent> &premises,
                       const OracleOptions &opt = {});

struct ProofCheck {
  bool ok = true;
  std::size_t step = 0;
  std::string violation;
};

ProofCheck check_proof(const Proof &p, const OracleOptions &opt = {});

enum class ProveStatus { Proved, Unprovable, Unknown };
std::string to_string(ProveStatus s);

struct ProverOptions {
  int replicate_cap = 2;
  std::size_t goal_budget = 400000;
  OracleOptions oracle;
};

struct ProveResult {
  ProveStatus status = ProveStatus::Unknown;
  Proof proof;
  std::size_t goals = 0;
};

ProveResult prove(const Sequent &s, const ProverOptions &opt = {});

}  // namespace cl12
