#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/composition.hpp"
#include "cl12/io.hpp"
#include "cl12/runtime.hpp"

namespace cl12 {

class CorpusError : public std::runtime_error {
public:
  explicit CorpusError(const std::string &msg) : std::runtime_error("corpus: " + msg) {}
};

struct CorpusProof {
  std::string name;
  Proof proof;
  std::vector<std::string> interpretations;  // keys into Corpus::interpretations
  std::vector<std::string> pool;
};

struct CorpusComposition {
  std::string name;
  std::string proof;                   // key into the proofs
  std::vector<std::string> solutions;  // solution specs, one per antecedent member
  std::string interpretation;
  std::vector<std::string> pool;
};

struct Mismatch {
  std::string proof;
  std::string sequent;
};

// Manifest paths are resolved against the manifest's directory.
struct Corpus {
  std::map<std::string, Interpretation> interpretations;
  std::vector<CorpusProof> proofs;
  std::vector<std::string> provable;
  std::vector<std::string> unprovable;
  std::vector<std::string> elementary;
  std::vector<CorpusComposition> compositions;
  std::vector<Mismatch> mismatches;

  const CorpusProof &proof(const std::string &name) const;
};

Corpus load_corpus(const std::string &manifest);

// "do-nothing", "doubling", "fn:<letter>:<arity>" (table of an interpreted function) or a table file.
std::unique_ptr<Strategy> make_solution(const std::string &desc, const Interpretation &I,
                                        const std::string &base_dir = ".");

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteOptions {
  std::size_t extraction_seeds = 1000;
  std::size_t composition_seeds = 200;
  std::size_t random_sequents = 100;
  std::size_t delay_runs = 100;
  std::size_t jobs = 1;
};

// The twelve acceptance criteria in order; `only` restricts to the listed ids when nonempty.
std::vector<CriterionResult> run_suite(const Corpus &c, const SuiteOptions &opt = {}, const std::vector<int> &only = {});

std::string format_result(const CriterionResult &r);

}  // namespace cl12
