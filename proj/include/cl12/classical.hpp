#pragma once

#include <optional>
#include <string>

#include "cl12/semantics.hpp"
#include "cl12/syntax.hpp"

namespace cl12 {

enum class VerdictKind { Valid, Invalid, Unknown };

struct Countermodel {
  Interpretation interp;
  Valuation valuation;  // free variables of the query
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Countermodel> model;  // present iff Invalid; verified by direct evaluation
  std::string certificate;
  std::size_t steps = 0;
};

struct OracleOptions {
  std::size_t budget = 100000;
  int max_domain = 3;
};

std::string to_string(VerdictKind k);

// Classical validity with equality; free variables are read universally.
Verdict decide_validity(const FormulaPtr &f, const OracleOptions &opt = {});
// Validity of the elementarization of s.
Verdict is_stable(const Sequent &s, const OracleOptions &opt = {});

}  // namespace cl12
