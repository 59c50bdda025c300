#pragma once

#include <json.hpp>
#include <string>

#include "cl12/calculus.hpp"
#include "cl12/semantics.hpp"

namespace cl12 {

using Json = nlohmann::json;

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &text);

// Proof file: array of {seq, rule, params, premises}; premises are 1-based step numbers.
Json proof_to_json(const Proof &p);
Proof proof_from_json(const Json &j);
Proof load_proof(const std::string &path);

// Interpretation file: {universe, wrap, naming, functions, predicates}.
Json interpretation_to_json(const Interpretation &I);
Interpretation interpretation_from_json(const Json &j);
Interpretation load_interpretation(const std::string &path);

Json run_to_json(const Run &r);
Run run_from_json(const Json &j);

}  // namespace cl12
