#include <iostream>

#include "cl12/corpus.hpp"

using namespace cl12;

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
int main(int argc, char **argv) {
  std::string manifest = argc > 1 ? argv[1] : "tests/corpus/corpus.json";
  Corpus c;
  try {
    c = load_corpus(manifest);
  } catch (const std::exception &e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  bool all = true;
  for (const auto &r : run_suite(c)) {
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
