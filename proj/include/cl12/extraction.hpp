#pragma once

#include <deque>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cl12/calculus.hpp"
#include "cl12/runtime.hpp"

namespace cl12 {

class ExtractionError : public std::runtime_error {
public:
  explicit ExtractionError(const std::string &msg) : std::runtime_error("extraction: " + msg) {}
};

// Walks a checked proof from its conclusion upward while playing the sequent game.
class ProofStrategy : public Strategy {
public:
  explicit ProofStrategy(std::shared_ptr<const Proof> proof);

  Action step(const RunView &run) override;
  std::size_t scratch_size() const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<ProofStrategy>(*this); }
  std::vector<std::string> flags() const override { return flags_; }

  std::size_t node() const { return node_; }
  const std::map<std::string, std::string> &valuation() const { return sigma_; }

private:
  struct Member {
    int real = 0;
    std::string address;
  };
  struct Event {
    int member = -1;  // -1 for the succedent
    std::string move;
  };

  void observe(const RunView &run);
  bool dispatch(const Event &e);
  std::string value_of(const std::string &term);

  std::shared_ptr<const Proof> proof_;
  std::size_t node_;
  std::vector<Member> members_;
  std::map<std::string, std::string> sigma_;
  std::vector<std::string> pending_;
  std::deque<Event> queue_;
  std::size_t cursor_ = 0;
  bool stuck_ = false;
  std::vector<std::string> flags_;
};

// Checks the proof first unless told otherwise.
std::unique_ptr<ProofStrategy> extract(const Proof &p, bool verify = true);

std::size_t replicate_count(const Proof &p);

}  // namespace cl12
