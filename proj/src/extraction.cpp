#include "cl12/extraction.hpp"

namespace cl12 {

ProofStrategy::ProofStrategy(std::shared_ptr<const Proof> proof) : proof_(std::move(proof)) {
  if (!proof_ || proof_->empty()) throw ExtractionError("empty proof");
  node_ = proof_->size() - 1;
  const Sequent &root = proof_->back().seq;
  for (std::size_t i = 0; i < root.antecedent.size(); ++i) members_.push_back({static_cast<int>(i), ""});
  pending_ = free_vars(root);
}

std::size_t ProofStrategy::scratch_size() const { return 1 + members_.size() + sigma_.size() + queue_.size(); }

void ProofStrategy::observe(const RunView &run) {
  for (; cursor_ < run.size(); ++cursor_) {
    if (run.label(cursor_) != Player::Bot) continue;
    std::string m = run.move(cursor_);
    if (!pending_.empty()) {
      if (m.size() < 2 || m[0] != '#') {
        flags_.push_back("unexpected move during closure: " + m);
        stuck_ = true;
        continue;
      }
      sigma_[pending_.front()] = m.substr(1);
      pending_.erase(pending_.begin());
      continue;
    }
    if (m.rfind("1.", 0) == 0) {
      queue_.push_back({-1, m.substr(2)});
      continue;
    }
    auto d1 = m.find('.', 2), d2 = d1 == std::string::npos ? d1 : m.find('.', d1 + 1);
    if (m.rfind("0.", 0) != 0 || d2 == std::string::npos) {
      flags_.push_back("unrecognized environment move: " + m);
      stuck_ = true;
      continue;
    }
    int real = std::stoi(m.substr(2, d1 - 2));
    std::string u = m.substr(d1 + 1, d2 - d1 - 1), beta = m.substr(d2 + 1);
    bool any = false;
    for (std::size_t k = 0; k < members_.size(); ++k)
      if (members_[k].real == real && is_address_prefix(u, members_[k].address)) {
        queue_.push_back({static_cast<int>(k), beta});
        any = true;
      }
    if (!any) {
      flags_.push_back("environment move addresses no copy: " + m);
      stuck_ = true;
    }
  }
}

std::string ProofStrategy::value_of(const std::string &term) {
  if (is_numeral(term)) return term;
  auto it = sigma_.find(term);
  if (it != sigma_.end()) return it->second;
  // A variable never chosen by the environment: any constant will do.
  sigma_[term] = "0";
  return "0";
}

bool ProofStrategy::dispatch(const Event &e) {
  const ProofStep &st = (*proof_)[node_];
  const Sequent &x = st.seq;
  Sequent z = x;
  std::string why;
  if (e.member < 0) {
    auto f = formula_after_move(x.succedent, e.move, Player::Bot, false, &why);
    if (!f) {
      flags_.push_back("dispatch failure: " + why);
      return false;
    }
    z.succedent = *f;
  } else {
    auto f = formula_after_move(x.antecedent[e.member], e.move, Player::Bot, true, &why);
    if (!f) {
      flags_.push_back("dispatch failure: " + why);
      return false;
    }
    z.antecedent[e.member] = *f;
  }
  std::string c;
  auto hash = e.move.rfind('#');
  if (hash != std::string::npos) c = e.move.substr(hash + 1);
  auto xs = all_vars(x);
  for (auto pi : st.premises) {
    const Sequent &y = (*proof_)[pi].seq;
    if (sequent_equal(y, z)) {
      node_ = pi;
      return true;
    }
    if (c.empty()) continue;
    for (const auto &v : free_vars(y)) {
      if (xs.count(v)) continue;
      if (sequent_equal(substitute(y, Bindings{{v, Term::constant(c)}}), z)) {
        sigma_[v] = c;
        node_ = pi;
        return true;
      }
    }
  }
  flags_.push_back("dispatch failure: no premise matches " + e.move);
  return false;
}

Action ProofStrategy::step(const RunView &run) {
  observe(run);
  if (stuck_ || !pending_.empty()) return Action::wait();
  for (;;) {
    const ProofStep &st = (*proof_)[node_];
    const Sequent &x = st.seq;
    const Rule &r = st.rule;
    auto member_prefix = [&](int m) {
      return "0." + std::to_string(members_[m].real) + "." + members_[m].address + ".";
    };
    switch (r.kind) {
      case RuleKind::Wait: {
        if (queue_.empty()) return Action::wait();
        Event e = queue_.front();
        queue_.pop_front();
        if (!dispatch(e)) {
          stuck_ = true;
          return Action::wait();
        }
        continue;
      }
      case RuleKind::ChooseOr:
        node_ = st.premises[0];
        return Action::make("1." + move_prefix(x.succedent, r.path) + std::to_string(r.choice));
      case RuleKind::ChooseExists: {
        std::string m = "1." + move_prefix(x.succedent, r.path) + "#" + value_of(r.term);
        node_ = st.premises[0];
        return Action::make(m);
      }
      case RuleKind::ChooseAnd: {
        std::string m = member_prefix(r.member) + move_prefix(x.antecedent[r.member], r.path) + std::to_string(r.choice);
        node_ = st.premises[0];
        return Action::make(m);
      }
      case RuleKind::ChooseAll: {
        std::string m =
            member_prefix(r.member) + move_prefix(x.antecedent[r.member], r.path) + "#" + value_of(r.term);
        node_ = st.premises[0];
        return Action::make(m);
      }
      case RuleKind::Replicate: {
        Member old = members_[r.member];
        std::string m = "0." + std::to_string(old.real) + ".:" + old.address;
        members_[r.member].address = old.address + "0";
        members_.push_back({old.real, old.address + "1"});
        int fresh = static_cast<int>(members_.size()) - 1;
        std::size_t n = queue_.size();
        for (std::size_t k = 0; k < n; ++k)
          if (queue_[k].member == r.member) queue_.push_back({fresh, queue_[k].move});
        node_ = st.premises[0];
        return Action::make(m);
      }
    }
  }
}

std::unique_ptr<ProofStrategy> extract(const Proof &p, bool verify) {
  if (verify) {
    auto c = check_proof(p);
    if (!c.ok) throw ExtractionError("proof rejected at step " + std::to_string(c.step + 1) + ": " + c.violation);
  }
  return std::make_unique<ProofStrategy>(std::make_shared<const Proof>(p));
}

std::size_t replicate_count(const Proof &p) {
  std::size_t n = 0;
  for (const auto &s : p)
    if (s.rule.kind == RuleKind::Replicate) ++n;
  return n;
}

}  // namespace cl12
