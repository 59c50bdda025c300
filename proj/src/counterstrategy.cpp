#include "cl12/counterstrategy.hpp"

#include <algorithm>

namespace cl12 {

namespace {

TermPtr term_const_to_var(const TermPtr &t, const std::string &c, const std::string &v) {
  if (t->kind == Term::Kind::Const) return t->name == c ? Term::var(v) : t;
  if (t->kind == Term::Kind::Var) return t;
  std::vector<TermPtr> args;
  for (const auto &a : t->args) args.push_back(term_const_to_var(a, c, v));
  return Term::app(t->name, std::move(args));
}

FormulaPtr const_to_var(const FormulaPtr &f, const std::string &c, const std::string &v) {
  switch (f->op) {
    case Op::Top:
    case Op::Bot:
      return f;
    case Op::Atom:
    case Op::NegAtom: {
      std::vector<TermPtr> ts;
      for (const auto &t : f->terms) ts.push_back(term_const_to_var(t, c, v));
      return Formula::atom(f->name, std::move(ts), f->op == Op::NegAtom);
    }
    case Op::And:
    case Op::Or:
    case Op::CAnd:
    case Op::COr:
      return Formula::binary(f->op, const_to_var(f->kids[0], c, v), const_to_var(f->kids[1], c, v));
    default:
      return Formula::quant(f->op, f->name, const_to_var(f->kids[0], c, v));
  }
}

void collect_letters(const TermPtr &t, Interpretation &I) {
  if (t->kind == Term::Kind::App) {
    I.functions.emplace(t->name, FunctionDef{"", {}, 0});
    for (const auto &a : t->args) collect_letters(a, I);
  }
}

void collect_letters(const FormulaPtr &f, Interpretation &I) {
  if (f->op == Op::Atom || f->op == Op::NegAtom) {
    if (f->name != "=") I.predicates.emplace(f->name, PredicateDef{});
    for (const auto &t : f->terms) collect_letters(t, I);
  }
  for (const auto &k : f->kids) collect_letters(k, I);
}

std::string member_prefix(int real, const std::string &address) {
  return "0." + std::to_string(real) + "." + address + ".";
}

}  // namespace

Counterstrategy::Counterstrategy(const Sequent &s, CounterOptions opt) : y_(s), opt_(std::move(opt)) {
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) members_.push_back({static_cast<int>(i), ""});
}

Sequent Counterstrategy::instantiated() const {
  Bindings b;
  for (const auto &[v, c] : e_) b[v] = Term::constant(c);
  return substitute(y_, b);
}

void Counterstrategy::fail(const std::string &why) {
  failed_ = true;
  failure_ = why;
}

ProverOptions Counterstrategy::prover_options() const {
  ProverOptions o = opt_.prover;
  o.replicate_cap = std::max(0, o.replicate_cap - static_cast<int>(replications_));
  return o;
}

std::string Counterstrategy::fresh_constant() const {
  auto avoid = constants(instantiated());
  for (const auto &[v, c] : e_) avoid.insert(c);
  return smallest_fresh_numeral(avoid);
}

std::optional<FormulaPtr> Counterstrategy::advance(const FormulaPtr &f, const std::string &beta, bool swapped) {
  auto r = formula_after_move(f, beta, Player::Top, swapped);
  if (!r) return std::nullopt;
  auto hash = beta.rfind('#');
  if (hash == std::string::npos) return r;
  std::string c = beta.substr(hash + 1);
  // A constant standing for a variable of Y is read back as that variable.
  for (const auto &[v, k] : e_)
    if (k == c) return const_to_var(*r, c, v);
  return r;
}

void Counterstrategy::machine_move(const std::string &m) {
  if (m.rfind("1.", 0) == 0) {
    auto f = advance(y_.succedent, m.substr(2), false);
    if (!f) return fail("machine move does not apply to the current sequent: " + m);
    y_.succedent = *f;
    return;
  }
  auto d1 = m.find('.', 2);
  if (m.rfind("0.", 0) != 0 || d1 == std::string::npos) return fail("unexpected machine move: " + m);
  int real = std::stoi(m.substr(2, d1 - 2));
  if (d1 + 1 < m.size() && m[d1 + 1] == ':') {
    std::string w = m.substr(d1 + 2);
    for (std::size_t k = 0; k < members_.size(); ++k)
      if (members_[k].real == real && members_[k].address == w) {
        members_[k].address = w + "0";
        members_.push_back({real, w + "1"});
        y_.antecedent.push_back(y_.antecedent[k]);
        ++replications_;
        return;
      }
    return fail("replication of an unknown copy: " + m);
  }
  auto d2 = m.find('.', d1 + 1);
  if (d2 == std::string::npos) return fail("unexpected machine move: " + m);
  std::string u = m.substr(d1 + 1, d2 - d1 - 1), beta = m.substr(d2 + 1);
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k].real != real || !is_address_prefix(u, members_[k].address)) continue;
    auto f = advance(y_.antecedent[k], beta, true);
    if (!f) return fail("machine move does not apply to the current sequent: " + m);
    y_.antecedent[k] = *f;
  }
}

void Counterstrategy::observe(const RunView &run) {
  for (; cursor_ < run.size() && !failed_; ++cursor_)
    if (run.label(cursor_) == Player::Top) machine_move(run.move(cursor_));
}

std::vector<Counterstrategy::Candidate> Counterstrategy::candidates() const {
  std::vector<Candidate> out;
  auto avoid = all_vars(y_);
  for (const auto &[v, c] : e_) avoid.insert(v);
  const FormulaPtr &f = y_.succedent;
  for (const auto &p : surface_occurrences(f, Op::CAnd)) {
    auto occ = subformula_at(f, p);
    for (int i : {0, 1}) {
      Sequent z = y_;
      z.succedent = replace_at(f, p, occ->kids[i]);
      out.push_back({z, "1." + move_prefix(f, p) + std::to_string(i), ""});
    }
  }
  for (const auto &p : surface_occurrences(f, Op::CAll)) {
    auto occ = subformula_at(f, p);
    auto v = fresh_variable(occ->name, avoid);
    Sequent z = y_;
    z.succedent = replace_at(f, p, substitute(occ->kids[0], occ->name, Term::var(v)));
    out.push_back({z, "1." + move_prefix(f, p) + "#", v});
  }
  for (std::size_t m = 0; m < y_.antecedent.size(); ++m) {
    const FormulaPtr &g = y_.antecedent[m];
    std::string pre = member_prefix(members_[m].real, members_[m].address);
    for (const auto &p : surface_occurrences(g, Op::COr)) {
      auto occ = subformula_at(g, p);
      for (int i : {0, 1}) {
        Sequent z = y_;
        z.antecedent[m] = replace_at(g, p, occ->kids[i]);
        out.push_back({z, pre + move_prefix(g, p) + std::to_string(i), ""});
      }
    }
    for (const auto &p : surface_occurrences(g, Op::CEx)) {
      auto occ = subformula_at(g, p);
      auto v = fresh_variable(occ->name, avoid);
      Sequent z = y_;
      z.antecedent[m] = replace_at(g, p, substitute(occ->kids[0], occ->name, Term::var(v)));
      out.push_back({z, pre + move_prefix(g, p) + "#", v});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate &a, const Candidate &b) { return to_string(a.z) < to_string(b.z); });
  return out;
}

std::vector<std::string> Counterstrategy::act(const GameState &st, const RunView &run, std::size_t) {
  std::vector<std::string> out;
  if (failed_) return out;
  observe(run);
  if (failed_) return out;
  if (!closed_) {
    auto avoid = constants(y_);
    for (const auto &v : st.pending) {
      std::string c = smallest_fresh_numeral(avoid);
      avoid.insert(c);
      e_[v] = c;
      out.push_back("#" + c);
    }
    closed_ = true;
  }
  for (;;) {
    auto verdict = is_stable(y_, opt_.oracle);
    if (verdict.kind == VerdictKind::Unknown) {
      fail("stability of " + to_string(y_) + " is unknown");
      return out;
    }
    stable_ = verdict.kind == VerdictKind::Valid;
    if (!stable_) return out;
    bool unknown = false;
    std::optional<Candidate> pick;
    for (auto &c : candidates()) {
      auto r = prove(c.z, prover_options());
      if (r.status == ProveStatus::Unprovable) {
        pick = std::move(c);
        break;
      }
      if (r.status == ProveStatus::Unknown) unknown = true;
    }
    if (!pick) {
      fail(unknown ? "no premise of " + to_string(y_) + " is certified unprovable"
                   : "every premise of " + to_string(y_) + " is provable");
      return out;
    }
    std::string move = pick->move;
    if (!pick->fresh_var.empty()) {
      std::string c = fresh_constant();
      move += c;
      e_[pick->fresh_var] = c;
    }
    y_ = pick->z;
    out.push_back(move);
  }
}

Interpretation blank_interpretation(const Sequent &s) {
  Interpretation I;
  I.carrier = 1;
  I.naming_default = 0;
  for (const auto &f : s.antecedent) collect_letters(f, I);
  collect_letters(s.succedent, I);
  return I;
}

Refutation refute(const Sequent &s, Strategy &machine, const RefuteOptions &opt) {
  Refutation r;
  r.initial = initial_state(s);
  r.final_state = r.initial;
  auto pr = prove(s, opt.counter.prover);
  if (pr.status != ProveStatus::Unprovable) {
    r.reason = "refused: prove returned " + to_string(pr.status);
    return r;
  }
  Counterstrategy c(s, opt.counter);
  Interpretation blank = blank_interpretation(s);
  PlayOptions po;
  po.max_ticks = opt.max_ticks;
  auto rec = play(machine, c, r.initial, blank, po);
  r.run = rec.run;
  r.final_state = rec.final_state;
  r.mapping = c.mapping();
  if (c.failed()) {
    r.reason = c.failure();
    return r;
  }
  if (rec.illegal) {
    if (rec.offender == Player::Bot) {
      r.reason = "counterstrategy moved illegally: " + rec.reason;
      return r;
    }
    // The first illegal mover loses under every interpretation.
    r.machine_illegal = true;
    r.interpretation = blank;
    r.ok = winner(r.initial, r.run, blank) == Player::Bot;
    r.reason = "machine moved illegally: " + rec.reason;
    return r;
  }
  if (c.machine_replications() > opt.replication_budget) {
    r.reason = "machine exceeded the replication budget";
    return r;
  }
  auto v = decide_validity(position_formula(rec.final_state), opt.counter.oracle);
  if (v.kind != VerdictKind::Invalid || !v.model) {
    r.reason = v.kind == VerdictKind::Valid ? "machine won the reached position"
                                            : "no falsifying interpretation within the domain bound";
    return r;
  }
  r.interpretation = v.model->interp;
  if (r.interpretation.size() > static_cast<std::size_t>(opt.counter.oracle.max_domain)) {
    r.reason = "falsifying interpretation exceeds the domain bound";
    return r;
  }
  if (winner(r.initial, r.run, r.interpretation) != Player::Bot) {
    r.reason = "falsifying interpretation failed to re-verify";
    return r;
  }
  r.ok = true;
  r.reason = "refuted";
  return r;
}

Json refutation_to_json(const Refutation &r) {
  Json j{{"ok", r.ok},
         {"reason", r.reason},
         {"run", run_to_json(r.run)},
         {"final_position", to_string(r.final_state)},
         {"machine_illegal", r.machine_illegal},
         {"mapping", r.mapping}};
  if (r.ok) j["interpretation"] = interpretation_to_json(r.interpretation);
  return j;
}

}  // namespace cl12
