#include "cl12/io.hpp"

#include <fstream>
#include <sstream>

namespace cl12 {

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Json proof_to_json(const Proof &p) {
  Json out = Json::array();
  for (const auto &s : p) {
    Json params = Json::object();
    const auto &r = s.rule;
    if (r.kind == RuleKind::ChooseAnd || r.kind == RuleKind::ChooseAll || r.kind == RuleKind::Replicate)
      params["member"] = r.member;
    if (r.kind != RuleKind::Wait && r.kind != RuleKind::Replicate) params["path"] = r.path;
    if (r.kind == RuleKind::ChooseOr || r.kind == RuleKind::ChooseAnd) params["choice"] = r.choice;
    if (r.kind == RuleKind::ChooseExists || r.kind == RuleKind::ChooseAll) params["term"] = r.term;
    Json prem = Json::array();
    for (auto k : s.premises) prem.push_back(k + 1);
    out.push_back({{"seq", to_string(s.seq)}, {"rule", rule_name(r.kind)}, {"params", params}, {"premises", prem}});
  }
  return out;
}

Proof proof_from_json(const Json &j) {
  if (!j.is_array()) throw std::runtime_error("proof file must hold a JSON array");
  Proof p;
  for (const auto &s : j) {
    ProofStep st;
    st.seq = parse_sequent(s.at("seq").get<std::string>());
    st.rule.kind = rule_from_name(s.at("rule").get<std::string>());
    Json params = s.value("params", Json::object());
    st.rule.member = params.value("member", -1);
    st.rule.path = params.value("path", Path{});
    st.rule.choice = params.value("choice", 0);
    st.rule.term = params.value("term", std::string());
    for (const auto &k : s.value("premises", Json::array())) {
      int n = k.get<int>();
      if (n < 1) throw std::runtime_error("premise numbers are 1-based");
      st.premises.push_back(static_cast<std::size_t>(n - 1));
    }
    p.push_back(std::move(st));
  }
  return p;
}

Proof load_proof(const std::string &path) { return proof_from_json(Json::parse(read_file(path))); }

Json interpretation_to_json(const Interpretation &I) {
  Json j;
  j["universe"] = {{"size", I.carrier}};
  j["wrap"] = I.wrap;
  if (I.ideal_naming) {
    j["naming"] = "ideal";
  } else {
    Json n = Json::object();
    for (const auto &[c, e] : I.naming) n[c] = e;
    if (I.naming_default) n["default"] = *I.naming_default;
    j["naming"] = n;
  }
  Json fs = Json::object();
  for (const auto &[f, d] : I.functions) {
    if (!d.builtin.empty()) {
      fs[f] = d.builtin;
      continue;
    }
    Json rows = Json::array();
    for (const auto &[args, v] : d.table) {
      Json row = args;
      row.push_back(v);
      rows.push_back(row);
    }
    Json o = {{"table", rows}};
    if (d.fallback) o["default"] = *d.fallback;
    fs[f] = o;
  }
  j["functions"] = fs;
  Json ps = Json::object();
  for (const auto &[p, d] : I.predicates) {
    if (!d.builtin.empty()) {
      ps[p] = d.builtin;
      continue;
    }
    Json rows = Json::array();
    for (const auto &t : d.tuples) rows.push_back(t);
    ps[p] = {{"tuples", rows}};
  }
  j["predicates"] = ps;
  return j;
}

Interpretation interpretation_from_json(const Json &j) {
  Interpretation I;
  const auto &u = j.at("universe");
  if (u.is_number()) I.carrier = u.get<std::size_t>();
  else if (u.contains("bits")) I.carrier = std::size_t{1} << u.at("bits").get<unsigned>();
  else I.carrier = u.at("size").get<std::size_t>();
  if (I.carrier == 0) throw std::runtime_error("universe must be nonempty");
  I.wrap = j.value("wrap", true);
  auto in_range = [&](Element e) {
    if (e >= I.carrier) throw std::runtime_error("element " + std::to_string(e) + " outside the universe");
    return e;
  };
  if (j.contains("naming")) {
    const auto &n = j.at("naming");
    if (n.is_string()) {
      if (n.get<std::string>() != "ideal") throw std::runtime_error("naming must be \"ideal\" or an object");
      I.ideal_naming = true;
    } else {
      for (const auto &[c, e] : n.items()) {
        if (c == "default") I.naming_default = in_range(e.get<Element>());
        else I.naming[c] = in_range(e.get<Element>());
      }
    }
  } else {
    I.ideal_naming = true;
  }
  const Json fjson = j.value("functions", Json::object());
  for (const auto &[f, d] : fjson.items()) {
    FunctionDef def;
    if (d.is_string()) {
      def.builtin = d.get<std::string>();
      static const std::set<std::string> known{"succ", "add", "mul", "cube"};
      if (!known.count(def.builtin)) throw std::runtime_error("unknown builtin function " + def.builtin);
    } else {
      for (const auto &row : d.at("table")) {
        auto v = row.get<std::vector<Element>>();
        if (v.empty()) throw std::runtime_error("function table rows need a value");
        Element val = in_range(v.back());
        v.pop_back();
        for (auto e : v) in_range(e);
        def.table[v] = val;
      }
      if (d.contains("default")) def.fallback = in_range(d.at("default").get<Element>());
    }
    I.functions[f] = def;
  }
  const Json pjson = j.value("predicates", Json::object());
  for (const auto &[p, d] : pjson.items()) {
    PredicateDef def;
    if (d.is_string()) {
      def.builtin = d.get<std::string>();
      if (def.builtin != "Even" && def.builtin != "Odd") throw std::runtime_error("unknown builtin predicate " + def.builtin);
    } else if (d.is_boolean()) {
      if (d.get<bool>()) def.tuples.insert(std::vector<Element>{});
    } else {
      for (const auto &row : d.at("tuples")) {
        auto v = row.get<std::vector<Element>>();
        for (auto e : v) in_range(e);
        def.tuples.insert(v);
      }
    }
    I.predicates[p] = def;
  }
  return I;
}

Interpretation load_interpretation(const std::string &path) {
  return interpretation_from_json(Json::parse(read_file(path)));
}

Json run_to_json(const Run &r) {
  Json out = Json::array();
  for (const auto &m : r) out.push_back(std::string(1, player_char(m.player)) + " " + m.move);
  return out;
}

Run run_from_json(const Json &j) {
  std::string text;
  for (const auto &m : j) text += m.get<std::string>() + "\n";
  return parse_run(text);
}

}  // namespace cl12
