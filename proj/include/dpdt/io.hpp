// Copyright 2026 The dpdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dpdt/bounds.hpp"
#include "dpdt/laplace.hpp"
#include "dpdt/mechanism.hpp"
#include "dpdt/participation.hpp"
#include "dpdt/privacy_audit.hpp"
#include "dpdt/scenarios.hpp"
#include "dpdt/utility.hpp"

namespace dpdt {

using json = nlohmann::json;

// Validation failure with the JSON path of the first violated rule.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& rule)
      : std::runtime_error(path + ": " + rule) {}
};

// Privacy parameter epsilon from text: "ln(p/q)" gives an exact e^eps;
// a plain rational or decimal ("1", "1/4", "0.25") keeps eps itself exact
// while e^eps stays a formal exponential.
struct EpsilonParam {
  bool exact_exp = false;
  Rational value;  // e^eps when exact_exp, eps otherwise

  ExpSum e_eps_expr() const {
    return exact_exp ? ExpSum(value) : ExpSum::exp_term(1, value);
  }
  Rational exact_e_eps(const std::string& context) const {
    if (!exact_exp)
      throw std::invalid_argument(
          context + " requires eps in ln(p/q) form so that e^eps is exact");
    return value;
  }
  PrivacyCost cost(const Rational& delta) const {
    return exact_exp ? PrivacyCost::from_exact_e_eps(value, delta)
                     : PrivacyCost::from_eps(value, delta);
  }
};

inline EpsilonParam parse_epsilon(const std::string& text) {
  if (text.rfind("ln(", 0) == 0 && text.back() == ')') {
    Rational r = parse_rational(text.substr(3, text.size() - 4));
    if (r < 1) throw std::invalid_argument("ln argument must be >= 1 for eps >= 0");
    return {true, r};
  }
  Rational eps = parse_decimal_or_rational(text);
  if (eps < 0) throw std::invalid_argument("eps must be >= 0");
  if (eps == 0) return {true, Rational(1)};  // e^0 is exactly 1
  return {false, eps};
}

// --- Mechanism files --------------------------------------------------------

namespace io_detail {

inline std::string join(const InputTuple& x) {
  std::string key;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) key += ",";
    key += x[i];
  }
  return key;
}

inline const json& require(const json& j, const std::string& field,
                           const std::string& path) {
  if (!j.contains(field)) throw ScenarioError(path, "missing field '" + field + "'");
  return j.at(field);
}

inline std::vector<Symbol> symbol_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array of strings");
  std::vector<Symbol> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ScenarioError(path, "expected an array of strings");
    out.push_back(v.get<std::string>());
    if (out.back().find(',') != std::string::npos)
      throw ScenarioError(path, "symbols must not contain ','");
  }
  return out;
}

inline Rational rational_field(const json& j, const std::string& path) {
  if (!j.is_string())
    throw ScenarioError(path, "probabilities and utilities are exact strings "
                              "like \"1/7\"; numbers are rejected");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ScenarioError(path, e.what());
  }
}

inline std::vector<Rational> rational_row(const json& j, const std::string& path) {
  if (!j.is_array()) throw ScenarioError(path, "expected an array");
  std::vector<Rational> row;
  for (std::size_t i = 0; i < j.size(); ++i)
    row.push_back(rational_field(j[i], path + "[" + std::to_string(i) + "]"));
  return row;
}

}  // namespace io_detail

using MechanismVariant = std::variant<TableMechanism, ThresholdLaplaceMechanism>;

// Reads either an explicit table
//   { "agents": [[...],...], "outputs": [...], "rows": { "a,b": ["1/7",...] } }
// or a parametric family
//   { "family": "noisy-count" | "randomized-response" | "reveal"
//              | "threshold-laplace", "params": {...} }
inline MechanismVariant mechanism_from_json(const json& j,
                                            const std::string& path) {
  using namespace io_detail;
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  if (j.contains("family")) {
    std::string family = require(j, "family", path).get<std::string>();
    const json& params = require(j, "params", path);
    const std::string ppath = path + ".params";
    auto eps_param = [&]() {
      return parse_epsilon(require(params, "eps", ppath).get<std::string>());
    };
    if (family == "noisy-count") {
      bool opt_out = params.value("opt_out", false);
      return noisy_count_mechanism(eps_param().exact_e_eps("noisy-count"), opt_out);
    }
    if (family == "randomized-response") {
      return randomized_response_mechanism(
          rational_field(require(params, "flip", ppath), ppath + ".flip"));
    }
    if (family == "reveal") {
      return reveal_with_probability_mechanism(
          rational_field(require(params, "delta", ppath), ppath + ".delta"));
    }
    if (family == "threshold-laplace") {
      std::size_t n = require(params, "agents", ppath).get<std::size_t>();
      EpsilonParam eps = eps_param();
      if (eps.exact_exp)
        throw ScenarioError(ppath + ".eps",
                            "threshold-laplace takes eps as a plain rational");
      Rational threshold = rational_field(require(params, "threshold", ppath),
                                          ppath + ".threshold");
      std::string dir =
          require(params, "direction", ppath).get<std::string>();
      if (dir != "at-most" && dir != "at-least")
        throw ScenarioError(ppath + ".direction", "expected 'at-most' or 'at-least'");
      auto direction = dir == "at-most"
                           ? ThresholdLaplaceMechanism::Direction::AtMost
                           : ThresholdLaplaceMechanism::Direction::AtLeast;
      if (params.contains("alphabet") || params.contains("sensitivity")) {
        std::vector<Symbol> alphabet =
            symbol_list(require(params, "alphabet", ppath), ppath + ".alphabet");
        Rational gs = rational_field(require(params, "sensitivity", ppath),
                                     ppath + ".sensitivity");
        return ThresholdLaplaceMechanism(InputSpace::uniform(n, alphabet), gs,
                                         eps.value, threshold, direction);
      }
      return ThresholdLaplaceMechanism::counting_survey(n, eps.value, threshold,
                                                        direction);
    }
    throw ScenarioError(path + ".family", "unknown family '" + family + "'");
  }
  std::vector<std::vector<Symbol>> agents;
  const json& jagents = require(j, "agents", path);
  if (!jagents.is_array() || jagents.empty())
    throw ScenarioError(path + ".agents", "expected a nonempty array of alphabets");
  for (std::size_t a = 0; a < jagents.size(); ++a)
    agents.push_back(
        symbol_list(jagents[a], path + ".agents[" + std::to_string(a) + "]"));
  std::vector<Symbol> outputs =
      symbol_list(require(j, "outputs", path), path + ".outputs");
  InputSpace space(agents);
  const json& jrows = require(j, "rows", path);
  if (!jrows.is_object()) throw ScenarioError(path + ".rows", "expected an object");
  std::map<InputTuple, std::vector<Rational>> rows;
  for (const auto& x : space.inputs()) {
    std::string key = join(x);
    std::string rpath = path + ".rows['" + key + "']";
    if (!jrows.contains(key)) throw ScenarioError(rpath, "missing row");
    std::vector<Rational> row = rational_row(jrows.at(key), rpath);
    if (row.size() != outputs.size())
      throw ScenarioError(rpath, "row width " + std::to_string(row.size()) +
                                     " does not match " +
                                     std::to_string(outputs.size()) + " outputs");
    Rational sum = 0;
    for (const Rational& p : row) {
      if (p < 0) throw ScenarioError(rpath, "negative probability");
      sum += p;
    }
    if (sum != 1)
      throw ScenarioError(rpath, "probabilities sum to " + to_string(sum) +
                                     ", expected 1");
    rows[x] = std::move(row);
  }
  if (jrows.size() != rows.size())
    throw ScenarioError(path + ".rows", "row keys do not match the input space");
  return TableMechanism(std::move(space), std::move(outputs), std::move(rows));
}

inline json mechanism_to_json(const TableMechanism& m) {
  json j;
  json agents = json::array();
  for (std::size_t a = 0; a < m.space().agent_count(); ++a)
    agents.push_back(m.space().alphabet(a));
  j["agents"] = std::move(agents);
  j["outputs"] = m.outputs();
  json rows = json::object();
  for (const auto& [x, row] : m.rows()) {
    json r = json::array();
    for (const Rational& p : row) r.push_back(to_string(p));
    rows[io_detail::join(x)] = std::move(r);
  }
  j["rows"] = std::move(rows);
  return j;
}

// --- Post-processors and utilities ------------------------------------------

inline PostProcessor post_processor_from_json(const json& j,
                                              const std::vector<Symbol>& outputs,
                                              const std::string& path) {
  using namespace io_detail;
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  std::vector<Symbol> consequences =
      symbol_list(require(j, "consequences", path), path + ".consequences");
  if (j.contains("map")) {
    const json& jmap = j.at("map");
    std::map<Symbol, Symbol> map;
    for (const auto& [o, c] : jmap.items()) {
      if (std::find(outputs.begin(), outputs.end(), o) == outputs.end())
        throw ScenarioError(path + ".map['" + o + "']",
                            "output '" + o + "' is not in the mechanism's output set");
      if (!c.is_string() ||
          std::find(consequences.begin(), consequences.end(),
                    c.get<std::string>()) == consequences.end())
        throw ScenarioError(path + ".map['" + o + "']",
                            "consequence is not in the consequence set");
      map[o] = c.get<std::string>();
    }
    for (const Symbol& o : outputs)
      if (!map.count(o))
        throw ScenarioError(path + ".map", "output '" + o + "' is not covered");
    return PostProcessor::deterministic(consequences, map);
  }
  const json& jrows = require(j, "rows", path);
  std::map<Symbol, std::vector<Rational>> rows;
  for (const auto& [o, jr] : jrows.items()) {
    std::string rpath = path + ".rows['" + o + "']";
    if (std::find(outputs.begin(), outputs.end(), o) == outputs.end())
      throw ScenarioError(rpath, "output '" + o + "' is not in the mechanism's output set");
    std::vector<Rational> row = rational_row(jr, rpath);
    if (row.size() != consequences.size())
      throw ScenarioError(rpath, "row width does not match the consequence set");
    Rational sum = 0;
    for (const Rational& p : row) {
      if (p < 0) throw ScenarioError(rpath, "negative probability");
      sum += p;
    }
    if (sum != 1)
      throw ScenarioError(rpath,
                          "probabilities sum to " + to_string(sum) + ", expected 1");
    rows[o] = std::move(row);
  }
  for (const Symbol& o : outputs)
    if (!rows.count(o))
      throw ScenarioError(path + ".rows", "output '" + o + "' is not covered");
  return PostProcessor(consequences, std::move(rows));
}

inline json post_processor_to_json(const PostProcessor& f) {
  json j;
  j["consequences"] = f.consequences();
  json rows = json::object();
  for (const auto& [o, row] : f.rows()) {
    json r = json::array();
    for (const Rational& p : row) r.push_back(to_string(p));
    rows[o] = std::move(r);
  }
  j["rows"] = std::move(rows);
  return j;
}

inline UtilityFunction utility_from_json(const json& j,
                                         const std::vector<Symbol>& consequences,
                                         const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  std::map<Symbol, Hyperreal> values;
  for (const auto& [c, v] : j.items()) {
    std::string vpath = path + ".['" + c + "']";
    if (std::find(consequences.begin(), consequences.end(), c) == consequences.end())
      throw ScenarioError(vpath, "consequence '" + c + "' is not in the consequence set");
    if (!v.is_string())
      throw ScenarioError(vpath, "utilities are hyperreal term strings");
    try {
      values[c] = Hyperreal::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ScenarioError(vpath, e.what());
    }
  }
  for (const Symbol& c : consequences)
    if (!values.count(c))
      throw ScenarioError(path, "utility undefined on consequence '" + c + "'");
  return UtilityFunction(std::move(values));
}

// --- Scenario files ---------------------------------------------------------

// A complete analysis input: mechanism, consequence map, per-agent
// utilities, the agent under analysis, and optional nominal parameters.
struct ScenarioFile {
  MechanismVariant mechanism;
  std::optional<PostProcessor> post_processor;  // absent for threshold-laplace
  std::vector<Symbol> consequences;
  std::map<std::size_t, UtilityFunction> utilities;
  std::size_t agent = 0;
  std::optional<EpsilonParam> nominal_eps;
  std::optional<Rational> nominal_delta;

  bool is_table() const { return std::holds_alternative<TableMechanism>(mechanism); }
  const TableMechanism& table() const { return std::get<TableMechanism>(mechanism); }
  const ThresholdLaplaceMechanism& threshold() const {
    return std::get<ThresholdLaplaceMechanism>(mechanism);
  }
  const InputSpace& space() const {
    return is_table() ? table().space() : threshold().space();
  }
  const UtilityFunction& utility() const {
    auto it = utilities.find(agent);
    if (it == utilities.end())
      throw std::invalid_argument("no utility function for agent " +
                                  std::to_string(agent));
    return it->second;
  }
};

inline ScenarioFile scenario_from_json(const json& j) {
  using namespace io_detail;
  const std::string root = "$";
  if (!j.is_object()) throw ScenarioError(root, "expected an object");
  ScenarioFile s;
  s.mechanism = mechanism_from_json(require(j, "mechanism", root), root + ".mechanism");
  if (s.is_table()) {
    const json& jpost = require(j, "post_processor", root);
    s.post_processor = post_processor_from_json(jpost, s.table().outputs(),
                                                root + ".post_processor");
    s.consequences = s.post_processor->consequences();
  } else {
    if (j.contains("post_processor"))
      throw ScenarioError(root + ".post_processor",
                          "threshold-laplace mechanisms carry their own "
                          "binary consequence map");
    s.consequences = s.threshold().consequences();
  }
  std::size_t n = s.space().agent_count();
  const json& jagent = require(j, "agent", root);
  if (!jagent.is_number_unsigned() || jagent.get<std::size_t>() >= n)
    throw ScenarioError(root + ".agent",
                        "agent must be an index in [0, " + std::to_string(n) + ")");
  s.agent = jagent.get<std::size_t>();
  const json& jutils = require(j, "utilities", root);
  if (!jutils.is_object()) throw ScenarioError(root + ".utilities", "expected an object");
  for (const auto& [key, ju] : jutils.items()) {
    std::size_t index = 0;
    try {
      std::size_t pos = 0;
      index = std::stoul(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ScenarioError(root + ".utilities", "agent key '" + key + "' is not an index");
    }
    if (index >= n)
      throw ScenarioError(root + ".utilities['" + key + "']",
                          "agent index out of range");
    s.utilities.emplace(index, utility_from_json(ju, s.consequences,
                                                 root + ".utilities['" + key + "']"));
  }
  if (j.contains("nominal_eps"))
    s.nominal_eps = parse_epsilon(j.at("nominal_eps").get<std::string>());
  if (j.contains("nominal_delta")) {
    s.nominal_delta = rational_field(j.at("nominal_delta"), root + ".nominal_delta");
    if (*s.nominal_delta < 0 || *s.nominal_delta > 1)
      throw ScenarioError(root + ".nominal_delta", "delta in [0,1]");
  }
  return s;
}

inline ScenarioFile load_scenario(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw std::runtime_error("cannot open " + file_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(file_path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline json load_json(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw std::runtime_error("cannot open " + file_path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(file_path + ": " + e.what());
  }
  return j;
}

// --- Report rendering -------------------------------------------------------

inline json rational_json(const Rational& r) {
  return json{{"exact", to_string(r)}, {"approx", to_double(r)}};
}

inline json hyperreal_json(const Hyperreal& h) {
  json j{{"exact", h.to_string()},
         {"class", to_string(h.classify())}};
  if (h.is_real()) j["approx"] = to_double(h.standard_part());
  return j;
}

inline json exp_sum_json(const ExpSum& e) {
  return json{{"exact", e.to_string()}, {"approx", e.to_double()}};
}

inline json witness_json(const AuditWitness& w) {
  return json{{"x", w.x}, {"x_prime", w.x_prime}, {"outputs", w.outputs}};
}

inline json profile_to_json(const PrivacyProfile& p) {
  json tightest;
  tightest["infinite"] = p.tightest.infinite;
  if (!p.tightest.infinite) {
    tightest["e_eps"] = to_string(p.tightest.e_eps);
    tightest["epsilon"] = p.tightest.epsilon();
  }
  tightest["witness"] = witness_json(p.tightest.witness);
  json curve = json::array();
  for (const auto& [e_eps, delta] : p.delta_curve)
    curve.push_back(json{{"e_eps", to_string(e_eps)},
                         {"epsilon", std::log(to_double(e_eps))},
                         {"delta", to_string(delta)},
                         {"delta_approx", to_double(delta)}});
  return json{{"tightest", std::move(tightest)}, {"delta_curve", std::move(curve)}};
}

inline json bound_report_to_json(const BoundReport& r) {
  return json{{"lhs", hyperreal_json(r.lhs)},
              {"rhs", hyperreal_json(r.rhs)},
              {"holds", r.holds},
              {"witness",
               json{{"agent", r.witness.agent},
                    {"response", r.witness.response},
                    {"response_alt", r.witness.response_alt},
                    {"environment", r.witness.environment}}}};
}

inline json participation_to_json(const ParticipationReport& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates)
    candidates.push_back(json{{"response", c.response},
                              {"max_gap", hyperreal_json(c.max_gap)},
                              {"worst_environment", c.worst_environment}});
  json j{{"satisfied", r.satisfied},
         {"gap", hyperreal_json(r.gap)},
         {"worst_environment", r.worst_environment},
         {"candidates", std::move(candidates)}};
  if (r.best_response) j["best_response"] = *r.best_response;
  return j;
}

inline json laplace_gap_json(const LaplaceGap& g) {
  json j{{"utility_span", g.utility_span.to_string()},
         {"probability_delta", exp_sum_json(g.probability_delta)},
         {"class", to_string(g.classification())},
         {"exact", g.to_string()}};
  if (g.utility_span.is_real())
    j["approx"] = to_double(g.utility_span.standard_part()) *
                  g.probability_delta.to_double();
  return j;
}

inline json participation_to_json(const LaplaceParticipationReport& r) {
  json candidates = json::array();
  for (const auto& c : r.candidates)
    candidates.push_back(json{{"response", c.response},
                              {"max_gap", laplace_gap_json(c.max_gap)},
                              {"worst_environment", c.worst_environment}});
  json j{{"satisfied", r.satisfied},
         {"gap", laplace_gap_json(r.gap)},
         {"worst_environment", r.worst_environment},
         {"candidates", std::move(candidates)}};
  if (r.best_response) j["best_response"] = *r.best_response;
  return j;
}

inline json compensation_to_json(const CompensationResult& c) {
  return json{{"kind", to_string(c.kind)},
              {"amount", hyperreal_json(c.amount)},
              {"bound", hyperreal_json(c.bound)},
              {"bound_e_eps", to_string(c.bound_e_eps)},
              {"bound_delta", to_string(c.bound_delta)}};
}

inline json compensation_to_json(const LaplaceCompensationResult& c) {
  return json{{"kind", to_string(c.kind)},
              {"amount", laplace_gap_json(c.amount)},
              {"bound", laplace_gap_json(c.bound)}};
}

inline json verdict_to_json(const ScenarioVerdict& v) {
  json claims = json::array();
  for (const auto& c : v.claims)
    claims.push_back(json{{"description", c.description},
                          {"expected", c.expected},
                          {"computed", c.computed},
                          {"pass", c.pass}});
  return json{{"scenario", v.name}, {"pass", v.all_pass()}, {"claims", std::move(claims)}};
}

}  // namespace dpdt
