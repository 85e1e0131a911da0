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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpdt/dpdt.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerdictFailed = 1;  // violated check or failed scenario claim
constexpr int kUsageError = 2;     // bad arguments or unparseable input

void emit(const dpdt::json& j) { std::cout << j.dump(2) << std::endl; }

int run_audit(const std::string& mechanism_path, std::size_t curve_points,
              const std::string& curve_max, const std::string& check_eps,
              const std::string& check_delta) {
  dpdt::MechanismVariant mv =
      dpdt::mechanism_from_json(dpdt::load_json(mechanism_path), "$");
  if (!std::holds_alternative<dpdt::TableMechanism>(mv))
    throw std::invalid_argument(
        "audit requires a finite table mechanism; threshold-laplace families "
        "are pure eps-DP by construction");
  const auto& m = std::get<dpdt::TableMechanism>(mv);
  dpdt::PrivacyProfile profile = dpdt::audit_profile(
      m, curve_points, dpdt::parse_rational(curve_max));
  dpdt::json out = dpdt::profile_to_json(profile);
  int code = kOk;
  if (!check_eps.empty()) {
    dpdt::Rational e_eps =
        dpdt::parse_epsilon(check_eps).exact_e_eps("audit --check-eps");
    dpdt::Rational delta =
        check_delta.empty() ? dpdt::Rational(0) : dpdt::parse_rational(check_delta);
    dpdt::VerifyResult v = dpdt::verify(m, e_eps, delta);
    dpdt::json check{{"e_eps", dpdt::to_string(e_eps)},
                     {"delta", dpdt::to_string(delta)},
                     {"satisfied", v.satisfied},
                     {"tight_delta", dpdt::to_string(v.audit.delta)}};
    if (!v.satisfied) check["witness"] = dpdt::witness_json(v.audit.witness);
    out["check"] = std::move(check);
    if (!v.satisfied) code = kVerdictFailed;
  }
  emit(out);
  return code;
}

int run_bounds(const std::string& scenario_path) {
  dpdt::ScenarioFile s = dpdt::load_scenario(scenario_path);
  if (!s.is_table())
    throw std::invalid_argument(
        "bounds operates on finite table mechanisms; use `participation` for "
        "threshold-laplace scenarios");
  const auto& m = s.table();
  const auto& f = *s.post_processor;
  const auto& u = s.utility();
  dpdt::json out;
  dpdt::BoundReport euclid = dpdt::euclidean_bound_check(m, f, u, s.agent);
  out["euclidean"] = dpdt::bound_report_to_json(euclid);
  dpdt::EpsilonAudit audit = dpdt::tightest_epsilon(m);
  out["audited_e_eps"] =
      audit.infinite ? dpdt::json("infinite") : dpdt::json(dpdt::to_string(audit.e_eps));
  if (u.nonnegative_real() && !audit.infinite) {
    dpdt::BoundReport ratio = dpdt::ratio_bound_scan(m, f, u, audit.e_eps);
    out["ratio"] = dpdt::bound_report_to_json(ratio);
  }
  emit(out);
  return euclid.holds ? kOk : kVerdictFailed;
}

int run_participation(const std::string& scenario_path) {
  dpdt::ScenarioFile s = dpdt::load_scenario(scenario_path);
  dpdt::json out;
  bool satisfied = false;
  if (s.is_table()) {
    dpdt::CompensationResult comp =
        dpdt::exact_min_compensation(s.table(), *s.post_processor, s.utility(), s.agent);
    satisfied = comp.participation.satisfied;
    out["participation"] = dpdt::participation_to_json(comp.participation);
    out["compensation"] = dpdt::compensation_to_json(comp);
  } else {
    dpdt::LaplaceCompensationResult comp =
        dpdt::exact_min_compensation(s.threshold(), s.utility(), s.agent);
    satisfied = comp.participation.satisfied;
    out["participation"] = dpdt::participation_to_json(comp.participation);
    out["compensation"] = dpdt::compensation_to_json(comp);
  }
  emit(out);
  return satisfied ? kOk : kVerdictFailed;
}

int run_compare(const std::string& eps1, const std::string& delta1,
                const std::string& eps2, const std::string& delta2,
                std::size_t consequence_count) {
  dpdt::PrivacyCost first =
      dpdt::parse_epsilon(eps1).cost(dpdt::parse_decimal_or_rational(delta1));
  dpdt::PrivacyCost second =
      dpdt::parse_epsilon(eps2).cost(dpdt::parse_decimal_or_rational(delta2));
  dpdt::CostComparison verdict =
      dpdt::compare_variants(first, second, consequence_count);
  emit(dpdt::json{{"verdict", dpdt::to_string(verdict)},
                  {"condition", "first cheaper iff e^eps - e^eps' < |C| (delta' - delta)"},
                  {"c", consequence_count}});
  return kOk;
}

int run_reproduce(const std::string& scenario, const std::string& eps,
                  std::size_t n, const std::string& delta) {
  dpdt::ScenarioVerdict verdict;
  if (scenario == "hcua") {
    verdict = dpdt::run_hcua(dpdt::parse_epsilon(eps.empty() ? "ln(2)" : eps)
                                 .exact_e_eps("reproduce hcua"));
  } else if (scenario == "laplace-optout") {
    dpdt::EpsilonParam p = dpdt::parse_epsilon(eps.empty() ? "1" : eps);
    if (p.exact_exp && p.value != 1)
      throw std::invalid_argument("laplace-optout takes eps as a plain rational");
    verdict = dpdt::run_laplace_optout(n, p.exact_exp ? dpdt::Rational(0) : p.value);
  } else if (scenario == "unlimited-stakes") {
    dpdt::EpsilonParam p = dpdt::parse_epsilon(eps.empty() ? "1" : eps);
    if (p.exact_exp && p.value != 1)
      throw std::invalid_argument("unlimited-stakes takes eps as a plain rational");
    verdict = dpdt::run_unlimited_stakes(n, p.exact_exp ? dpdt::Rational(0) : p.value);
  } else if (scenario == "maimonides") {
    verdict = dpdt::run_maimonides(
        dpdt::parse_epsilon(eps.empty() ? "ln(2)" : eps).exact_e_eps("reproduce maimonides"),
        delta.empty() ? dpdt::Rational(1, 20) : dpdt::parse_decimal_or_rational(delta));
  } else {
    throw CLI::ValidationError("scenario",
                               "unknown scenario '" + scenario + "'");
  }
  emit(dpdt::verdict_to_json(verdict));
  return verdict.all_pass() ? kOk : kVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dpdt: participant-side analysis of differentially private survey "
      "mechanisms (exact privacy audits, expected-utility bounds, "
      "participation and compensation checks)"};
  app.require_subcommand(1);

  auto* audit = app.add_subcommand(
      "audit", "Audit a finite mechanism: tightest pure epsilon and the "
               "tight delta(eps) curve");
  std::string mechanism_path, curve_max = "8", check_eps, check_delta;
  std::size_t curve_points = 9;
  audit->add_option("--mechanism", mechanism_path, "Mechanism JSON file")
      ->required();
  audit->add_option("--curve-points", curve_points, "Delta-curve sample count");
  audit->add_option("--curve-max-eeps", curve_max,
                    "Top of the e^eps sampling range when the tightest "
                    "epsilon is infinite");
  audit->add_option("--check-eps", check_eps,
                    "Also verify (eps, delta)-privacy; eps as ln(p/q)");
  audit->add_option("--check-delta", check_delta, "Delta for --check-eps");

  auto* bounds = app.add_subcommand(
      "bounds", "Worst-case expected-utility difference bound for a scenario");
  std::string bounds_scenario;
  bounds->add_option("--scenario", bounds_scenario, "Scenario JSON file")->required();

  auto* participation = app.add_subcommand(
      "participation",
      "Voluntary-participation check and exact minimum compensation");
  std::string participation_scenario;
  participation->add_option("--scenario", participation_scenario, "Scenario JSON file")
      ->required();

  auto* compare = app.add_subcommand(
      "compare", "Compare two privacy variants by worst-case participation cost");
  std::string eps1, delta1 = "0", eps2, delta2 = "0";
  std::size_t consequence_count = 2;
  compare->add_option("--eps", eps1, "First eps: ln(p/q) or a plain rational")
      ->required();
  compare->add_option("--delta", delta1, "First delta");
  compare->add_option("--eps2", eps2, "Second eps")->required();
  compare->add_option("--delta2", delta2, "Second delta");
  compare->add_option("--c", consequence_count, "Consequence-set size |C|")
      ->required();

  auto* reproduce = app.add_subcommand(
      "reproduce", "Run a packaged scenario and report its claims");
  std::string scenario_name, rep_eps, rep_delta;
  std::size_t rep_n = 3;
  reproduce
      ->add_option("scenario", scenario_name,
                   "hcua | laplace-optout | unlimited-stakes | maimonides")
      ->required();
  reproduce->add_option("--eps", rep_eps,
                        "Epsilon: ln(p/q) for hcua/maimonides, plain rational "
                        "for the laplace scenarios");
  reproduce->add_option("--n", rep_n, "Agent count for the laplace scenarios");
  reproduce->add_option("--delta", rep_delta, "Delta for maimonides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int cli_code = app.exit(e);
    return cli_code == 0 ? kOk : kUsageError;
  }

  try {
    if (*audit)
      return run_audit(mechanism_path, curve_points, curve_max, check_eps,
                       check_delta);
    if (*bounds) return run_bounds(bounds_scenario);
    if (*participation) return run_participation(participation_scenario);
    if (*compare) return run_compare(eps1, delta1, eps2, delta2, consequence_count);
    if (*reproduce) return run_reproduce(scenario_name, rep_eps, rep_n, rep_delta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kUsageError;
  }
  return kUsageError;
}
