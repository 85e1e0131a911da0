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

#include <string>
#include <vector>

#include "dpdt/bounds.hpp"
#include "dpdt/laplace.hpp"
#include "dpdt/mechanism.hpp"
#include "dpdt/participation.hpp"
#include "dpdt/privacy_audit.hpp"
#include "dpdt/utility.hpp"

namespace dpdt {

// One checked statement of a packaged scenario, with the expected and
// computed values rendered for the report.
struct ScenarioClaim {
  std::string description;
  std::string expected;
  std::string computed;
  bool pass = false;
};

struct ScenarioVerdict {
  std::string name;
  std::vector<ScenarioClaim> claims;

  bool all_pass() const {
    for (const auto& c : claims)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {
inline void add_claim(ScenarioVerdict& v, std::string description,
                      std::string expected, std::string computed, bool pass) {
  v.claims.push_back({std::move(description), std::move(expected),
                      std::move(computed), pass});
}
}  // namespace detail

// Noisy-count survey audit: the mechanism is exactly eps-private, the
// ratio-scale bound holds for the nonnegative utility v = {n:2, g:0}, and
// the same bound fails for the sign-changing u = {n:1, g:-1} even though v
// and u are affine images of one another. `e_eps` is e^eps as an exact
// rational (> 1).
inline ScenarioVerdict run_hcua(const Rational& e_eps = 2) {
  if (e_eps <= 1) throw std::invalid_argument("e^eps must exceed 1");
  ScenarioVerdict verdict{"hcua", {}};
  TableMechanism m = noisy_count_mechanism(e_eps);
  PostProcessor f = grief_if_nonzero_postprocessor();
  UtilityFunction v({{"n", Hyperreal(2)}, {"g", Hyperreal(0)}});
  UtilityFunction u({{"n", Hyperreal(1)}, {"g", Hyperreal(-1)}});

  EpsilonAudit audit = tightest_epsilon(m);
  detail::add_claim(verdict, "audited tightest pure epsilon equals the nominal value",
                    "e^eps = " + to_string(e_eps),
                    audit.infinite ? "infinite" : "e^eps = " + to_string(audit.e_eps),
                    !audit.infinite && audit.e_eps == e_eps);

  BoundReport ratio_v = ratio_bound_scan(m, f, v, e_eps);
  detail::add_claim(verdict,
                    "ratio-scale bound holds everywhere for v = {n:2, g:0}",
                    "holds", ratio_v.holds ? "holds" : "violated", ratio_v.holds);

  // Formula values for the sign-changing utility at the pair of worlds
  // (suspect, other) = (1,1) vs (1,0): EU(1,1) = phi(e - e^2 - 1) and
  // e^eps * EU(1,0) = e * phi(1 - e^2 - e), phi = (1 + e + e^2)^{-1}.
  Rational e1 = e_eps, e2 = e_eps * e_eps;
  Rational phi = 1 / (1 + e1 + e2);
  Rational lhs_formula = phi * (e1 - e2 - 1);
  Rational rhs_formula = e1 * phi * (1 - e2 - e1);
  Hyperreal lhs = expected_utility(u, m, f, {"1", "1"});
  Hyperreal rhs = Hyperreal(e_eps) * expected_utility(u, m, f, {"1", "0"});
  bool pass = lhs == Hyperreal(lhs_formula) && rhs == Hyperreal(rhs_formula) &&
              lhs > rhs;
  detail::add_claim(
      verdict,
      "ratio-scale inequality fails for u = {n:1, g:-1} at worlds (1,1) vs (1,0)",
      "EU(1,1) = " + to_string(lhs_formula) + " > e^eps*EU(1,0) = " +
          to_string(rhs_formula),
      "EU(1,1) = " + lhs.to_string() + ", e^eps*EU(1,0) = " + rhs.to_string(),
      pass);
  return verdict;
}

// Laplace-noised count with the below-threshold consequence: joining the
// survey strictly lowers the chance of the desirable consequence in every
// environment, so participation is violated for every response.
inline ScenarioVerdict run_laplace_optout(std::size_t n = 3,
                                          const Rational& eps = 1) {
  if (n < 2) throw std::invalid_argument("need at least 2 agents");
  ScenarioVerdict verdict{"laplace-optout", {}};
  auto m = ThresholdLaplaceMechanism::counting_survey(
      n, eps, Rational(static_cast<unsigned>(n - 1)),
      ThresholdLaplaceMechanism::Direction::AtMost);
  UtilityFunction u({{"0", Hyperreal(0)}, {"1", Hyperreal(1)}});

  LaplaceParticipationReport report = check_participation(m, u, 0);
  bool every_candidate_loses = true;
  for (const auto& c : report.candidates)
    if (c.max_gap.sign() <= 0) every_candidate_loses = false;
  detail::add_claim(verdict,
                    "participation is violated: every response loses to opting out",
                    "violated for every response",
                    report.satisfied ? "satisfied" : "violated",
                    !report.satisfied && every_candidate_loses);

  InputTuple all_ones(n - 1, "1");
  ExpSum eu_opt_out = m.threshold_probability(
      m.space().with_response(0, kOptOut, all_ones));
  detail::add_claim(verdict, "EU(opt-out) in the all-ones environment is 1/2",
                    "1/2", eu_opt_out.to_string(),
                    eu_opt_out == ExpSum(Rational(1, 2)));

  ExpSum eu_one =
      m.threshold_probability(m.space().with_response(0, "1", all_ones));
  ExpSum expected_one = ExpSum::exp_term(Rational(1, 2), -eps / 2);
  detail::add_claim(verdict,
                    "EU(1) in the all-ones environment is exp(-eps/2)/2, below 1/2",
                    expected_one.to_string(), eu_one.to_string(),
                    eu_one == expected_one && (eu_opt_out - eu_one).sign() > 0);

  ExpSum eu_two =
      m.threshold_probability(m.space().with_response(0, "2", all_ones));
  ExpSum expected_two = ExpSum::exp_term(Rational(1, 2), -eps);
  detail::add_claim(verdict, "EU(2) is exp(-eps)/2, below EU(1)",
                    expected_two.to_string(), eu_two.to_string(),
                    eu_two == expected_two && (eu_one - eu_two).sign() > 0);
  return verdict;
}

// Same survey observed through the above-threshold event, with an unlimited
// disutility on that consequence: every response raises its probability by
// a strictly positive real amount, so the participation gap is a positive
// unlimited and no real compensation can close it.
inline ScenarioVerdict run_unlimited_stakes(std::size_t n = 3,
                                            const Rational& eps = 1) {
  if (n < 2) throw std::invalid_argument("need at least 2 agents");
  ScenarioVerdict verdict{"unlimited-stakes", {}};
  auto m = ThresholdLaplaceMechanism::counting_survey(
      n, eps, Rational(static_cast<unsigned>(n)),
      ThresholdLaplaceMechanism::Direction::AtLeast);
  UtilityFunction u({{"0", Hyperreal(0)}, {"1", -Hyperreal::omega()}});

  LaplaceCompensationResult comp = exact_min_compensation(m, u, 0);
  detail::add_claim(verdict, "exact minimum compensation is infeasible",
                    "infeasible", to_string(comp.kind),
                    comp.kind == CompensationKind::Infeasible);

  for (const auto& candidate : comp.participation.candidates) {
    Rational a = parse_rational(candidate.response);
    ExpSum expected = laplace_cdf(eps / 2) - laplace_cdf((1 - a) * eps / 2);
    auto canonical = candidate.max_gap.as_power_of_omega();
    bool pass = canonical.has_value() && canonical->first == 1 &&
                canonical->second == expected &&
                candidate.max_gap.classification() ==
                    HyperrealClass::PositiveUnlimited;
    detail::add_claim(
        verdict,
        "gap for response " + candidate.response +
            " is w * (CDF(eps/2) - CDF((1-a)eps/2)), a positive unlimited",
        "w^1 * (" + expected.to_string() + ")",
        candidate.max_gap.to_string(), pass);
  }

  UtilityFunction bounded({{"0", Hyperreal(0)}, {"1", Hyperreal(-1000000)}});
  LaplaceCompensationResult comp_bounded = exact_min_compensation(m, bounded, 0);
  detail::add_claim(verdict,
                    "replacing the unlimited loss by -10^6 makes compensation finite",
                    "finite", to_string(comp_bounded.kind),
                    comp_bounded.kind == CompensationKind::Finite);
  return verdict;
}

// Certainty-averse judge: under the pure-eps noisy count no output ever
// proves a report, so a judge who punishes only on proof never punishes and
// participation costs nothing, while a mechanism that leaks the report with
// probability delta admits a proof event and an unlimited participation gap.
inline ScenarioVerdict run_maimonides(const Rational& e_eps = 2,
                                      const Rational& delta = Rational(1, 20)) {
  if (e_eps <= 1) throw std::invalid_argument("e^eps must exceed 1");
  if (delta <= 0 || delta > 1) throw std::invalid_argument("delta in (0,1]");
  ScenarioVerdict verdict{"maimonides", {}};
  UtilityFunction u({{"g", -Hyperreal::omega()}, {"n", Hyperreal(0)}});

  TableMechanism count = noisy_count_mechanism(e_eps);
  bool responsive =
      is_minimally_responsive(count, PostProcessor::identity(count.outputs()));
  detail::add_claim(verdict, "noisy-count mechanism is minimally responsive",
                    "true", responsive ? "true" : "false", responsive);

  PostProcessor grief = grief_if_nonzero_postprocessor();
  bool open_interval = true;
  for (const auto& x : count.space().inputs())
    for (const Rational& p : consequence_distribution(count, grief, x))
      if (p <= 0 || p >= 1) open_interval = false;
  detail::add_claim(verdict,
                    "every grief/no-grief probability lies strictly inside (0,1)",
                    "all in (0,1)", open_interval ? "all in (0,1)" : "boundary hit",
                    open_interval);

  TableMechanism reveal = reveal_with_probability_mechanism(delta);
  DeltaAudit delta_audit = tight_delta(reveal, 1);
  EpsilonAudit eps_audit = tightest_epsilon(reveal);
  detail::add_claim(verdict,
                    "reveal mechanism audits to tight delta(eps=0) = delta and infinite pure epsilon",
                    "delta = " + to_string(delta) + ", epsilon infinite",
                    "delta = " + to_string(delta_audit.delta) +
                        (eps_audit.infinite ? ", epsilon infinite" : ", epsilon finite"),
                    delta_audit.delta == delta && eps_audit.infinite);

  PostProcessor proof = certainty_postprocessor(reveal, 0, {"1"});
  bool reveal_responsive = is_minimally_responsive(reveal, proof);
  bool conviction_possible =
      consequence_distribution(reveal, proof, {"1"})[0] > 0;
  detail::add_claim(verdict,
                    "reveal mechanism is minimally responsive and admits a proof event",
                    "responsive with conviction probability delta",
                    (reveal_responsive ? "responsive" : "unresponsive") +
                        std::string(conviction_possible ? ", conviction possible"
                                                        : ", conviction impossible"),
                    reveal_responsive && conviction_possible);

  CompensationResult reveal_comp = exact_min_compensation(reveal, proof, u, 0);
  detail::add_claim(verdict,
                    "participation against the reveal mechanism is infeasible",
                    "infeasible", to_string(reveal_comp.kind),
                    reveal_comp.kind == CompensationKind::Infeasible &&
                        reveal_comp.amount == Hyperreal(delta) * Hyperreal::omega());

  TableMechanism count_opt = noisy_count_mechanism(e_eps, /*with_opt_out=*/true);
  PostProcessor judge = certainty_postprocessor(count_opt, 1, {"1"});
  bool never_convicts = true;
  for (const auto& [o, row] : judge.rows())
    if (row[0] != 0) never_convicts = false;  // consequence 0 is "g"
  ParticipationReport pure = check_participation(count_opt, judge, u, 1);
  detail::add_claim(verdict,
                    "under the pure-eps count the judge never convicts and the participation gap is exactly 0",
                    "no conviction event; gap = 0",
                    std::string(never_convicts ? "no conviction event" : "conviction event exists") +
                        "; gap = " + pure.gap.to_string(),
                    never_convicts && pure.satisfied && pure.gap.is_zero());
  return verdict;
}

}  // namespace dpdt
