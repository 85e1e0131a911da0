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

#include "dpdt/participation.hpp"

#include <gtest/gtest.h>

#include "dpdt/scenarios.hpp"
#include "oracles.hpp"

namespace dpdt {
namespace {

using Direction = ThresholdLaplaceMechanism::Direction;
using testing::random_post_processor;
using testing::random_real_utility;
using testing::random_table_mechanism;
using testing::RandomTableOptions;
using testing::Rng;

UtilityFunction indicator_utility() {
  return UtilityFunction({{"0", Hyperreal(0)}, {"1", Hyperreal(1)}});
}

TEST(Participation, LaplaceSurveyBelowThresholdIsViolated) {
  auto m = ThresholdLaplaceMechanism::counting_survey(3, 1, 2, Direction::AtMost);
  LaplaceParticipationReport report =
      check_participation(m, indicator_utility(), 0);
  EXPECT_FALSE(report.satisfied);
  // Every candidate strictly loses somewhere; the better of the two is "1".
  for (const auto& c : report.candidates) EXPECT_GT(c.max_gap.sign(), 0);
  EXPECT_EQ(*report.best_response, "1");
  // Its worst gap is CDF(0) - CDF(-1/2) = 1/2 - e^{-1/2}/2.
  EXPECT_EQ(report.gap.probability_delta,
            laplace_cdf(0) - laplace_cdf(Rational(-1, 2)));
  EXPECT_EQ(report.gap.utility_span, Hyperreal(1));
}

TEST(Participation, FlippedThresholdDirectionIsSatisfied) {
  auto m = ThresholdLaplaceMechanism::counting_survey(3, 1, 3, Direction::AtLeast);
  LaplaceParticipationReport report =
      check_participation(m, indicator_utility(), 0);
  EXPECT_TRUE(report.satisfied);
  // Reporting "2" raises the count the most, so it is the strict best
  // response; every candidate weakly beats opting out.
  EXPECT_EQ(*report.best_response, "2");
  EXPECT_LT(report.gap.sign(), 0);
  for (const auto& c : report.candidates) EXPECT_LE(c.max_gap.sign(), 0);
}

TEST(Participation, ConstantMechanismIsSatisfiedWithZeroGap) {
  InputSpace space = InputSpace::uniform(2, {kOptOut, "0", "1"});
  std::map<InputTuple, std::vector<Rational>> rows;
  for (const auto& x : space.inputs()) rows[x] = {Rational(1, 2), Rational(1, 2)};
  TableMechanism m(space, {"a", "b"}, rows);
  PostProcessor id = PostProcessor::identity(m.outputs());
  UtilityFunction u({{"a", Hyperreal(3)}, {"b", Hyperreal(-2)}});
  ParticipationReport report = check_participation(m, id, u, 0);
  EXPECT_TRUE(report.satisfied);
  EXPECT_TRUE(report.gap.is_zero());
  EXPECT_EQ(*report.best_response, "0");
}

TEST(Participation, RequiresAnOptOutSymbol) {
  TableMechanism m = noisy_count_mechanism(2);
  PostProcessor grief = grief_if_nonzero_postprocessor();
  UtilityFunction u({{"n", Hyperreal(1)}, {"g", Hyperreal(-1)}});
  EXPECT_THROW(check_participation(m, grief, u, 0), std::invalid_argument);
}

TEST(Compensation, FormulaValuesAndUnlimitedRanges) {
  UtilityFunction u({{"n", Hyperreal(1)}, {"g", Hyperreal(-1)}});
  EXPECT_EQ(prop_compensation_bound(2, 0, 2, u), Hyperreal(2));
  EXPECT_EQ(prop_compensation_bound(1, 0, 2, u), Hyperreal(0));
  UtilityFunction uw({{"n", Hyperreal(0)}, {"g", -Hyperreal::omega()}});
  EXPECT_EQ(prop_compensation_bound(2, 0, 2, uw).classify(),
            HyperrealClass::PositiveUnlimited);
}

TEST(Compensation, ExactMinimumOnTheBelowThresholdSurvey) {
  auto m = ThresholdLaplaceMechanism::counting_survey(3, 1, 2, Direction::AtMost);
  LaplaceCompensationResult comp =
      exact_min_compensation(m, indicator_utility(), 0);
  EXPECT_EQ(comp.kind, CompensationKind::Finite);
  // r* = 1/2 - e^{-1/2}/2 ~ 0.1967, below the bound e - 1 ~ 1.718.
  EXPECT_EQ(comp.amount.probability_delta,
            laplace_cdf(0) - laplace_cdf(Rational(-1, 2)));
  ExpSum r_star = comp.amount.probability_delta;  // span is the real 1
  EXPECT_EQ(comp.amount.utility_span, Hyperreal(1));
  ExpSum bound = comp.bound.probability_delta;  // range is the real 1
  EXPECT_EQ(comp.bound.utility_span, Hyperreal(1));
  EXPECT_LT((r_star - bound).sign(), 0);
}

TEST(Compensation, SatisfiedParticipationNeedsNothing) {
  auto m = ThresholdLaplaceMechanism::counting_survey(3, 1, 3, Direction::AtLeast);
  LaplaceCompensationResult comp =
      exact_min_compensation(m, indicator_utility(), 0);
  EXPECT_EQ(comp.kind, CompensationKind::NoneNeeded);
  EXPECT_TRUE(comp.amount.is_zero());
}

TEST(Compensation, UnlimitedStakesAreInfeasible) {
  auto m = ThresholdLaplaceMechanism::counting_survey(3, 1, 3, Direction::AtLeast);
  UtilityFunction uw({{"0", Hyperreal(0)}, {"1", -Hyperreal::omega()}});
  LaplaceCompensationResult comp = exact_min_compensation(m, uw, 0);
  EXPECT_EQ(comp.kind, CompensationKind::Infeasible);
  EXPECT_EQ(comp.amount.classification(), HyperrealClass::PositiveUnlimited);

  TableMechanism reveal = reveal_with_probability_mechanism(Rational(1, 20));
  PostProcessor proof = certainty_postprocessor(reveal, 0, {"1"});
  UtilityFunction ug({{"g", -Hyperreal::omega()}, {"n", Hyperreal(0)}});
  CompensationResult table_comp = exact_min_compensation(reveal, proof, ug, 0);
  EXPECT_EQ(table_comp.kind, CompensationKind::Infeasible);
  EXPECT_EQ(table_comp.amount,
            Hyperreal(Rational(1, 20)) * Hyperreal::omega());
  // The bound is evaluated at (eps = 0, tight delta) for this non-pure
  // mechanism and is unlimited as well.
  EXPECT_EQ(table_comp.bound_e_eps, Rational(1));
  EXPECT_EQ(table_comp.bound_delta, Rational(1, 20));
  EXPECT_EQ(table_comp.bound.classify(), HyperrealClass::PositiveUnlimited);
}

TEST(Compensation, PayingTheBoundRestoresParticipationOnRandomInstances) {
  Rng rng(61);
  int checked = 0;
  for (int i = 0; i < 120; ++i) {
    RandomTableOptions opt;
    opt.max_agents = 2;
    TableMechanism m = random_table_mechanism(rng, opt);
    PostProcessor f = random_post_processor(rng, m.outputs());
    UtilityFunction u = random_real_utility(rng, f.consequences());
    EpsilonAudit audit = tightest_epsilon(m);
    Rational e_eps = audit.infinite ? Rational(1) : audit.e_eps;
    Rational delta = tight_delta(m, e_eps).delta;
    Hyperreal r = prop_compensation_bound(e_eps, delta, f.consequences().size(), u);
    const InputSpace& space = m.space();
    for (std::size_t j = 0; j < space.agent_count(); ++j) {
      if (!space.has_opt_out(j)) continue;
      CompensationResult comp = exact_min_compensation(m, f, u, j);
      EXPECT_LE(comp.amount, comp.bound);
      for (const auto& env : space.environments(j)) {
        Hyperreal opt_out =
            expected_utility(u, m, f, space.with_response(j, kOptOut, env));
        for (const Symbol& a : space.alphabet(j)) {
          if (a == kOptOut) continue;
          Hyperreal eu =
              expected_utility(u, m, f, space.with_response(j, a, env));
          EXPECT_GE(eu + r, opt_out);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 500);
}

// Double-precision brute force over every candidate and environment, as an
// independent route to the exact comparator logic. Margins are safe: the
// CDF arguments move in steps of at least eps/(2*den), so distinct gaps are
// far apart relative to double error.
TEST(Participation, ThresholdVerdictsMatchANumericBruteForce) {
  Rng rng(73);
  std::uniform_int_distribution<std::size_t> agents(1, 3);
  std::uniform_int_distribution<int> eps_num(1, 4);
  std::uniform_int_distribution<int> thr(0, 6);
  std::uniform_int_distribution<int> dir(0, 1);
  std::uniform_int_distribution<int> util(-3, 3);
  for (int i = 0; i < 120; ++i) {
    std::size_t n = agents(rng);
    Rational eps(eps_num(rng), 2);
    auto direction = dir(rng) ? Direction::AtMost : Direction::AtLeast;
    auto m = ThresholdLaplaceMechanism::counting_survey(n, eps, thr(rng), direction);
    Rational u0(util(rng)), u1(util(rng));
    UtilityFunction u({{"0", Hyperreal(u0)}, {"1", Hyperreal(u1)}});

    LaplaceParticipationReport report = check_participation(m, u, 0);

    auto cdf = [](double w) {
      return w <= 0 ? 0.5 * std::exp(w) : 1 - 0.5 * std::exp(-w);
    };
    auto probability = [&](const InputTuple& x) {
      double w = to_double((m.threshold() - m.query(x)) * eps / 2);
      return direction == Direction::AtMost ? cdf(w) : cdf(-w);
    };
    double span = to_double(u1 - u0);
    const InputSpace& space = m.space();
    bool expect_satisfied = false;
    double best_gap = 0;
    bool have_best = false;
    for (const Symbol& a : space.alphabet(0)) {
      if (a == kOptOut) continue;
      double worst = -1e100;
      for (const auto& env : space.environments(0)) {
        double gap = span * (probability(space.with_response(0, kOptOut, env)) -
                             probability(space.with_response(0, a, env)));
        worst = std::max(worst, gap);
      }
      if (!have_best || worst < best_gap - 1e-12) {
        best_gap = worst;
        have_best = true;
      }
      if (worst <= 1e-12) expect_satisfied = true;
    }
    EXPECT_EQ(report.satisfied, expect_satisfied) << "instance " << i;
    double exact_gap = to_double(report.gap.utility_span.standard_part()) *
                       report.gap.probability_delta.to_double();
    EXPECT_NEAR(exact_gap, best_gap, 1e-9) << "instance " << i;
  }
}

TEST(CompareVariants, WorkedComparisons) {
  // eps = 0.1 against pure delta' = 0.1 with |C| = 2: 0.1 < ln(1.2).
  EXPECT_EQ(compare_variants(PrivacyCost::from_eps(Rational(1, 10), 0),
                             PrivacyCost::from_eps(0, Rational(1, 10)), 2),
            CostComparison::FirstCheaper);
  // eps = 0.25 flips the other way.
  EXPECT_EQ(compare_variants(PrivacyCost::from_eps(Rational(1, 4), 0),
                             PrivacyCost::from_eps(0, Rational(1, 10)), 2),
            CostComparison::SecondCheaper);
  PrivacyCost self = PrivacyCost::from_eps(Rational(1, 3), Rational(1, 8));
  EXPECT_EQ(compare_variants(self, self, 3), CostComparison::Equal);
  // Exact boundary: e^eps = 1 + delta'|C|.
  EXPECT_EQ(compare_variants(PrivacyCost::from_exact_e_eps(Rational(6, 5), 0),
                             PrivacyCost::from_eps(0, Rational(1, 10)), 2),
            CostComparison::Equal);
}

TEST(CompareVariants, MatchesTheThreeSpecialCaseConditions) {
  Rational eps_grid[] = {0, Rational(1, 10), Rational(1, 4), Rational(1, 2), 1};
  Rational delta_grid[] = {0, Rational(1, 100), Rational(1, 10), Rational(1, 4)};
  std::size_t c_grid[] = {1, 2, 5};
  for (const Rational& eps : eps_grid) {
    for (const Rational& eps_prime : eps_grid) {
      for (const Rational& delta : delta_grid) {
        for (const Rational& delta_prime : delta_grid) {
          for (std::size_t c : c_grid) {
            ExpSum c_term(Rational(static_cast<unsigned>(c)));
            // Pure eps vs (eps', delta'): e^eps - e^eps' < |C| delta'.
            CostComparison got = compare_variants(
                PrivacyCost::from_eps(eps, 0),
                PrivacyCost::from_eps(eps_prime, delta_prime), c);
            ExpSum cond = ExpSum::exp_term(1, eps) - ExpSum::exp_term(1, eps_prime) -
                          c_term.scaled(delta_prime);
            CostComparison want = cond.sign() < 0 ? CostComparison::FirstCheaper
                                 : cond.sign() > 0 ? CostComparison::SecondCheaper
                                                   : CostComparison::Equal;
            EXPECT_EQ(got, want);

            // Pure delta vs (eps', delta'): 1 - e^eps' < |C| (delta' - delta).
            got = compare_variants(PrivacyCost::from_eps(0, delta),
                                   PrivacyCost::from_eps(eps_prime, delta_prime), c);
            cond = ExpSum(Rational(1)) - ExpSum::exp_term(1, eps_prime) -
                   c_term.scaled(delta_prime - delta);
            want = cond.sign() < 0   ? CostComparison::FirstCheaper
                   : cond.sign() > 0 ? CostComparison::SecondCheaper
                                     : CostComparison::Equal;
            EXPECT_EQ(got, want);
          }
        }
      }
    }
  }
}

TEST(MinimalResponsiveness, KnownMechanisms) {
  InputSpace space = InputSpace::uniform(2, {"0", "1"});
  std::map<InputTuple, std::vector<Rational>> rows;
  for (const auto& x : space.inputs()) rows[x] = {Rational(1, 2), Rational(1, 2)};
  TableMechanism constant(space, {"a", "b"}, rows);
  EXPECT_FALSE(is_minimally_responsive(constant, PostProcessor::identity({"a", "b"})));

  TableMechanism m = noisy_count_mechanism(2);
  EXPECT_TRUE(is_minimally_responsive(m, PostProcessor::identity(m.outputs())));
  // Through the grief map the count-0 and count-1 rows agree on p0, so no
  // response pair separates in every environment.
  EXPECT_FALSE(is_minimally_responsive(m, grief_if_nonzero_postprocessor()));
}

TEST(MinimalResponsiveness, PureEpsResponsiveBinaryMechanismsAvoidCertainty) {
  Rng rng(67);
  int found = 0;
  for (int i = 0; i < 400 && found < 25; ++i) {
    RandomTableOptions opt;
    opt.max_agents = 2;
    opt.include_opt_out = false;
    TableMechanism m = random_table_mechanism(rng, opt);
    PostProcessor f = random_post_processor(rng, m.outputs(), 2, /*deterministic=*/true);
    if (f.consequences().size() != 2) continue;
    if (tightest_epsilon(m).infinite) continue;
    if (!is_minimally_responsive(m, f)) continue;
    ++found;
    for (const auto& x : m.space().inputs())
      for (const Rational& p : consequence_distribution(m, f, x)) {
        EXPECT_GT(p, Rational(0));
        EXPECT_LT(p, Rational(1));
      }
  }
  EXPECT_GE(found, 25);
}

}  // namespace
}  // namespace dpdt
