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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpdt/bounds.hpp"
#include "dpdt/exp_sum.hpp"
#include "dpdt/hyperreal.hpp"
#include "dpdt/laplace.hpp"
#include "dpdt/mechanism.hpp"
#include "dpdt/privacy_audit.hpp"
#include "dpdt/utility.hpp"

namespace dpdt {

// --- Voluntary participation, finite-table path ---------------------------

struct CandidateGap {
  Symbol response;
  Hyperreal max_gap;  // worst-case EU(opt-out) - EU(response) over environments
  InputTuple worst_environment;
};

// Outcome of the voluntary-participation check for one agent: satisfied iff
// some non-opt-out response is weakly better than opting out in every
// environment, i.e. the best candidate's worst-case gap is <= 0.
struct ParticipationReport {
  bool satisfied = false;
  std::optional<Symbol> best_response;
  InputTuple worst_environment;
  Hyperreal gap;
  std::vector<CandidateGap> candidates;
};

// Exhaustive scan of responses and environments. The opt-out symbol must be
// in agent j's alphabet and at least one other response must exist.
inline ParticipationReport check_participation(const TableMechanism& m,
                                               const PostProcessor& f,
                                               const UtilityFunction& u,
                                               std::size_t j) {
  const InputSpace& space = m.space();
  if (!space.has_opt_out(j))
    throw std::invalid_argument("agent has no opt-out symbol");
  auto environments = space.environments(j);
  std::vector<Hyperreal> opt_out_eu;
  opt_out_eu.reserve(environments.size());
  for (const auto& env : environments)
    opt_out_eu.push_back(
        expected_utility(u, m, f, space.with_response(j, kOptOut, env)));

  ParticipationReport report;
  for (const Symbol& a : space.alphabet(j)) {
    if (a == kOptOut) continue;
    CandidateGap cg;
    cg.response = a;
    bool first = true;
    for (std::size_t e = 0; e < environments.size(); ++e) {
      Hyperreal gap = opt_out_eu[e] -
                      expected_utility(u, m, f, space.with_response(j, a, environments[e]));
      if (first || gap > cg.max_gap) {
        cg.max_gap = gap;
        cg.worst_environment = environments[e];
        first = false;
      }
    }
    report.candidates.push_back(cg);
    if (!report.best_response || cg.max_gap < report.gap) {
      report.best_response = a;
      report.gap = cg.max_gap;
      report.worst_environment = cg.worst_environment;
    }
  }
  if (!report.best_response)
    throw std::invalid_argument("agent has no response besides opt-out");
  report.satisfied = report.gap <= Hyperreal(0);
  return report;
}

// --- Voluntary participation, threshold-Laplace path ----------------------

// Expected-utility gap of the threshold-Laplace survey in factored form:
//   value = utility_span * probability_delta
// where utility_span = u("1") - u("0") is exact hyperreal and
// probability_delta is an exact exponential sum of threshold probabilities.
// Keeping the factors separate makes signs and classifications exact even
// though the probability factor is irrational.
struct LaplaceGap {
  Hyperreal utility_span;
  ExpSum probability_delta;

  bool is_zero() const {
    return utility_span.is_zero() || probability_delta.is_zero();
  }
  int sign() const {
    if (is_zero()) return 0;
    int span_sign = utility_span > Hyperreal(0) ? 1 : -1;
    return span_sign * probability_delta.sign();
  }
  HyperrealClass classification() const {
    if (is_zero()) return HyperrealClass::Zero;
    HyperrealClass span = utility_span.classify();
    if (probability_delta.sign() > 0) return span;
    switch (span) {
      case HyperrealClass::PositiveUnlimited: return HyperrealClass::NegativeUnlimited;
      case HyperrealClass::NegativeUnlimited: return HyperrealClass::PositiveUnlimited;
      default: return span;  // limited/infinitesimal classes are sign-symmetric
    }
  }
  // Normal form when the span is a single monomial c*w^k: the pair
  // (k, c*probability_delta), i.e. the gap written as w^k times an exact
  // real expression.
  std::optional<std::pair<int, ExpSum>> as_power_of_omega() const {
    if (is_zero()) return std::make_pair(0, ExpSum());
    if (utility_span.terms().size() != 1) return std::nullopt;
    const auto& [k, c] = *utility_span.terms().begin();
    return std::make_pair(k, probability_delta.scaled(c));
  }
  std::string to_string() const {
    if (is_zero()) return "0";
    return "(" + utility_span.to_string() + ") * (" +
           probability_delta.to_string() + ")";
  }
};

struct LaplaceCandidateGap {
  Symbol response;
  LaplaceGap max_gap;
  InputTuple worst_environment;
};

struct LaplaceParticipationReport {
  bool satisfied = false;
  std::optional<Symbol> best_response;
  InputTuple worst_environment;
  LaplaceGap gap;
  std::vector<LaplaceCandidateGap> candidates;
};

// Participation check against the threshold-Laplace survey. The utility is
// over the binary threshold consequences {"0","1"}; comparisons across
// environments reduce to exact comparisons of the probability factor, with
// the direction set by the sign of the utility span.
inline LaplaceParticipationReport check_participation(
    const ThresholdLaplaceMechanism& m, const UtilityFunction& u,
    std::size_t j) {
  const InputSpace& space = m.space();
  if (!space.has_opt_out(j))
    throw std::invalid_argument("agent has no opt-out symbol");
  if (!u.defined_on(m.consequences()))
    throw std::invalid_argument("utility not defined on threshold consequences");
  Hyperreal span = u.at("1") - u.at("0");
  int span_sign = span.is_zero() ? 0 : (span > Hyperreal(0) ? 1 : -1);

  auto environments = space.environments(j);
  std::vector<ExpSum> opt_out_p;
  opt_out_p.reserve(environments.size());
  for (const auto& env : environments)
    opt_out_p.push_back(
        m.threshold_probability(space.with_response(j, kOptOut, env)));

  LaplaceParticipationReport report;
  std::optional<ExpSum> best_delta;
  for (const Symbol& a : space.alphabet(j)) {
    if (a == kOptOut) continue;
    LaplaceCandidateGap cg;
    cg.response = a;
    // Worst environment maximizes span * (p(opt-out) - p(a)): largest delta
    // for positive span, smallest for negative; any environment ties when
    // the span is zero.
    std::optional<ExpSum> worst;
    for (std::size_t e = 0; e < environments.size(); ++e) {
      ExpSum delta =
          opt_out_p[e] - m.threshold_probability(space.with_response(j, a, environments[e]));
      bool take = false;
      if (!worst) {
        take = true;
      } else if (span_sign > 0) {
        take = delta.compare(*worst) > 0;
      } else if (span_sign < 0) {
        take = delta.compare(*worst) < 0;
      }
      if (take) {
        worst = delta;
        cg.worst_environment = environments[e];
      }
    }
    cg.max_gap = {span, span_sign == 0 ? ExpSum() : *worst};
    report.candidates.push_back(cg);
    bool take_candidate = false;
    if (!report.best_response) {
      take_candidate = true;
    } else if (span_sign > 0) {
      take_candidate = worst->compare(*best_delta) < 0;
    } else if (span_sign < 0) {
      take_candidate = worst->compare(*best_delta) > 0;
    }
    if (take_candidate) {
      report.best_response = a;
      report.gap = cg.max_gap;
      report.worst_environment = cg.worst_environment;
      best_delta = worst;
    }
  }
  if (!report.best_response)
    throw std::invalid_argument("agent has no response besides opt-out");
  report.satisfied = report.gap.sign() <= 0;
  return report;
}

// --- Compensation ----------------------------------------------------------

// Worst-case compensation sufficient to restore participation under an
// (eps, delta)-private mechanism:
//   r = (e^eps - 1 + delta*|C|) * (max_c u(c) - min_c u(c))
inline Hyperreal prop_compensation_bound(const Rational& e_eps,
                                         const Rational& delta,
                                         std::size_t consequence_count,
                                         const UtilityFunction& u) {
  return euclidean_bound(e_eps, delta, consequence_count, u);
}

enum class CompensationKind { NoneNeeded, Finite, Infeasible };

inline const char* to_string(CompensationKind k) {
  switch (k) {
    case CompensationKind::NoneNeeded: return "none-needed";
    case CompensationKind::Finite: return "finite";
    case CompensationKind::Infeasible: return "infeasible";
  }
  return "?";
}

struct CompensationResult {
  CompensationKind kind = CompensationKind::NoneNeeded;
  Hyperreal amount;        // exact minimum, 0 when none needed
  Hyperreal bound;         // the analytic worst-case amount
  Rational bound_e_eps = 1;  // parameters the bound was evaluated at
  Rational bound_delta = 0;
  ParticipationReport participation;
};

// Exact minimum compensation: r* = max(0, min over responses of the
// worst-case gap). The analytic bound is evaluated at the audited
// parameters: the tightest pure epsilon when finite (where the tight delta
// is zero), otherwise eps = 0 with its tight delta.
inline CompensationResult exact_min_compensation(const TableMechanism& m,
                                                 const PostProcessor& f,
                                                 const UtilityFunction& u,
                                                 std::size_t j) {
  CompensationResult result;
  result.participation = check_participation(m, f, u, j);
  Hyperreal r_star = result.participation.gap;
  if (r_star < Hyperreal(0)) r_star = Hyperreal(0);
  result.amount = r_star;
  if (r_star.is_zero()) {
    result.kind = CompensationKind::NoneNeeded;
  } else if (r_star.classify() == HyperrealClass::PositiveUnlimited) {
    result.kind = CompensationKind::Infeasible;
  } else {
    result.kind = CompensationKind::Finite;
  }
  EpsilonAudit audit = tightest_epsilon(m);
  if (audit.infinite) {
    result.bound_e_eps = 1;
    result.bound_delta = tight_delta(m, 1).delta;
  } else {
    result.bound_e_eps = audit.e_eps;
    result.bound_delta = 0;
  }
  result.bound = prop_compensation_bound(result.bound_e_eps, result.bound_delta,
                                         f.consequences().size(), u);
  return result;
}

struct LaplaceCompensationResult {
  CompensationKind kind = CompensationKind::NoneNeeded;
  LaplaceGap amount;
  LaplaceGap bound;  // (e^eps - 1) * range, exact: span = range, factor = e^eps - 1
  LaplaceParticipationReport participation;
};

// Threshold-Laplace variant. The mechanism is pure eps-DP, so the analytic
// bound is (e^eps - 1) * (max u - min u), kept in factored exact form.
inline LaplaceCompensationResult exact_min_compensation(
    const ThresholdLaplaceMechanism& m, const UtilityFunction& u,
    std::size_t j) {
  LaplaceCompensationResult result;
  result.participation = check_participation(m, u, j);
  LaplaceGap gap = result.participation.gap;
  if (gap.sign() <= 0) {
    result.kind = CompensationKind::NoneNeeded;
    result.amount = LaplaceGap{Hyperreal(0), ExpSum()};
  } else {
    result.amount = gap;
    result.kind = gap.classification() == HyperrealClass::PositiveUnlimited
                      ? CompensationKind::Infeasible
                      : CompensationKind::Finite;
  }
  result.bound.utility_span = u.range_span();
  result.bound.probability_delta =
      ExpSum::exp_term(1, m.eps()) - ExpSum(Rational(1));
  return result;
}

// --- Cost comparison of privacy variants -----------------------------------

// e^eps as an exact exponential expression: either a rational value
// (eps = ln of a rational) or the formal term e^{eps} for rational eps.
struct PrivacyCost {
  ExpSum e_eps;
  Rational delta;

  static PrivacyCost from_exact_e_eps(const Rational& e_eps, const Rational& delta) {
    if (e_eps < 1) throw std::invalid_argument("e^eps must be >= 1");
    check_delta(delta);
    return {ExpSum(e_eps), delta};
  }
  static PrivacyCost from_eps(const Rational& eps, const Rational& delta) {
    if (eps < 0) throw std::invalid_argument("eps must be >= 0");
    check_delta(delta);
    return {ExpSum::exp_term(1, eps), delta};
  }

 private:
  static void check_delta(const Rational& d) {
    if (d < 0 || d > 1) throw std::invalid_argument("delta in [0,1]");
  }
};

enum class CostComparison { FirstCheaper, SecondCheaper, Equal };

inline const char* to_string(CostComparison c) {
  switch (c) {
    case CostComparison::FirstCheaper: return "FirstCheaper";
    case CostComparison::SecondCheaper: return "SecondCheaper";
    case CostComparison::Equal: return "Equal";
  }
  return "?";
}

// Which variant induces participation more cheaply under the worst-case
// compensation scheme: first is cheaper iff
//   e^eps - e^eps' < |C| * (delta' - delta)
// decided exactly (rational forms compare directly; transcendental forms
// separate by certified enclosures).
inline CostComparison compare_variants(const PrivacyCost& first,
                                       const PrivacyCost& second,
                                       std::size_t consequence_count) {
  if (consequence_count < 1) throw std::invalid_argument("|C| must be >= 1");
  ExpSum lhs = first.e_eps - second.e_eps;
  ExpSum rhs(Rational(static_cast<unsigned>(consequence_count)) *
             (second.delta - first.delta));
  switch ((lhs - rhs).sign()) {
    case -1: return CostComparison::FirstCheaper;
    case 1: return CostComparison::SecondCheaper;
    default: return CostComparison::Equal;
  }
}

// --- Minimal responsiveness -------------------------------------------------

// A post-processed mechanism is minimally responsive when every agent has
// two responses and a consequence whose probability differs between them in
// every environment.
inline bool is_minimally_responsive(const TableMechanism& m,
                                    const PostProcessor& f) {
  TableMechanism composed = compose(m, f);
  const InputSpace& space = composed.space();
  for (std::size_t j = 0; j < space.agent_count(); ++j) {
    const auto& alphabet = space.alphabet(j);
    auto environments = space.environments(j);
    bool agent_ok = false;
    for (std::size_t ai = 0; ai < alphabet.size() && !agent_ok; ++ai) {
      for (std::size_t bi = ai + 1; bi < alphabet.size() && !agent_ok; ++bi) {
        for (std::size_t c = 0; c < composed.outputs().size() && !agent_ok; ++c) {
          bool differs_everywhere = true;
          for (const auto& env : environments) {
            Rational pa = composed.probability(
                space.with_response(j, alphabet[ai], env), c);
            Rational pb = composed.probability(
                space.with_response(j, alphabet[bi], env), c);
            if (pa == pb) {
              differs_everywhere = false;
              break;
            }
          }
          agent_ok = differs_everywhere;
        }
      }
    }
    if (!agent_ok) return false;
  }
  return true;
}

}  // namespace dpdt
