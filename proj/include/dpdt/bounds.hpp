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
#include <vector>

#include "dpdt/hyperreal.hpp"
#include "dpdt/mechanism.hpp"
#include "dpdt/privacy_audit.hpp"
#include "dpdt/utility.hpp"

namespace dpdt {

struct BoundWitness {
  std::size_t agent = 0;
  Symbol response;
  Symbol response_alt;
  InputTuple environment;
};

// One checked inequality: holds iff lhs <= rhs under the hyperreal order.
struct BoundReport {
  Hyperreal lhs;
  Hyperreal rhs;
  bool holds = false;
  BoundWitness witness;
};

// Ratio-scale check at one neighboring pair: for nonnegative real-valued u
// and a mechanism that is pure eps-DP with e^eps supplied exactly,
//   EU(x_j, env) <= e^eps * EU(x'_j, env).
inline BoundReport ratio_bound_check(const TableMechanism& m,
                                     const PostProcessor& f,
                                     const UtilityFunction& u, std::size_t j,
                                     const Symbol& response,
                                     const Symbol& response_alt,
                                     const InputTuple& environment,
                                     const Rational& e_eps) {
  if (!u.nonnegative_real())
    throw std::invalid_argument(
        "ratio-scale bound requires nonnegative real-valued utilities");
  BoundReport r;
  r.witness = {j, response, response_alt, environment};
  r.lhs = expected_utility(u, m, f, m.space().with_response(j, response, environment));
  r.rhs = Hyperreal(e_eps) *
          expected_utility(u, m, f, m.space().with_response(j, response_alt, environment));
  r.holds = r.lhs <= r.rhs;
  return r;
}

// Convenience form that audits the mechanism for its tightest pure epsilon.
inline BoundReport ratio_bound_check(const TableMechanism& m,
                                     const PostProcessor& f,
                                     const UtilityFunction& u, std::size_t j,
                                     const Symbol& response,
                                     const Symbol& response_alt,
                                     const InputTuple& environment) {
  EpsilonAudit audit = tightest_epsilon(m);
  if (audit.infinite)
    throw std::invalid_argument("mechanism is not pure eps-DP (infinite epsilon)");
  return ratio_bound_check(m, f, u, j, response, response_alt, environment,
                           audit.e_eps);
}

// Scans every agent, response pair, and environment; returns the report of
// the pair with the largest lhs - rhs (the worst case), so `holds` answers
// whether the ratio bound holds everywhere.
inline BoundReport ratio_bound_scan(const TableMechanism& m,
                                    const PostProcessor& f,
                                    const UtilityFunction& u,
                                    const Rational& e_eps) {
  std::optional<BoundReport> worst;
  const InputSpace& space = m.space();
  for (std::size_t j = 0; j < space.agent_count(); ++j) {
    for (const auto& env : space.environments(j)) {
      for (const Symbol& a : space.alphabet(j)) {
        for (const Symbol& b : space.alphabet(j)) {
          if (a == b) continue;
          BoundReport r = ratio_bound_check(m, f, u, j, a, b, env, e_eps);
          if (!worst || r.lhs - r.rhs > worst->lhs - worst->rhs) worst = r;
        }
      }
    }
  }
  if (!worst) throw std::invalid_argument("empty scan");
  return *worst;
}

// The stored witness that the ratio-scale reading breaks once utilities may
// change sign: the noisy-count mechanism at e^eps = 2 with the grief/no-grief
// consequences and utilities {n: 1, g: -1}, compared across the suspect
// reporting "0" versus "1" in the environment where the other member
// reports "1". Returns holds = false with lhs = -3/7 and rhs = -10/7.
inline BoundReport ratio_violation_demo() {
  TableMechanism m = noisy_count_mechanism(Rational(2));
  PostProcessor f = grief_if_nonzero_postprocessor();
  UtilityFunction u(
      {{"n", Hyperreal(1)}, {"g", Hyperreal(-1)}});
  BoundReport r;
  r.witness = {1, "1", "0", {"1"}};
  r.lhs = expected_utility(u, m, f, {"1", "1"});
  r.rhs = Hyperreal(Rational(2)) * expected_utility(u, m, f, {"1", "0"});
  r.holds = r.lhs <= r.rhs;
  return r;
}

// Right-hand side of the worst-case expected-utility difference bound:
//   (e^eps - 1 + delta*|C|) * (max_c u(c) - min_c u(c))
// with e^eps supplied exactly.
inline Hyperreal euclidean_bound(const Rational& e_eps, const Rational& delta,
                                 std::size_t consequence_count,
                                 const UtilityFunction& u) {
  if (e_eps < 1) throw std::invalid_argument("e^eps must be >= 1");
  if (delta < 0 || delta > 1) throw std::invalid_argument("delta in [0,1]");
  Rational factor = e_eps - 1 + delta * Rational(static_cast<unsigned>(consequence_count));
  return Hyperreal(factor) * u.range_span();
}

// Checks the difference bound for agent j across every environment and
// response pair, reporting the largest |EU difference| found as lhs and the
// bound as rhs.
inline BoundReport euclidean_bound_check(const TableMechanism& m,
                                         const PostProcessor& f,
                                         const UtilityFunction& u,
                                         std::size_t j, const Rational& e_eps,
                                         const Rational& delta) {
  if (!u.defined_on(f.consequences()))
    throw std::invalid_argument("utility not defined on all consequences");
  const InputSpace& space = m.space();
  std::optional<BoundReport> worst;
  for (const auto& env : space.environments(j)) {
    const auto& alphabet = space.alphabet(j);
    for (std::size_t ai = 0; ai < alphabet.size(); ++ai) {
      Hyperreal eu_a =
          expected_utility(u, m, f, space.with_response(j, alphabet[ai], env));
      for (std::size_t bi = ai + 1; bi < alphabet.size(); ++bi) {
        Hyperreal eu_b =
            expected_utility(u, m, f, space.with_response(j, alphabet[bi], env));
        Hyperreal gap = eu_a - eu_b;
        if (gap < Hyperreal(0)) gap = -gap;
        if (!worst || gap > worst->lhs) {
          BoundReport r;
          r.lhs = gap;
          r.witness = {j, alphabet[ai], alphabet[bi], env};
          worst = r;
        }
      }
    }
  }
  if (!worst) throw std::invalid_argument("agent has fewer than two responses");
  worst->rhs = euclidean_bound(e_eps, delta, f.consequences().size(), u);
  worst->holds = worst->lhs <= worst->rhs;
  return *worst;
}

// Convenience form fed by the audit: the tightest pure epsilon when finite
// (where the tight delta is zero), otherwise eps = 0 with its tight delta.
// Either way the mechanism satisfies the parameters, and they are the
// tightest audited ones of their kind.
inline BoundReport euclidean_bound_check(const TableMechanism& m,
                                         const PostProcessor& f,
                                         const UtilityFunction& u,
                                         std::size_t j) {
  EpsilonAudit audit = tightest_epsilon(m);
  if (audit.infinite) return euclidean_bound_check(m, f, u, j, 1, tight_delta(m, 1).delta);
  return euclidean_bound_check(m, f, u, j, audit.e_eps,
                               tight_delta(m, audit.e_eps).delta);
}

}  // namespace dpdt
