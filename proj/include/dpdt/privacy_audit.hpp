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

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dpdt/mechanism.hpp"
#include "dpdt/parallel.hpp"
#include "dpdt/rational.hpp"

namespace dpdt {

// Neighboring pair plus the output event that realizes an audited maximum.
struct AuditWitness {
  InputTuple x;
  InputTuple x_prime;
  std::vector<Symbol> outputs;
};

// Tightest pure epsilon of a finite mechanism, reported as the exact
// likelihood ratio e^eps (the log is taken only for display). Infinite when
// some output is reachable on one side of a neighboring pair but not the
// other.
struct EpsilonAudit {
  bool infinite = false;
  Rational e_eps = 1;  // meaningful when finite
  AuditWitness witness;

  double epsilon() const {
    if (infinite) return std::numeric_limits<double>::infinity();
    return std::log(to_double(e_eps));
  }
};

// Smallest valid delta at a given e^eps, with the surplus set realizing it.
struct DeltaAudit {
  Rational delta = 0;
  AuditWitness witness;
};

namespace detail {

// Ordered neighboring pairs (x, x'), in input enumeration order; for each x
// the neighbors come in agent-then-alphabet order.
inline std::vector<std::pair<InputTuple, InputTuple>> ordered_neighbor_pairs(
    const InputSpace& space) {
  std::vector<std::pair<InputTuple, InputTuple>> pairs;
  for (const auto& x : space.inputs())
    for (auto& y : neighbors(space, x)) pairs.emplace_back(x, std::move(y));
  return pairs;
}

}  // namespace detail

// Exhaustive pure-epsilon audit over all ordered neighboring pairs. For a
// finite output space, singleton events suffice: the ratio of two sums of
// probabilities is bounded by the largest per-output ratio.
inline EpsilonAudit tightest_epsilon(const TableMechanism& m) {
  auto pairs = detail::ordered_neighbor_pairs(m.space());
  struct Local {
    bool infinite = false;
    Rational ratio = 1;
    std::size_t pair_index = 0;
    std::size_t output = 0;
    bool found = false;
  };
  auto evaluate = [&](std::size_t i) {
    Local best;
    best.pair_index = i;
    const auto& [x, xp] = pairs[i];
    const auto& p = m.row(x);
    const auto& q = m.row(xp);
    for (std::size_t o = 0; o < p.size(); ++o) {
      if (p[o] == 0) continue;
      if (q[o] == 0) {
        if (!best.infinite) {
          best.infinite = true;
          best.output = o;
          best.found = true;
        }
        continue;
      }
      if (best.infinite) continue;
      Rational ratio = p[o] / q[o];
      if (!best.found || ratio > best.ratio) {
        best.ratio = ratio;
        best.output = o;
        best.found = true;
      }
    }
    return best;
  };
  auto better = [](const Local& a, const Local& b) {
    if (a.infinite != b.infinite) return a.infinite;
    if (a.infinite) return false;  // first infinite witness wins
    return a.ratio > b.ratio;
  };
  auto best = scan_reduce<Local>(pairs.size(), evaluate, better);
  EpsilonAudit audit;
  if (!best) return audit;  // single-input space: vacuously 0-DP
  const auto& [x, xp] = pairs[best->pair_index];
  audit.infinite = best->infinite;
  if (!best->infinite) audit.e_eps = best->ratio < 1 ? Rational(1) : best->ratio;
  audit.witness = {x, xp, {m.outputs()[best->output]}};
  return audit;
}

// Tight delta at a given e^eps >= 1: the hockey-stick surplus
//   max over neighboring (x, x') of  sum_o max(0, P(o|x) - e^eps P(o|x'))
// The optimal event is exactly the positive-surplus output set, so this is
// the smallest delta for which (eps, delta)-indistinguishability holds.
inline DeltaAudit tight_delta(const TableMechanism& m, const Rational& e_eps) {
  if (e_eps < 1) throw std::invalid_argument("e^eps must be >= 1");
  auto pairs = detail::ordered_neighbor_pairs(m.space());
  struct Local {
    Rational surplus = 0;
    std::size_t pair_index = 0;
    std::vector<std::size_t> outputs;
  };
  auto evaluate = [&](std::size_t i) {
    Local local;
    local.pair_index = i;
    const auto& [x, xp] = pairs[i];
    const auto& p = m.row(x);
    const auto& q = m.row(xp);
    for (std::size_t o = 0; o < p.size(); ++o) {
      Rational s = p[o] - e_eps * q[o];
      if (s > 0) {
        local.surplus += s;
        local.outputs.push_back(o);
      }
    }
    return local;
  };
  auto better = [](const Local& a, const Local& b) { return a.surplus > b.surplus; };
  auto best = scan_reduce<Local>(pairs.size(), evaluate, better);
  DeltaAudit audit;
  if (!best) return audit;
  const auto& [x, xp] = pairs[best->pair_index];
  audit.delta = best->surplus;
  audit.witness.x = x;
  audit.witness.x_prime = xp;
  for (std::size_t o : best->outputs) audit.witness.outputs.push_back(m.outputs()[o]);
  return audit;
}

struct VerifyResult {
  bool satisfied = false;
  DeltaAudit audit;  // witness when violated; tight value either way
};

// Checks whether m satisfies (eps, delta)-differential privacy, with
// e^eps supplied exactly.
inline VerifyResult verify(const TableMechanism& m, const Rational& e_eps,
                           const Rational& delta) {
  if (delta < 0 || delta > 1) throw std::invalid_argument("delta in [0,1]");
  VerifyResult r;
  r.audit = tight_delta(m, e_eps);
  r.satisfied = r.audit.delta <= delta;
  return r;
}

// Audited profile: tightest pure epsilon plus a sampled delta(eps) curve.
struct PrivacyProfile {
  EpsilonAudit tightest;
  // (e^eps, tight delta) samples, e^eps ascending from 1.
  std::vector<std::pair<Rational, Rational>> delta_curve;
};

// Samples the delta curve at `points` evenly spaced e^eps values between 1
// and the tightest ratio (or `max_e_eps` when the tightest is infinite).
inline PrivacyProfile audit_profile(const TableMechanism& m,
                                    std::size_t points = 9,
                                    const Rational& max_e_eps = 8) {
  PrivacyProfile profile;
  profile.tightest = tightest_epsilon(m);
  Rational top = profile.tightest.infinite ? max_e_eps : profile.tightest.e_eps;
  if (points < 2) points = 2;
  for (std::size_t k = 0; k < points; ++k) {
    Rational e = 1 + (top - 1) * Rational(k) / Rational(points - 1);
    profile.delta_curve.emplace_back(e, tight_delta(m, e).delta);
  }
  return profile;
}

}  // namespace dpdt
