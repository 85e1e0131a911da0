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

#include <stdexcept>
#include <string>
#include <vector>

#include "dpdt/exp_sum.hpp"
#include "dpdt/mechanism.hpp"
#include "dpdt/rational.hpp"

namespace dpdt {

// Laplace-noised counting query observed only through a threshold event.
//
// The query is q(x) = sum of the numeric values of all non-opt-out reports;
// the mechanism releases q(x) + L with L ~ Lap(GS/eps), and the analyses
// here consume only the binary consequence "q(x) + L is at-most / at-least
// the threshold". That event's probability has the exact closed form
//   P(q + L <= t) = CDF((t - q) * eps / GS)
// with CDF the unit-scale Laplace distribution function, so everything
// downstream stays in exact exponential-sum arithmetic; the mechanism is
// never sampled.
class ThresholdLaplaceMechanism {
 public:
  enum class Direction { AtMost, AtLeast };

  ThresholdLaplaceMechanism(InputSpace space, Rational sensitivity,
                            Rational eps, Rational threshold, Direction dir)
      : space_(std::move(space)),
        sensitivity_(std::move(sensitivity)),
        eps_(std::move(eps)),
        threshold_(std::move(threshold)),
        direction_(dir) {
    if (sensitivity_ <= 0) throw std::invalid_argument("sensitivity must be positive");
    if (eps_ <= 0) throw std::invalid_argument("eps must be positive");
  }

  // The survey of the running examples: n agents with reports {opt-out,1,2},
  // query sensitivity 2.
  static ThresholdLaplaceMechanism counting_survey(std::size_t n,
                                                   const Rational& eps,
                                                   const Rational& threshold,
                                                   Direction dir) {
    return ThresholdLaplaceMechanism(
        InputSpace::uniform(n, {kOptOut, "1", "2"}), Rational(2), eps,
        threshold, dir);
  }

  const InputSpace& space() const { return space_; }
  const Rational& sensitivity() const { return sensitivity_; }
  const Rational& eps() const { return eps_; }
  const Rational& threshold() const { return threshold_; }
  Direction direction() const { return direction_; }

  // Opt-out contributes 0; every other symbol is its numeric value.
  Rational query(const InputTuple& x) const {
    if (!space_.valid(x)) throw std::invalid_argument("input tuple not in space");
    Rational q = 0;
    for (const Symbol& s : x)
      if (s != kOptOut) q += parse_rational(s);
    return q;
  }

  // Exact probability of the threshold event at input x.
  ExpSum threshold_probability(const InputTuple& x) const {
    Rational z = threshold_ - query(x);
    Rational w = z * eps_ / sensitivity_;
    return direction_ == Direction::AtMost ? laplace_cdf(w) : laplace_cdf(-w);
  }

  // Enclosure of the threshold probability to at most `width`.
  RationalInterval threshold_probability_enclosure(const InputTuple& x,
                                                   const Rational& width) const {
    return threshold_probability(x).enclosure(width);
  }

  // Binary consequence space of the threshold event.
  std::vector<Symbol> consequences() const { return {"0", "1"}; }

 private:
  InputSpace space_;
  Rational sensitivity_;
  Rational eps_;
  Rational threshold_;
  Direction direction_;
};

}  // namespace dpdt
