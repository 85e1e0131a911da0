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

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "dpdt/rational.hpp"

namespace dpdt {

// Certified enclosure [lo, hi] of a real value by exact rationals.
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  double midpoint() const { return to_double((lo + hi) / 2); }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }
};

// Enclosure of e^x for rational x, tight to at most `width`.
// Uses the Taylor series with the Lagrange-style tail bound
//   0 < e^x - S_n(x) <= x^{n+1}/(n+1)! * (n+2)/(n+2-x)   for 0 <= x < n+2,
// and the exact reciprocal identity e^{-x} = 1/e^x for negative arguments.
inline RationalInterval exp_enclosure(const Rational& x, const Rational& width) {
  if (width <= 0) throw std::invalid_argument("enclosure width must be positive");
  if (x == 0) return {Rational(1), Rational(1)};
  if (x < 0) {
    // e^x = 1/e^{-x}; the reciprocal widens the enclosure, so retry with a
    // tighter positive-side request until the inverted width fits.
    Rational inner = width;
    RationalInterval pos = exp_enclosure(-x, inner);
    while ((1 / pos.lo - 1 / pos.hi) > width) {
      inner /= 16;
      pos = exp_enclosure(-x, inner);
    }
    return {1 / pos.hi, 1 / pos.lo};
  }
  // x > 0: partial sums with explicit tail bound.
  Rational term = 1, sum = 1;
  unsigned n = 0;
  while (true) {
    ++n;
    term *= x / n;
    sum += term;
    if (Rational(n) + 2 <= x) continue;  // tail bound not yet valid
    Rational tail = term * x / (n + 1);
    tail *= Rational(n + 2) / (Rational(n + 2) - x);
    if (tail < width) return {sum, sum + tail};
    if (n > 10000) throw std::runtime_error("exp_enclosure failed to converge");
  }
}

// An exact real number of the form  c_0 + sum_i c_i * e^{x_i}  with rational
// coefficients c_i and distinct rational exponents x_i != 0. Closed under
// addition, negation, and rational scaling; equality of canonical forms is
// syntactic. Signs of nonzero values are decided by refining enclosures
// (distinct exponentials are linearly independent over the rationals, so a
// nonzero canonical form never sits exactly on zero).
//
// This is the value type for everything the Laplace mechanism produces:
// threshold probabilities, expected-utility gaps, and compensation bounds,
// which are all rational combinations of e^{rational}.
class ExpSum {
 public:
  ExpSum() = default;
  explicit ExpSum(const Rational& constant) {
    if (constant != 0) terms_[0] = constant;
  }

  // coeff * e^{exponent}
  static ExpSum exp_term(const Rational& coeff, const Rational& exponent) {
    ExpSum s;
    if (coeff != 0) s.terms_[exponent] = coeff;
    return s;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
  }
  Rational rational_value() const {
    if (terms_.empty()) return 0;
    if (!is_rational()) throw std::domain_error("value is not rational");
    return terms_.begin()->second;
  }

  const std::map<Rational, Rational>& terms() const { return terms_; }

  ExpSum operator-() const {
    ExpSum r;
    for (const auto& [x, c] : terms_) r.terms_[x] = -c;
    return r;
  }
  ExpSum& operator+=(const ExpSum& o) {
    for (const auto& [x, c] : o.terms_) {
      auto it = terms_.find(x);
      if (it == terms_.end()) {
        terms_[x] = c;
      } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }
  ExpSum& operator-=(const ExpSum& o) { return *this += -o; }
  friend ExpSum operator+(ExpSum a, const ExpSum& b) { return a += b; }
  friend ExpSum operator-(ExpSum a, const ExpSum& b) { return a -= b; }

  ExpSum scaled(const Rational& k) const {
    ExpSum r;
    if (k == 0) return r;
    for (const auto& [x, c] : terms_) r.terms_[x] = c * k;
    return r;
  }

  friend bool operator==(const ExpSum& a, const ExpSum& b) {
    return a.terms_ == b.terms_;
  }

  RationalInterval enclosure(const Rational& width) const {
    RationalInterval acc{Rational(0), Rational(0)};
    if (terms_.empty()) return acc;
    Rational per_term = width / Rational(static_cast<unsigned>(terms_.size()));
    for (const auto& [x, c] : terms_) {
      if (x == 0) {
        acc.lo += c;
        acc.hi += c;
        continue;
      }
      RationalInterval e = exp_enclosure(x, per_term / (abs(c) + 1));
      if (c >= 0) {
        acc.lo += c * e.lo;
        acc.hi += c * e.hi;
      } else {
        acc.lo += c * e.hi;
        acc.hi += c * e.lo;
      }
    }
    return acc;
  }

  // -1, 0, or +1, decided exactly.
  int sign() const {
    if (terms_.empty()) return 0;
    if (is_rational()) return terms_.begin()->second < 0 ? -1 : 1;
    bool all_pos = true, all_neg = true;
    for (const auto& [x, c] : terms_) (c > 0 ? all_neg : all_pos) = false;
    if (all_pos) return 1;
    if (all_neg) return -1;
    Rational width(1, 1024);
    for (int round = 0; round < 64; ++round) {
      RationalInterval e = enclosure(width);
      if (e.lo > 0) return 1;
      if (e.hi < 0) return -1;
      width /= 4096;
    }
    throw std::runtime_error("ExpSum sign did not separate from zero");
  }

  int compare(const ExpSum& other) const { return (*this - other).sign(); }

  double to_double() const {
    if (terms_.empty()) return 0.0;
    return enclosure(Rational(1, Integer(1) << 64)).midpoint();
  }

  // e.g. "1/2 - 1/2*exp(-1/2)"; constant term printed bare.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Highest exponent first; the constant term sits in order.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const Rational& x = it->first;
      Rational c = it->second;
      if (first) {
        if (c < 0) out << "-";
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      c = abs(c);
      if (x == 0) {
        out << dpdt::to_string(c);
      } else {
        if (c != 1) out << dpdt::to_string(c) << "*";
        out << "exp(" << dpdt::to_string(x) << ")";
      }
      first = false;
    }
    return out.str();
  }

 private:
  std::map<Rational, Rational> terms_;
};

// Laplace(scale) left-tail probability P(L <= z) with w = z/scale:
//   w <= 0:  e^w / 2
//   w >  0:  1 - e^{-w} / 2
// Strictly increasing in w, so threshold-event comparisons reduce to
// comparisons of the rational arguments.
inline ExpSum laplace_cdf(const Rational& w) {
  if (w <= 0) return ExpSum::exp_term(Rational(1, 2), w);
  return ExpSum(Rational(1)) - ExpSum::exp_term(Rational(1, 2), -w);
}

}  // namespace dpdt
