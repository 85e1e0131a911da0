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

#include <compare>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpdt/rational.hpp"

namespace dpdt {

enum class Ordering { Less, Equal, Greater };

enum class HyperrealClass {
  Zero,
  Infinitesimal,     // nonzero, every exponent negative
  Limited,           // nonzero, highest exponent 0
  PositiveUnlimited, // highest exponent positive with positive coefficient
  NegativeUnlimited,
};

inline const char* to_string(HyperrealClass c) {
  switch (c) {
    case HyperrealClass::Zero: return "Zero";
    case HyperrealClass::Infinitesimal: return "Infinitesimal";
    case HyperrealClass::Limited: return "Limited";
    case HyperrealClass::PositiveUnlimited: return "PositiveUnlimited";
    case HyperrealClass::NegativeUnlimited: return "NegativeUnlimited";
  }
  return "?";
}

// Ordered-field scalar extending the rationals with a formal positive
// unlimited w and its powers: a finitely supported sum  sum_k a_k * w^k
// over integer exponents k with nonzero rational coefficients a_k.
// Reals embed at exponent 0; negative exponents are infinitesimals.
//
// The order is lexicographic by descending exponent: a < b iff the leading
// coefficient of b - a is positive. Addition, multiplication, negation and
// comparison are total and exact; multiplicative inverses exist only for
// single monomials, which is all the analyses here require.
class Hyperreal {
 public:
  Hyperreal() = default;
  Hyperreal(const Rational& real) {  // NOLINT: implicit real embedding
    if (real != 0) terms_[0] = real;
  }
  Hyperreal(int real) : Hyperreal(Rational(real)) {}

  static Hyperreal omega() { return monomial(1, 1); }
  static Hyperreal monomial(const Rational& coeff, int exponent) {
    Hyperreal h;
    if (coeff != 0) h.terms_[exponent] = coeff;
    return h;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_real() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
  }
  const std::map<int, Rational>& terms() const { return terms_; }

  Rational coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Hyperreal operator-() const {
    Hyperreal r;
    for (const auto& [k, a] : terms_) r.terms_[k] = -a;
    return r;
  }

  Hyperreal& operator+=(const Hyperreal& o) {
    for (const auto& [k, a] : o.terms_) {
      auto it = terms_.find(k);
      if (it == terms_.end()) {
        terms_[k] = a;
      } else {
        it->second += a;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }
  Hyperreal& operator-=(const Hyperreal& o) { return *this += -o; }

  friend Hyperreal operator+(Hyperreal a, const Hyperreal& b) { return a += b; }
  friend Hyperreal operator-(Hyperreal a, const Hyperreal& b) { return a -= b; }

  friend Hyperreal operator*(const Hyperreal& a, const Hyperreal& b) {
    Hyperreal r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        int k = ka + kb;
        auto it = r.terms_.find(k);
        if (it == r.terms_.end()) {
          r.terms_[k] = ca * cb;
        } else {
          it->second += ca * cb;
          if (it->second == 0) r.terms_.erase(it);
        }
      }
    return r;
  }
  Hyperreal& operator*=(const Hyperreal& o) { return *this = *this * o; }

  // Exact division by a single monomial. Multi-term divisors have no
  // inverse in this representation and are rejected.
  friend Hyperreal operator/(const Hyperreal& a, const Hyperreal& b) {
    if (b.terms_.empty()) throw std::domain_error("division by zero");
    if (b.terms_.size() != 1)
      throw std::domain_error("division is only defined by a single monomial");
    const auto& [k, c] = *b.terms_.begin();
    Hyperreal r;
    for (const auto& [ka, ca] : a.terms_) r.terms_[ka - k] = ca / c;
    return r;
  }

  friend bool operator==(const Hyperreal& a, const Hyperreal& b) {
    return a.terms_ == b.terms_;
  }

  // Total order: sign of the leading (highest-exponent) coefficient of the
  // difference.
  friend Ordering compare(const Hyperreal& a, const Hyperreal& b) {
    Hyperreal d = b - a;
    if (d.terms_.empty()) return Ordering::Equal;
    const Rational& lead = d.terms_.rbegin()->second;
    return lead > 0 ? Ordering::Less : Ordering::Greater;
  }
  friend bool operator<(const Hyperreal& a, const Hyperreal& b) {
    return compare(a, b) == Ordering::Less;
  }
  friend bool operator>(const Hyperreal& a, const Hyperreal& b) { return b < a; }
  friend bool operator<=(const Hyperreal& a, const Hyperreal& b) { return !(b < a); }
  friend bool operator>=(const Hyperreal& a, const Hyperreal& b) { return !(a < b); }

  HyperrealClass classify() const {
    if (terms_.empty()) return HyperrealClass::Zero;
    const auto& [k, a] = *terms_.rbegin();
    if (k > 0)
      return a > 0 ? HyperrealClass::PositiveUnlimited
                   : HyperrealClass::NegativeUnlimited;
    if (k < 0) return HyperrealClass::Infinitesimal;
    return HyperrealClass::Limited;
  }
  bool is_unlimited() const {
    HyperrealClass c = classify();
    return c == HyperrealClass::PositiveUnlimited ||
           c == HyperrealClass::NegativeUnlimited;
  }

  // Degree-0 coefficient of a non-unlimited value (the infinitesimal part
  // is discarded).
  Rational standard_part() const {
    if (is_unlimited())
      throw std::domain_error("standard part of an unlimited value");
    return coefficient(0);
  }

  // Signed-sum text form, e.g. "2*w^1 + 1 - 3*w^-1". Parsing this exact
  // form back is lossless.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      Rational c = it->second;
      if (first) {
        if (c < 0) out << "-";
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      c = abs(c);
      if (it->first == 0) {
        out << dpdt::to_string(c);
      } else {
        out << dpdt::to_string(c) << "*w^" << it->first;
      }
      first = false;
    }
    return out.str();
  }

  static Hyperreal parse(std::string_view text);

 private:
  std::map<int, Rational> terms_;
};

namespace detail {
inline void skip_spaces(std::string_view& s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
}
}  // namespace detail

// Accepts signed sums of "c", "c*w^k", "w^k" terms with rational c and
// integer k, e.g. "2*w^1 + 1 - 3/2*w^-1".
inline Hyperreal Hyperreal::parse(std::string_view text) {
  Hyperreal result;
  std::string_view s = text;
  detail::skip_spaces(s);
  if (s.empty()) throw std::invalid_argument("empty hyperreal literal");
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  while (true) {
    detail::skip_spaces(s);
    // One term: up to the next top-level '+'/'-' separator. A '-' directly
    // after "w^" belongs to the exponent.
    std::size_t end = 0;
    while (end < s.size()) {
      char c = s[end];
      if ((c == '+' || c == '-') && end > 0 && s[end - 1] != '^') break;
      ++end;
    }
    std::string term(s.substr(0, end));
    while (!term.empty() && term.back() == ' ') term.pop_back();
    if (term.empty()) throw std::invalid_argument("malformed hyperreal: dangling sign");
    Rational coeff;
    int exponent = 0;
    std::size_t w = term.find("w^");
    if (w == std::string::npos) {
      coeff = parse_rational(term);
    } else {
      std::string head = term.substr(0, w);
      while (!head.empty() && head.back() == ' ') head.pop_back();
      if (!head.empty() && head.back() == '*') head.pop_back();
      while (!head.empty() && head.back() == ' ') head.pop_back();
      coeff = head.empty() ? Rational(1) : parse_rational(head);
      std::string exp = term.substr(w + 2);
      if (exp.empty()) throw std::invalid_argument("malformed hyperreal exponent");
      std::size_t pos = 0;
      exponent = std::stoi(exp, &pos);
      if (pos != exp.size()) throw std::invalid_argument("malformed hyperreal exponent");
    }
    result += Hyperreal::monomial(negative ? -coeff : coeff, exponent);
    s.remove_prefix(end);
    detail::skip_spaces(s);
    if (s.empty()) break;
    if (s.front() != '+' && s.front() != '-')
      throw std::invalid_argument("malformed hyperreal: expected '+' or '-'");
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return result;
}

inline std::string to_string(const Hyperreal& h) { return h.to_string(); }

}  // namespace dpdt
