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
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace dpdt {

// Exact arbitrary-precision rational scalar. Every probability, utility
// coefficient, and privacy parameter in this library is one of these;
// floating point only appears at reporting boundaries.
namespace mp = boost::multiprecision;
using Integer = mp::number<mp::backends::cpp_int_backend<>, mp::et_off>;
using Rational =
    mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>,
               mp::et_off>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Renders in canonical "num/den" form, or "num" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Parses "p", "-p" or "p/q". Decimal notation is rejected: files carry
// exact rationals only.
inline Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = s.find('/');
  const std::string digits = "0123456789";
  auto check_int = [&](std::string_view part) {
    if (part.empty()) throw std::invalid_argument("malformed rational: '" + s + "'");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw std::invalid_argument("malformed rational: '" + s + "'");
    for (; i < part.size(); ++i)
      if (digits.find(part[i]) == std::string::npos)
        throw std::invalid_argument("malformed rational: '" + s + "'");
  };
  if (slash == std::string::npos) {
    check_int(s);
    return Rational(Integer(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  return Rational(Integer(num), d);
}

// Parses a decimal or rational literal ("0.25", "3", "1/4") to an exact
// rational. Used for command-line parameters, never for mechanism tables.
inline Rational parse_decimal_or_rational(std::string_view text) {
  const std::string s(text);
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) return parse_rational(s);
  std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
  bool negative = !whole.empty() && whole[0] == '-';
  if (negative || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
  if (whole.empty()) whole = "0";
  if (frac.empty()) throw std::invalid_argument("malformed decimal: '" + s + "'");
  for (char c : whole + frac)
    if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: '" + s + "'");
  Integer scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Rational value = Rational(Integer(whole)) + Rational(Integer(frac), scale);
  return negative ? -value : value;
}

inline Rational pow_rational(const Rational& base, int exponent) {
  if (exponent == 0) return 1;
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return 1 / pow_rational(base, -exponent);
  }
  Rational acc = 1, b = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

}  // namespace dpdt
