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

#include "dpdt/exp_sum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace dpdt {
namespace {

TEST(ExpEnclosure, BracketsKnownValues) {
  RationalInterval e1 = exp_enclosure(1, Rational(1, 1000000));
  EXPECT_LE(e1.width(), Rational(1, 1000000));
  EXPECT_LT(to_double(e1.lo), 2.718281828459046);
  EXPECT_GT(to_double(e1.hi), 2.718281828459044);

  RationalInterval small = exp_enclosure(Rational(-1), Rational(1, 1000000));
  EXPECT_LT(to_double(small.lo), 0.3678794412);
  EXPECT_GT(to_double(small.hi), 0.3678794411);
  EXPECT_GT(small.lo, 0);

  RationalInterval unit = exp_enclosure(0, Rational(1, 10));
  EXPECT_EQ(unit.lo, Rational(1));
  EXPECT_EQ(unit.hi, Rational(1));
}

TEST(ExpEnclosure, HandlesModeratelyLargeArguments) {
  RationalInterval e5 = exp_enclosure(5, Rational(1, 1000));
  EXPECT_LE(e5.width(), Rational(1, 1000));
  EXPECT_NEAR(e5.midpoint(), 148.4131591, 1e-3);
}

TEST(ExpSum, CanonicalFormAndEquality) {
  ExpSum half = laplace_cdf(0);
  EXPECT_TRUE(half.is_rational());
  EXPECT_EQ(half.rational_value(), Rational(1, 2));

  // CDF(0) - CDF(-1/2) and CDF(1/2) - CDF(0) are the same exact value by
  // the symmetry of the density; their canonical forms must coincide.
  ExpSum a = laplace_cdf(0) - laplace_cdf(Rational(-1, 2));
  ExpSum b = laplace_cdf(Rational(1, 2)) - laplace_cdf(0);
  EXPECT_EQ(a, b);

  ExpSum zero = a - b;
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.sign(), 0);
}

TEST(ExpSum, SignsAreCertified) {
  // 1/2 - 1/2 e^{-1/2} > 0
  EXPECT_EQ((laplace_cdf(0) - laplace_cdf(Rational(-1, 2))).sign(), 1);
  // e^{1/10} - 1.2 < 0, i.e. 0.1 < ln(1.2)
  ExpSum a = ExpSum::exp_term(1, Rational(1, 10)) - ExpSum(Rational(6, 5));
  EXPECT_EQ(a.sign(), -1);
  // e^{1/4} - 1.2 > 0, i.e. 0.25 > ln(1.2)
  ExpSum b = ExpSum::exp_term(1, Rational(1, 4)) - ExpSum(Rational(6, 5));
  EXPECT_EQ(b.sign(), 1);
  // A nearly-cancelling pair still separates: e^{1/2} - e^{499/1000}.
  ExpSum tight = ExpSum::exp_term(1, Rational(1, 2)) -
                 ExpSum::exp_term(1, Rational(499, 1000));
  EXPECT_EQ(tight.sign(), 1);
}

TEST(ExpSum, LaplaceCdfIsStrictlyMonotone) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-12, 12);
  std::uniform_int_distribution<int> den(1, 6);
  for (int i = 0; i < 200; ++i) {
    Rational w1(num(rng), den(rng)), w2(num(rng), den(rng));
    int expected = w1 < w2 ? -1 : (w1 == w2 ? 0 : 1);
    EXPECT_EQ((laplace_cdf(w1) - laplace_cdf(w2)).sign(), expected);
  }
}

TEST(ExpSum, EnclosureAndApproximation) {
  ExpSum v = laplace_cdf(Rational(-1, 2));  // e^{-1/2}/2 ~ 0.30326533
  RationalInterval box = v.enclosure(Rational(1, 100000000));
  EXPECT_LE(box.width(), Rational(1, 100000000));
  EXPECT_NEAR(v.to_double(), 0.303265330, 1e-8);
  EXPECT_NEAR((laplace_cdf(3) - laplace_cdf(-3)).to_double(),
              0.9502129316, 1e-9);
}

TEST(ExpSum, Printing) {
  EXPECT_EQ(ExpSum().to_string(), "0");
  EXPECT_EQ(laplace_cdf(0).to_string(), "1/2");
  EXPECT_EQ(laplace_cdf(Rational(-1, 2)).to_string(), "1/2*exp(-1/2)");
  EXPECT_EQ((laplace_cdf(0) - laplace_cdf(Rational(-1, 2))).to_string(),
            "1/2 - 1/2*exp(-1/2)");
  EXPECT_EQ(laplace_cdf(1).to_string(), "1 - 1/2*exp(-1)");
}

TEST(ExpSum, ApproximationTracksDirectEvaluation) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  std::uniform_int_distribution<int> terms(0, 4);
  for (int i = 0; i < 200; ++i) {
    ExpSum value;
    double direct = 0;
    int k = terms(rng);
    for (int t = 0; t < k; ++t) {
      Rational c(num(rng), den(rng));
      Rational x(num(rng), den(rng));
      value += ExpSum::exp_term(c, x);
      direct += to_double(c) * std::exp(to_double(x));
    }
    EXPECT_NEAR(value.to_double(), direct, 1e-9);
  }
}

TEST(ExpSum, LinearityHoldsExactly) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-8, 8);
  std::uniform_int_distribution<int> den(1, 5);
  for (int i = 0; i < 200; ++i) {
    ExpSum a = ExpSum::exp_term(Rational(num(rng), den(rng)),
                                Rational(num(rng), den(rng))) +
               ExpSum(Rational(num(rng), den(rng)));
    ExpSum b = ExpSum::exp_term(Rational(num(rng), den(rng)),
                                Rational(num(rng), den(rng)));
    Rational k(num(rng), den(rng));
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ((a - b) + b, a);
    EXPECT_EQ(a.scaled(k) + b.scaled(k), (a + b).scaled(k));
    EXPECT_TRUE((a - a).is_zero());
  }
}

}  // namespace
}  // namespace dpdt
