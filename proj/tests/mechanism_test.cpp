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

#include "dpdt/mechanism.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace dpdt {
namespace {

using testing::random_post_processor;
using testing::random_table_mechanism;
using testing::RandomTableOptions;
using testing::Rng;

std::vector<Rational> rationals(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

TEST(InputSpace, NeighborsDifferInExactlyOneCoordinate) {
  InputSpace two_bits = InputSpace::uniform(2, {"0", "1"});
  EXPECT_EQ(neighbors(two_bits, {"1", "0"}),
            (std::vector<InputTuple>{{"0", "0"}, {"1", "1"}}));

  InputSpace solo(std::vector<std::vector<Symbol>>{{kOptOut, "1", "2"}});
  EXPECT_EQ(neighbors(solo, {"1"}),
            (std::vector<InputTuple>{{kOptOut}, {"2"}}));

  // n agents over size-k alphabets: n*(k-1) neighbors each.
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    std::uniform_int_distribution<std::size_t> nd(1, 3), kd(2, 4);
    std::size_t n = nd(rng), k = kd(rng);
    std::vector<Symbol> alphabet;
    for (std::size_t s = 0; s < k; ++s) alphabet.push_back(std::to_string(s));
    InputSpace space = InputSpace::uniform(n, alphabet);
    for (const auto& x : space.inputs())
      EXPECT_EQ(neighbors(space, x).size(), n * (k - 1));
  }
  EXPECT_THROW(neighbors(two_bits, {"2", "0"}), std::invalid_argument);
}

TEST(InputSpace, EnvironmentsAndResponseInsertion) {
  InputSpace space(std::vector<std::vector<Symbol>>{{"a", "b"}, {"x"}, {"0", "1"}});
  auto envs = space.environments(1);
  EXPECT_EQ(envs.size(), 4u);  // 2 * 2, agent 1 removed
  EXPECT_EQ(space.with_response(1, "x", {"b", "1"}), (InputTuple{"b", "x", "1"}));
  EXPECT_THROW(space.environments(3), std::invalid_argument);
}

TEST(NoisyCount, TableMatchesTheClosedForm) {
  TableMechanism m = noisy_count_mechanism(2);
  EXPECT_EQ(m.row({"0", "0"}), rationals({"1/7", "2/7", "4/7"}));
  EXPECT_EQ(m.row({"0", "1"}), rationals({"1/7", "4/7", "2/7"}));
  EXPECT_EQ(m.row({"1", "0"}), rationals({"1/7", "4/7", "2/7"}));
  EXPECT_EQ(m.row({"1", "1"}), rationals({"2/7", "4/7", "1/7"}));

  TableMechanism m3 = noisy_count_mechanism(3);
  EXPECT_EQ(m3.row({"1", "1"}), rationals({"3/13", "9/13", "1/13"}));

  for (const auto& [x, row] : m.rows()) {
    Rational sum = 0;
    for (const Rational& p : row) sum += p;
    EXPECT_EQ(sum, Rational(1));
  }
}

TEST(NoisyCount, OptOutVariantTreatsOptOutAsZero) {
  TableMechanism m = noisy_count_mechanism(2, /*with_opt_out=*/true);
  EXPECT_EQ(m.row({kOptOut, kOptOut}), m.row({"0", "0"}));
  EXPECT_EQ(m.row({kOptOut, "1"}), m.row({"0", "1"}));
  EXPECT_EQ(m.space().alphabet(0).size(), 3u);
}

TEST(ConsequenceDistribution, MatchesHandComputedRows) {
  TableMechanism m = noisy_count_mechanism(2);
  PostProcessor identity = PostProcessor::identity(m.outputs());
  EXPECT_EQ(consequence_distribution(m, identity, {"1", "0"}),
            rationals({"1/7", "4/7", "2/7"}));

  PostProcessor constant = PostProcessor::deterministic(
      {"c"}, {{"0", "c"}, {"1", "c"}, {"2", "c"}});
  EXPECT_EQ(consequence_distribution(m, constant, {"1", "1"}), rationals({"1"}));

  // Grief unless the count reads zero: P(g | (1,1)) = (4 + 1)/7.
  PostProcessor grief = grief_if_nonzero_postprocessor();
  auto dist = consequence_distribution(m, grief, {"1", "1"});
  EXPECT_EQ(dist[grief.consequences().size() - 1], Rational(2, 7));  // n
  EXPECT_EQ(dist[0], Rational(5, 7));                                // g
  EXPECT_THROW(consequence_distribution(m, grief, {"2", "0"}), std::invalid_argument);
}

TEST(Compose, AgreesWithConsequenceDistributionAndStaysValid) {
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    TableMechanism m = random_table_mechanism(rng, RandomTableOptions{});
    PostProcessor f = random_post_processor(rng, m.outputs());
    TableMechanism composed = compose(m, f);  // constructor revalidates rows
    EXPECT_EQ(composed.outputs(), f.consequences());
    for (const auto& x : m.space().inputs())
      EXPECT_EQ(composed.row(x), consequence_distribution(m, f, x));
  }
}

TEST(TableMechanism, RejectsMalformedTables) {
  InputSpace space = InputSpace::uniform(1, {"0", "1"});
  std::map<InputTuple, std::vector<Rational>> bad_sum{
      {{"0"}, rationals({"1/2", "1/3"})}, {{"1"}, rationals({"1/2", "1/2"})}};
  EXPECT_THROW(TableMechanism(space, {"a", "b"}, bad_sum), std::invalid_argument);

  std::map<InputTuple, std::vector<Rational>> negative{
      {{"0"}, rationals({"3/2", "-1/2"})}, {{"1"}, rationals({"1/2", "1/2"})}};
  EXPECT_THROW(TableMechanism(space, {"a", "b"}, negative), std::invalid_argument);

  std::map<InputTuple, std::vector<Rational>> missing{
      {{"0"}, rationals({"1/2", "1/2"})}};
  EXPECT_THROW(TableMechanism(space, {"a", "b"}, missing), std::invalid_argument);
}

TEST(RevealMechanism, LeaksOnlySubmittedReports) {
  TableMechanism m = reveal_with_probability_mechanism(Rational(1, 20));
  EXPECT_EQ(m.probability({"1"}, 0), Rational(1, 20));
  EXPECT_EQ(m.probability({kOptOut}, 0), Rational(0));
  PostProcessor proof = certainty_postprocessor(m, 0, {"1"});
  // Output "1" proves the report; "silent" does not.
  EXPECT_EQ(proof.row("1"), rationals({"1", "0"}));
  EXPECT_EQ(proof.row("silent"), rationals({"0", "1"}));
}

TEST(CertaintyPostprocessor, NeverConvictsWhenEveryOutputIsShared) {
  TableMechanism m = noisy_count_mechanism(2, /*with_opt_out=*/true);
  PostProcessor judge = certainty_postprocessor(m, 1, {"1"});
  for (const auto& [o, row] : judge.rows()) EXPECT_EQ(row[0], Rational(0));
}

}  // namespace
}  // namespace dpdt
