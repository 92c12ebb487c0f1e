// Copyright 2026 The MABN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "mabn/errors.h"
#include "mabn/policy.h"
#include "mabn/random.h"
#include "reference_exp3.h"

namespace mabn {
namespace {

TEST(BlockTest, DoublingBlocks) {
  EXPECT_EQ(block_of(1), (BlockPosition{1, 1}));
  EXPECT_EQ(block_of(7), (BlockPosition{3, 4}));
  EXPECT_EQ(block_of(8), (BlockPosition{4, 8}));
  EXPECT_EQ(block_of(1023), (BlockPosition{10, 512}));
  EXPECT_THROW(block_of(0), ParameterError);
  for (std::int64_t t = 1; t < 5000; ++t) {
    const auto b = block_of(t);
    ASSERT_LE(b.start, t);
    ASSERT_LT(t, 2 * b.start);
    ASSERT_EQ(b.start, std::int64_t{1} << (b.index - 1));
  }
}

TEST(EpsilonTest, HandValues) {
  EXPECT_NEAR(epsilon(1, 2), std::sqrt(std::log(2.0) / 2), 1e-15);
  EXPECT_NEAR(epsilon(1, 2), 0.588705, 1e-6);
  EXPECT_NEAR(epsilon(3, 4), 0.294352, 1e-6);
  for (int m = 1; m < 20; ++m) {
    EXPECT_NEAR(epsilon(m + 1, 7), epsilon(m, 7) / std::sqrt(2.0), 1e-15);
  }
  EXPECT_THROW(epsilon(1, 1), ConditionViolation);
}

TEST(ScheduleTest, DeltaValues) {
  EXPECT_EQ(delta_t(MadSchedule::power_law(0.1), 1024), 0.5);
  EXPECT_EQ(delta_t(MadSchedule::power_law(0.3), 1), 1.0);
  EXPECT_EQ(delta_t(MadSchedule::power_law(0.0), 777), 1.0);
  EXPECT_EQ(delta_t(MadSchedule::standard(), 999), 0.0);
  EXPECT_EQ(delta_t(MadSchedule::uniform(), 999), 1.0);
  EXPECT_THROW(MadSchedule::power_law(0.5), ParameterError);
  EXPECT_THROW(MadSchedule::power_law(-0.1), ParameterError);
  EXPECT_THROW(MadSchedule::power_law(0.7), ParameterError);
}

TEST(ScheduleTest, Names) {
  EXPECT_EQ(MadSchedule::power_law(0.49).label(), "exp3ncs_a0.49");
  EXPECT_EQ(MadSchedule::power_law(0.1).algorithm_name(), "EXP3-N-CS");
  EXPECT_EQ(MadSchedule::standard().algorithm_name(), "Standard");
  EXPECT_EQ(MadSchedule::uniform().label(), "uniform");
}

TEST(AlgProbabilitiesTest, UniformAtBlockStart) {
  PolicyState s(4);
  s.cumulative_loss = {5, 1, 2, 3};
  advance_to_round(s, 4);
  for (double p : alg_probabilities(s, 4)) EXPECT_EQ(p, 0.25);
}

TEST(AlgProbabilitiesTest, EqualEstimatesAreSymmetric) {
  PolicyState s(2);
  advance_to_round(s, 5);
  s.cumulative_loss = {1.5, 1.5};
  const auto p = alg_probabilities(s, 6);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(AlgProbabilitiesTest, Softmax) {
  // Rhat = (2, 0) after two rounds in the block.
  PolicyState s(2);
  advance_to_round(s, 4);
  s.rounds_in_block = 2;
  s.cumulative_loss = {0.0, 2.0};
  const double eps = epsilon(3, 2);
  const auto p = alg_probabilities(s, 6);
  EXPECT_NEAR(p[0], std::exp(2 * eps) / (std::exp(2 * eps) + 1), 1e-15);
  EXPECT_NEAR(p[1], 1 / (std::exp(2 * eps) + 1), 1e-15);
  EXPECT_NEAR(estimated_rewards(s)[0], 2.0, 0);
}

TEST(AlgProbabilitiesTest, RejectsStaleBlock) {
  PolicyState s(3);
  advance_to_round(s, 3);
  EXPECT_THROW(alg_probabilities(s, 4), StateError);
}

TEST(AlgProbabilitiesTest, HugeLossesStayFinite) {
  PolicyState s(3);
  advance_to_round(s, 1000);
  s.cumulative_loss = {1e300, 0.0, 1e12};
  const auto p = alg_probabilities(s, 1001);
  EXPECT_EQ(p[1], 1.0);
  EXPECT_EQ(p[0], 0.0);
}

TEST(MadTest, Mixing) {
  const std::vector<double> alg = {0.8, 0.1, 0.05, 0.05};
  EXPECT_EQ(mad_probabilities(alg, 0.0, 4), alg);
  for (double p : mad_probabilities(alg, 1.0, 4)) EXPECT_EQ(p, 0.25);
  EXPECT_NEAR(mad_probabilities(alg, 0.5, 4)[0], 0.525, 1e-15);
  EXPECT_THROW(mad_probabilities(alg, 1.5, 4), ParameterError);
  EXPECT_THROW(mad_probabilities(alg, -0.1, 4), ParameterError);
}

TEST(SelectTest, DegenerateDistribution) {
  RandomStream rng = make_stream({1});
  const std::vector<double> p = {1.0, 0.0};
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(select_arm(p, rng), 0u);
  const std::vector<double> q = {0.0, 0.0, 1.0, 0.0};
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(select_arm(q, rng), 2u);
}

TEST(SelectTest, Frequencies) {
  RandomStream rng = make_stream({2});
  const int n = 100000;
  std::vector<int> c(4, 0);
  const std::vector<double> uniform(4, 0.25);
  for (int k = 0; k < n; ++k) ++c[select_arm(uniform, rng)];
  for (int v : c) EXPECT_NEAR(v / double(n), 0.25, 3 * std::sqrt(0.25 * 0.75 / n));
  int zero = 0;
  const std::vector<double> skew = {0.9, 0.1};
  for (int k = 0; k < n; ++k) zero += select_arm(skew, rng) == 0;
  EXPECT_NEAR(zero / double(n), 0.9, 3 * std::sqrt(0.09 / n));
}

TEST(EstimatorTest, Updates) {
  PolicyState s(3);
  advance_to_round(s, 1);
  update_estimator(s, 1, 1.0, 0.3);
  EXPECT_EQ(s.cumulative_loss, (std::vector<double>{0, 0, 0}));
  update_estimator(s, 2, 0.4, 0.2);
  EXPECT_NEAR(s.cumulative_loss[2], 3.0, 1e-15);
  EXPECT_EQ(s.rounds_in_block, 2);
  EXPECT_THROW(update_estimator(s, 0, 0.4, 0.0), ParameterError);
  EXPECT_THROW(update_estimator(s, 0, 1.4, 0.5), ParameterError);
  EXPECT_THROW(update_estimator(s, 3, 0.4, 0.5), ParameterError);
  update_estimator(s, 0, 0.0, 0.001, 10.0);
  EXPECT_EQ(s.cumulative_loss[0], 10.0);
}

TEST(EstimatorTest, NewBlockClearsLosses) {
  PolicyState s(2);
  advance_to_round(s, 2);
  update_estimator(s, 0, 0.0, 0.5);
  advance_to_round(s, 3);
  EXPECT_EQ(s.cumulative_loss[0], 2.0);
  advance_to_round(s, 4);
  EXPECT_EQ(s.cumulative_loss[0], 0.0);
  EXPECT_EQ(s.rounds_in_block, 0);
  EXPECT_EQ(s.block_start, 4);
}

TEST(EstimatorTest, ExactlyUnbiased) {
  // E[Rhat increment for S] over the arm draw and the Bernoulli reward equals
  // the mean of S.
  const std::vector<double> probs = {0.1, 0.2, 0.3, 0.4};
  const std::vector<double> means = {0.15, 0.9, 0.5, 0.35};
  std::vector<double> expected(4, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    for (double r : {0.0, 1.0}) {
      const double w = probs[k] * (r == 1.0 ? means[k] : 1 - means[k]);
      PolicyState s(4);
      advance_to_round(s, 1);
      update_estimator(s, k, r, probs[k]);
      const auto rhat = estimated_rewards(s);
      for (std::size_t a = 0; a < 4; ++a) expected[a] += w * rhat[a];
    }
  }
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(expected[a], means[a], 1e-12);
}

TEST(PolicyTest, FirstRoundIsUniform) {
  Exp3NCsPolicy p(5, MadSchedule::standard());
  p.begin_round(1);
  for (double v : p.mad_probs()) EXPECT_EQ(v, 0.2);
  EXPECT_EQ(p.current_delta(), 0.0);
}

TEST(PolicyTest, RoundProtocol) {
  Exp3NCsPolicy p(3, MadSchedule::power_law(0.2));
  EXPECT_THROW(p.begin_round(2), StateError);
  EXPECT_THROW(p.observe(0, 0.5), StateError);
  p.begin_round(1);
  EXPECT_THROW(p.begin_round(2), StateError);
  p.observe(0, 0.5);
  p.begin_round(2);
  EXPECT_THROW(Exp3NCsPolicy(1, MadSchedule::uniform()), ConditionViolation);
}

TEST(PolicyTest, FloorAndNormalization) {
  for (const auto& schedule :
       {MadSchedule::power_law(0.1), MadSchedule::power_law(0.49), MadSchedule::uniform()}) {
    Exp3NCsPolicy p(6, schedule);
    RandomStream rng = make_stream({3});
    RandomStream rewards = make_stream({4});
    for (std::int64_t t = 1; t <= 3000; ++t) {
      p.begin_round(t);
      const auto mad = p.mad_probs();
      const double sum = std::accumulate(mad.begin(), mad.end(), 0.0);
      ASSERT_NEAR(sum, 1.0, 1e-12);
      for (double v : mad) ASSERT_GE(v, p.current_delta() / 6 * (1 - 1e-15));
      const std::size_t arm = p.select(rng);
      p.observe(arm, bernoulli(rewards, arm == 2 ? 0.8 : 0.3));
    }
  }
}

TEST(PolicyTest, StandardMatchesReferenceExp3) {
  const std::size_t n = 5;
  Exp3NCsPolicy policy(n, MadSchedule::standard());
  testing::ReferenceExp3 ref(n);
  RandomStream rng_a = make_stream({10});
  RandomStream rng_b = make_stream({10});
  RandomStream rewards = make_stream({11});
  for (std::int64_t t = 1; t <= 2000; ++t) {
    policy.begin_round(t);
    const auto& expected = ref.probabilities(t);
    for (std::size_t k = 0; k < n; ++k) {
      ASSERT_NEAR(policy.alg_probs()[k], expected[k], 1e-12) << t;
      ASSERT_EQ(policy.mad_probs()[k], policy.alg_probs()[k]);
    }
    const std::size_t a = policy.select(rng_a);
    const std::size_t b = ref.draw(rng_b);
    ASSERT_EQ(a, b) << t;
    const double mean = ((t / 50) % 2 == 0) ? 0.1 + 0.2 * a : 0.9 - 0.2 * a;
    const double r = bernoulli(rewards, mean);
    policy.observe(a, r);
    ref.update(b, r);
  }
}

TEST(PolicyTest, UniformIgnoresFeedback) {
  Exp3NCsPolicy p(4, MadSchedule::uniform());
  RandomStream rng = make_stream({5});
  for (std::int64_t t = 1; t <= 500; ++t) {
    p.begin_round(t);
    for (double v : p.mad_probs()) ASSERT_EQ(v, 0.25);
    const std::size_t arm = p.select(rng);
    p.observe(arm, arm == 0 ? 1.0 : 0.0);
  }
}

}  // namespace
}  // namespace mabn
