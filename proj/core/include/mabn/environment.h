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

// Design-based reward instances over the legitimate exposure super arms.
//
// Three generators are available:
//  * kBernoulliDrift: every `resample_period` rounds each arm's mean is drawn
//    independently from U[0, 1]; rewards are Bernoulli at the exposure level.
//  * kUnitFixedMeans: fixed unit-level potential outcomes f_i(A); the arm mean
//    averages them over units and over the arm's witness pool, and the
//    realized reward is (1/N) sum_i f_i(A_t) for the sampled witness A_t.
//  * kAdversarialTrace: an explicit per-round table of arm means (cycled when
//    shorter than the run); rewards are Bernoulli at the exposure level.
//
// Ground-truth means are materialized lazily round by round and kept for the
// whole run, so regret and true ATEs are exact.

#ifndef MABN_ENVIRONMENT_H_
#define MABN_ENVIRONMENT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mabn/exposure.h"
#include "mabn/network.h"
#include "mabn/random.h"

namespace mabn {

// f_i(A) = clamp(base_i + own_effect_i * 1{a_i != 0}
//                + spillover_i * (treated neighbor fraction of i), 0, 1).
// Isolated units contribute a zero neighbor fraction.
struct UnitLinearOutcomes {
  std::vector<double> base;
  std::vector<double> own_effect;
  std::vector<double> spillover;
};

// f_i(A) for unit i (1-indexed) and real super arm A. Must return a value in
// [0, 1].
using UnitOutcomeFn = std::function<double(UnitId, std::span<const int>)>;

struct EnvironmentSpec {
  enum class Kind { kBernoulliDrift, kUnitFixedMeans, kAdversarialTrace };

  Kind kind = Kind::kBernoulliDrift;
  int resample_period = 1000;                  // kBernoulliDrift
  UnitLinearOutcomes unit_outcomes;            // kUnitFixedMeans
  std::vector<std::vector<double>> trace;      // kAdversarialTrace, row = round
  std::uint64_t seed = 0;
};

const char* to_string(EnvironmentSpec::Kind kind);

// Evaluates the linear unit outcome model.
double linear_unit_outcome(const UnitLinearOutcomes& model,
                           const Network& network, UnitId unit,
                           std::span<const int> real_arm);

class Environment {
 public:
  // The index and network must outlive the environment.
  Environment(const EnvironmentSpec& spec, const LegitimateArmIndex& index,
              const Network& network);

  // Unit-level environment with arbitrary fixed potential outcomes.
  Environment(UnitOutcomeFn outcomes, const LegitimateArmIndex& index,
              const Network& network);

  std::size_t n_arms() const { return n_arms_; }
  EnvironmentSpec::Kind kind() const { return kind_; }

  // Y_t(S). Throws UnknownArmError for an arm outside U_E and StateError for
  // t < 1.
  double expected_reward(std::int64_t t, std::size_t arm);
  double expected_reward(std::int64_t t, const ExposureSuperArm& arm);

  // All arm means for round t.
  std::span<const double> means_at(std::int64_t t);

  // sum_{t' <= t} Y_{t'}(S) for every arm.
  std::span<const double> cumulative_means(std::int64_t t);

  // R_t(S_t). `real_arm` must be a witness of `arm`.
  double realize_reward(std::int64_t t, std::size_t arm,
                        std::span<const int> real_arm, RandomStream& rng);

  // (1/t) sum_{t' <= t} (Y_{t'}(S_i) - Y_{t'}(S_j)).
  double true_ate(std::int64_t t, std::size_t arm_i, std::size_t arm_j);

  std::int64_t materialized_rounds() const {
    return static_cast<std::int64_t>(means_.size() / n_arms_);
  }

 private:
  void materialize(std::int64_t t);
  void check_arm(std::size_t arm) const;
  void fill_round(std::int64_t t, std::span<double> out);

  const LegitimateArmIndex* index_;
  const Network* network_;
  EnvironmentSpec::Kind kind_;
  std::size_t n_arms_;
  int resample_period_ = 1;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<double>> trace_;
  UnitOutcomeFn outcomes_;
  std::vector<double> stationary_means_;  // kUnitFixedMeans
  std::vector<double> means_;       // round-major, n_arms_ per round
  std::vector<double> cumulative_;  // same layout, prefix sums over rounds
};

}  // namespace mabn

#endif  // MABN_ENVIRONMENT_H_
