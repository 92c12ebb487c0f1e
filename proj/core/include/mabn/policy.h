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

// EXP3 over the legitimate exposure super arms, restarted on doubling blocks
// and mixed with uniform exploration (mixture adaptive design, MAD).
//
// Block m covers rounds [2^(m-1), 2^m - 1]. Inside a block the base policy is
//
//   pi_alg_t(S) ~ exp(eps_m * Rhat(S)),   eps_m = sqrt(ln n / (n 2^(m-1))),
//
// where Rhat(S) sums 1 - 1{S_t' = S}(1 - R_t') / pi_mad_t'(S) over the block's
// past rounds. Every arm gains the same +1 per round, so the state keeps only
// the importance-weighted loss
//
//   Lhat(S) = sum_{t'} 1{S_t' = S}(1 - R_t') / pi_mad_t'(S),
//
// with Rhat(S) = (rounds so far in block) - Lhat(S); the softmax is unchanged.
// The played distribution is
//
//   pi_mad_t(S) = delta_t / n + (1 - delta_t) pi_alg_t(S),  delta_t = t^-alpha.

#ifndef MABN_POLICY_H_
#define MABN_POLICY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mabn/random.h"

namespace mabn {

class MadSchedule {
 public:
  enum class Kind { kPowerLaw, kStandard, kUniform };

  // delta_t = t^-alpha. Throws ParameterError unless alpha is in [0, 0.5).
  static MadSchedule power_law(double alpha);
  // delta_t = 0: plain blockwise EXP3.
  static MadSchedule standard() { return MadSchedule(Kind::kStandard, 0.0); }
  // delta_t = 1: uniform sampling.
  static MadSchedule uniform() { return MadSchedule(Kind::kUniform, 0.0); }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  // "Standard", "Uniform" or "EXP3-N-CS".
  std::string algorithm_name() const;
  // Short stable label such as "exp3ncs_a0.1", "standard", "uniform".
  std::string label() const;

  friend bool operator==(const MadSchedule&, const MadSchedule&) = default;

 private:
  MadSchedule(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  Kind kind_;
  double alpha_;
};

struct BlockPosition {
  int index = 1;           // m
  std::int64_t start = 1;  // t_m
  friend bool operator==(const BlockPosition&, const BlockPosition&) = default;
};

// The doubling block containing round t (t >= 1).
BlockPosition block_of(std::int64_t t);

// Learning rate of block m. Throws ConditionViolation when n_arms < 2.
double epsilon(int m, std::size_t n_arms);

double delta_t(const MadSchedule& schedule, std::int64_t t);

struct PolicyState {
  explicit PolicyState(std::size_t n_arms);

  std::size_t n_arms() const { return cumulative_loss.size(); }

  int block_index = 0;           // 0 until the first round
  std::int64_t block_start = 0;
  std::int64_t rounds_in_block = 0;  // rounds already observed in the block
  std::vector<double> cumulative_loss;
  std::vector<double> last_alg_probs;
  std::vector<double> last_mad_probs;
};

// Moves the state to the block containing t, clearing the losses when a new
// block starts.
void advance_to_round(PolicyState& state, std::int64_t t);

// EXP3 probabilities for round t. The state must already be in t's block.
std::vector<double> alg_probabilities(const PolicyState& state, std::int64_t t);

// delta / n + (1 - delta) * alg. Throws ParameterError if delta is outside
// [0, 1].
std::vector<double> mad_probabilities(std::span<const double> alg_probs,
                                      double delta, std::size_t n_arms);

// Inverse-CDF categorical draw over the fixed arm order.
std::size_t select_arm(std::span<const double> probs, RandomStream& rng);

// Adds (1 - reward) / mad_prob_selected (optionally capped at
// importance_clip when it is positive) to the selected arm's loss.
// Throws ParameterError for a nonpositive probability or a reward outside
// [0, 1].
void update_estimator(PolicyState& state, std::size_t selected, double reward,
                      double mad_prob_selected, double importance_clip = 0.0);

// Rhat for logging: rounds_in_block - Lhat.
std::vector<double> estimated_rewards(const PolicyState& state);

// Per-round driver tying the pieces together.
class Exp3NCsPolicy {
 public:
  Exp3NCsPolicy(std::size_t n_arms, MadSchedule schedule,
                double importance_clip = 0.0);

  // Computes pi_alg and pi_mad for round t. Rounds must be consecutive
  // starting at 1.
  void begin_round(std::int64_t t);

  std::size_t select(RandomStream& rng) const;

  // Feeds back the reward of the arm played in the current round.
  void observe(std::size_t arm, double reward);

  const PolicyState& state() const { return state_; }
  std::span<const double> alg_probs() const { return state_.last_alg_probs; }
  std::span<const double> mad_probs() const { return state_.last_mad_probs; }
  double current_delta() const { return delta_; }
  std::int64_t current_round() const { return t_; }
  const MadSchedule& schedule() const { return schedule_; }

 private:
  PolicyState state_;
  MadSchedule schedule_;
  double importance_clip_;
  std::int64_t t_ = 0;
  double delta_ = 1.0;
  bool awaiting_feedback_ = false;
};

}  // namespace mabn

#endif  // MABN_POLICY_H_
