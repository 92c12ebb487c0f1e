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

#include "mabn/policy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "mabn/errors.h"

namespace mabn {

MadSchedule MadSchedule::power_law(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw ParameterError("alpha must lie in [0, 0.5), got " +
                         std::to_string(alpha));
  }
  return MadSchedule(Kind::kPowerLaw, alpha);
}

std::string MadSchedule::algorithm_name() const {
  switch (kind_) {
    case Kind::kPowerLaw:
      return "EXP3-N-CS";
    case Kind::kStandard:
      return "Standard";
    case Kind::kUniform:
      return "Uniform";
  }
  return "unknown";
}

std::string MadSchedule::label() const {
  switch (kind_) {
    case Kind::kPowerLaw: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "exp3ncs_a%g", alpha_);
      return buf;
    }
    case Kind::kStandard:
      return "standard";
    case Kind::kUniform:
      return "uniform";
  }
  return "unknown";
}

BlockPosition block_of(std::int64_t t) {
  if (t < 1) throw ParameterError("round index must be >= 1");
  const auto u = static_cast<std::uint64_t>(t);
  const int m = std::bit_width(u);  // floor(log2 t) + 1
  return {m, static_cast<std::int64_t>(std::uint64_t{1} << (m - 1))};
}

double epsilon(int m, std::size_t n_arms) {
  if (n_arms < 2) {
    throw ConditionViolation("EXP3 needs at least 2 arms, got " +
                             std::to_string(n_arms));
  }
  if (m < 1) throw ParameterError("block index must be >= 1");
  const double n = static_cast<double>(n_arms);
  return std::sqrt(std::log(n) / (n * std::ldexp(1.0, m - 1)));
}

double delta_t(const MadSchedule& schedule, std::int64_t t) {
  if (t < 1) throw ParameterError("round index must be >= 1");
  switch (schedule.kind()) {
    case MadSchedule::Kind::kPowerLaw:
      return std::pow(static_cast<double>(t), -schedule.alpha());
    case MadSchedule::Kind::kStandard:
      return 0.0;
    case MadSchedule::Kind::kUniform:
      return 1.0;
  }
  return 1.0;
}

PolicyState::PolicyState(std::size_t n_arms)
    : cumulative_loss(n_arms, 0.0),
      last_alg_probs(n_arms, 1.0 / static_cast<double>(n_arms)),
      last_mad_probs(n_arms, 1.0 / static_cast<double>(n_arms)) {}

void advance_to_round(PolicyState& state, std::int64_t t) {
  const BlockPosition pos = block_of(t);
  if (pos.index != state.block_index) {
    state.block_index = pos.index;
    state.block_start = pos.start;
    state.rounds_in_block = 0;
    std::fill(state.cumulative_loss.begin(), state.cumulative_loss.end(), 0.0);
  }
}

std::vector<double> alg_probabilities(const PolicyState& state,
                                      std::int64_t t) {
  const std::size_t n = state.n_arms();
  const BlockPosition pos = block_of(t);
  if (pos.index != state.block_index) {
    throw StateError("policy state is in block " +
                     std::to_string(state.block_index) + " but round " +
                     std::to_string(t) + " is in block " +
                     std::to_string(pos.index));
  }
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  if (t == pos.start) return probs;

  const double eps = epsilon(pos.index, n);
  // softmax(eps * Rhat) == softmax(-eps * Lhat); shift by the smallest loss.
  const double min_loss =
      *std::min_element(state.cumulative_loss.begin(), state.cumulative_loss.end());
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    probs[s] = std::exp(-eps * (state.cumulative_loss[s] - min_loss));
    total += probs[s];
  }
  if (!std::isfinite(total) || total <= 0.0) {
    throw NumericalError("softmax normalizer is not finite at round " +
                         std::to_string(t));
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<double> mad_probabilities(std::span<const double> alg_probs,
                                      double delta, std::size_t n_arms) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ParameterError("delta must lie in [0, 1], got " +
                         std::to_string(delta));
  }
  if (alg_probs.size() != n_arms) {
    throw ParameterError("probability vector has " +
                         std::to_string(alg_probs.size()) + " entries, expected " +
                         std::to_string(n_arms));
  }
  const double floor = delta / static_cast<double>(n_arms);
  std::vector<double> out(n_arms);
  for (std::size_t s = 0; s < n_arms; ++s) {
    out[s] = floor + (1.0 - delta) * alg_probs[s];
  }
  return out;
}

std::size_t select_arm(std::span<const double> probs, RandomStream& rng) {
  const double u = uniform01(rng);
  double cdf = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] <= 0.0) continue;
    cdf += probs[s];
    last_positive = s;
    if (u < cdf) return s;
  }
  // Rounding left the cdf just below u.
  return last_positive;
}

void update_estimator(PolicyState& state, std::size_t selected, double reward,
                      double mad_prob_selected, double importance_clip) {
  if (selected >= state.n_arms()) {
    throw ParameterError("selected arm " + std::to_string(selected) +
                         " out of range");
  }
  if (!(mad_prob_selected > 0.0)) {
    throw ParameterError("selected arm has zero probability");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw ParameterError("reward " + std::to_string(reward) +
                         " outside [0, 1]");
  }
  double weight = 1.0 / mad_prob_selected;
  if (importance_clip > 0.0) weight = std::min(weight, importance_clip);
  state.cumulative_loss[selected] += (1.0 - reward) * weight;
  if (!std::isfinite(state.cumulative_loss[selected])) {
    throw NumericalError("cumulative loss overflowed");
  }
  ++state.rounds_in_block;
}

std::vector<double> estimated_rewards(const PolicyState& state) {
  std::vector<double> out(state.n_arms());
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[s] = static_cast<double>(state.rounds_in_block) - state.cumulative_loss[s];
  }
  return out;
}

Exp3NCsPolicy::Exp3NCsPolicy(std::size_t n_arms, MadSchedule schedule,
                             double importance_clip)
    : state_(n_arms), schedule_(schedule), importance_clip_(importance_clip) {
  if (n_arms < 2) {
    throw ConditionViolation("EXP3-N-CS needs at least 2 arms, got " +
                             std::to_string(n_arms));
  }
}

void Exp3NCsPolicy::begin_round(std::int64_t t) {
  if (t != t_ + 1 || awaiting_feedback_) {
    throw StateError("rounds must be consecutive with feedback in between; "
                     "expected round " + std::to_string(t_ + 1));
  }
  t_ = t;
  advance_to_round(state_, t);
  state_.last_alg_probs = alg_probabilities(state_, t);
  delta_ = delta_t(schedule_, t);
  state_.last_mad_probs =
      mad_probabilities(state_.last_alg_probs, delta_, state_.n_arms());
  awaiting_feedback_ = true;
}

std::size_t Exp3NCsPolicy::select(RandomStream& rng) const {
  return select_arm(state_.last_mad_probs, rng);
}

void Exp3NCsPolicy::observe(std::size_t arm, double reward) {
  if (!awaiting_feedback_) throw StateError("observe called before begin_round");
  update_estimator(state_, arm, reward, state_.last_mad_probs.at(arm),
                   importance_clip_);
  awaiting_feedback_ = false;
}

}  // namespace mabn
