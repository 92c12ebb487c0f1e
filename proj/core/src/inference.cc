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

#include "mabn/inference.h"

#include <cmath>
#include <limits>
#include <string>

#include "mabn/errors.h"

namespace mabn {
namespace {

void check_propensity(std::span<const double> probs, std::size_t arm) {
  if (arm >= probs.size()) {
    throw ParameterError("arm " + std::to_string(arm) + " out of range");
  }
  if (!(probs[arm] > 0.0)) {
    throw ParameterError("zero propensity for arm " + std::to_string(arm));
  }
}

}  // namespace

void CsParams::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("eta must be positive");
  }
  if (!(tilde_delta > 0.0 && tilde_delta < 1.0)) {
    throw ParameterError("confidence parameter must lie in (0, 1)");
  }
}

double ipw_increment(std::size_t selected, double reward,
                     std::span<const double> mad_probs, ArmPair pair) {
  check_propensity(mad_probs, pair.i);
  check_propensity(mad_probs, pair.j);
  double out = 0.0;
  if (selected == pair.i) out += reward / mad_probs[pair.i];
  if (selected == pair.j) out -= reward / mad_probs[pair.j];
  return out;
}

void update_pair(PairInferenceState& state, double increment,
                 std::span<const double> mad_probs, ArmPair pair) {
  check_propensity(mad_probs, pair.i);
  check_propensity(mad_probs, pair.j);
  state.sum_tau_hat += increment;
  state.variance_proxy += 1.0 / mad_probs[pair.i] + 1.0 / mad_probs[pair.j];
  ++state.rounds;
}

double cs_width(double variance_proxy, std::int64_t t, const CsParams& params) {
  if (t < 1) throw StateError("confidence sequence needs at least one round");
  const double eta2 = params.eta * params.eta;
  const double scaled = variance_proxy * eta2 + 1.0;
  const double td = static_cast<double>(t);
  return std::sqrt(2.0 * scaled / (td * td * eta2) *
                   std::log(std::sqrt(scaled) / params.tilde_delta));
}

CsInterval cs_interval(const PairInferenceState& state, const CsParams& params) {
  return {ate_estimate(state), cs_width(state.variance_proxy, state.rounds, params)};
}

double ate_estimate(const PairInferenceState& state) {
  if (state.rounds < 1) throw StateError("ATE estimate needs at least one round");
  return state.sum_tau_hat / static_cast<double>(state.rounds);
}

InferenceTracker::InferenceTracker(std::size_t n_arms)
    : ipw_sum_(n_arms, 0.0), inv_sum_(n_arms, 0.0) {}

void InferenceTracker::update(std::size_t selected, double reward,
                              std::span<const double> mad_probs) {
  if (mad_probs.size() != ipw_sum_.size()) {
    throw ParameterError("propensity vector has the wrong length");
  }
  check_propensity(mad_probs, selected);
  for (std::size_t k = 0; k < mad_probs.size(); ++k) {
    if (mad_probs[k] < 0.0 || std::isnan(mad_probs[k])) {
      throw ParameterError("invalid propensity for arm " + std::to_string(k));
    }
    // An underflowed propensity makes the variance proxy infinite.
    inv_sum_[k] += mad_probs[k] > 0.0 ? 1.0 / mad_probs[k]
                                      : std::numeric_limits<double>::infinity();
  }
  ipw_sum_[selected] += reward / mad_probs[selected];
  ++rounds_;
}

PairInferenceState InferenceTracker::pair(std::size_t i, std::size_t j) const {
  if (i >= ipw_sum_.size() || j >= ipw_sum_.size()) {
    throw StateError("pair (" + std::to_string(i) + "," + std::to_string(j) +
                     ") is not tracked");
  }
  PairInferenceState s;
  s.rounds = rounds_;
  if (i == j) {
    s.variance_proxy = 2.0 * inv_sum_[i];
    return s;
  }
  s.sum_tau_hat = ipw_sum_[i] - ipw_sum_[j];
  s.variance_proxy = inv_sum_[i] + inv_sum_[j];
  return s;
}

std::vector<ArmPair> all_pairs(std::size_t n_arms) {
  std::vector<ArmPair> out;
  out.reserve(n_arms * (n_arms - 1) / 2);
  for (std::size_t i = 0; i < n_arms; ++i) {
    for (std::size_t j = i + 1; j < n_arms; ++j) out.push_back({i, j});
  }
  return out;
}

}  // namespace mabn
