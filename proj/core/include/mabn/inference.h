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

// Anytime-valid (asymptotic) confidence sequences for pairwise ATEs.
//
// For a pair (i, j) after t rounds:
//
//   tau_hat_bar = (1/t) sum_t' [1{S_t'=i} R_t'/pi_t'(i) - 1{S_t'=j} R_t'/pi_t'(j)]
//   V_hat       = sum_t' (1/pi_t'(i) + 1/pi_t'(j))
//   width       = sqrt( 2 (V_hat eta^2 + 1) / (t^2 eta^2)
//                       * ln( sqrt(V_hat eta^2 + 1) / delta ) )
//
// where pi are the propensities actually played (pi_mad) and ln is the natural
// logarithm.

#ifndef MABN_INFERENCE_H_
#define MABN_INFERENCE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace mabn {

struct CsParams {
  double eta = 1.0;
  double tilde_delta = 0.05;

  // Throws ParameterError unless eta > 0 and 0 < tilde_delta < 1.
  void validate() const;
};

struct ArmPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const ArmPair&, const ArmPair&) = default;
};

struct PairInferenceState {
  double sum_tau_hat = 0.0;
  double variance_proxy = 0.0;
  std::int64_t rounds = 0;
};

struct CsInterval {
  double center = 0.0;
  double width = 0.0;
  bool contains(double value) const {
    return value >= center - width && value <= center + width;
  }
};

// Single-round IPW effect estimate. Throws ParameterError when pi(i) or pi(j)
// is not strictly positive.
double ipw_increment(std::size_t selected, double reward,
                     std::span<const double> mad_probs, ArmPair pair);

void update_pair(PairInferenceState& state, double increment,
                 std::span<const double> mad_probs, ArmPair pair);

// Width formula on its own, for t >= 1.
double cs_width(double variance_proxy, std::int64_t t, const CsParams& params);

// Throws StateError when no round has been recorded.
CsInterval cs_interval(const PairInferenceState& state, const CsParams& params);

double ate_estimate(const PairInferenceState& state);

// Tracks every pair at O(n) cost per round through per-arm accumulators:
// the pair state is (ipw[i] - ipw[j], inv[i] + inv[j], t).
class InferenceTracker {
 public:
  explicit InferenceTracker(std::size_t n_arms);

  // The selected arm needs a positive propensity. Any other arm may carry a
  // propensity that underflowed to exactly 0 (possible when delta_t = 0); its
  // variance proxy, and every width involving it, is then +inf.
  void update(std::size_t selected, double reward,
              std::span<const double> mad_probs);

  PairInferenceState pair(std::size_t i, std::size_t j) const;
  std::int64_t rounds() const { return rounds_; }
  std::size_t n_arms() const { return ipw_sum_.size(); }

  // sum_t' 1{S_t'=k} R_t'/pi_t'(k).
  std::span<const double> ipw_sums() const { return ipw_sum_; }
  // sum_t' 1/pi_t'(k).
  std::span<const double> inverse_propensity_sums() const { return inv_sum_; }

 private:
  std::vector<double> ipw_sum_;
  std::vector<double> inv_sum_;
  std::int64_t rounds_ = 0;
};

// All pairs i < j in lexicographic order.
std::vector<ArmPair> all_pairs(std::size_t n_arms);

}  // namespace mabn

#endif  // MABN_INFERENCE_H_
