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

#include "mabn/environment.h"

#include <algorithm>
#include <cassert>
#include <string>

#include "mabn/errors.h"

namespace mabn {
namespace {

void check_unit_interval(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(what + " = " + std::to_string(v) +
                         " is outside [0, 1]");
  }
}

}  // namespace

const char* to_string(EnvironmentSpec::Kind kind) {
  switch (kind) {
    case EnvironmentSpec::Kind::kBernoulliDrift:
      return "bernoulli_drift";
    case EnvironmentSpec::Kind::kUnitFixedMeans:
      return "unit_fixed_means";
    case EnvironmentSpec::Kind::kAdversarialTrace:
      return "adversarial_trace";
  }
  return "unknown";
}

double linear_unit_outcome(const UnitLinearOutcomes& model,
                           const Network& network, UnitId unit,
                           std::span<const int> real_arm) {
  const std::size_t i = static_cast<std::size_t>(unit - 1);
  double value = model.base[i];
  if (real_arm[i] != 0) value += model.own_effect[i];
  const auto nbrs = network.neighbors(unit);
  if (!nbrs.empty() && model.spillover[i] != 0.0) {
    int treated = 0;
    for (UnitId j : nbrs) treated += real_arm[j - 1] != 0 ? 1 : 0;
    value += model.spillover[i] * treated / static_cast<double>(nbrs.size());
  }
  return std::clamp(value, 0.0, 1.0);
}

Environment::Environment(const EnvironmentSpec& spec,
                         const LegitimateArmIndex& index,
                         const Network& network)
    : index_(&index),
      network_(&network),
      kind_(spec.kind),
      n_arms_(index.size()),
      resample_period_(spec.resample_period),
      seed_(spec.seed) {
  switch (kind_) {
    case EnvironmentSpec::Kind::kBernoulliDrift:
      if (resample_period_ < 1) {
        throw ParameterError("resample_period must be positive");
      }
      break;
    case EnvironmentSpec::Kind::kAdversarialTrace:
      if (spec.trace.empty()) throw ParameterError("trace has no rounds");
      for (std::size_t r = 0; r < spec.trace.size(); ++r) {
        if (spec.trace[r].size() != n_arms_) {
          throw ParameterError("trace row " + std::to_string(r) + " has " +
                               std::to_string(spec.trace[r].size()) +
                               " means, expected " + std::to_string(n_arms_));
        }
        for (double v : spec.trace[r]) check_unit_interval(v, "trace mean");
      }
      trace_ = spec.trace;
      break;
    case EnvironmentSpec::Kind::kUnitFixedMeans: {
      const auto& m = spec.unit_outcomes;
      const std::size_t n = static_cast<std::size_t>(network.n_units());
      if (m.base.size() != n || m.own_effect.size() != n ||
          m.spillover.size() != n) {
        throw ParameterError("unit outcome vectors must have length " +
                             std::to_string(n));
      }
      outcomes_ = [model = m, net = &network](UnitId u, std::span<const int> a) {
        return linear_unit_outcome(model, *net, u, a);
      };
      break;
    }
  }
  if (kind_ == EnvironmentSpec::Kind::kUnitFixedMeans) {
    // Delegate to the callable path for the stationary means.
    Environment tmp(outcomes_, index, network);
    stationary_means_ = tmp.stationary_means_;
  }
}

Environment::Environment(UnitOutcomeFn outcomes,
                         const LegitimateArmIndex& index,
                         const Network& network)
    : index_(&index),
      network_(&network),
      kind_(EnvironmentSpec::Kind::kUnitFixedMeans),
      n_arms_(index.size()),
      outcomes_(std::move(outcomes)) {
  const int n = network.n_units();
  stationary_means_.assign(n_arms_, 0.0);
  for (std::size_t s = 0; s < n_arms_; ++s) {
    const auto pool = index.witnesses(s);
    double total = 0.0;
    for (const RealArm& a : pool) {
      double unit_sum = 0.0;
      for (UnitId u = 1; u <= n; ++u) {
        const double y = outcomes_(u, a);
        check_unit_interval(y, "unit outcome");
        unit_sum += y;
      }
      total += unit_sum / n;
    }
    stationary_means_[s] = total / static_cast<double>(pool.size());
  }
}

void Environment::check_arm(std::size_t arm) const {
  if (arm >= n_arms_) {
    throw UnknownArmError("arm index " + std::to_string(arm) +
                          " outside [0, " + std::to_string(n_arms_) + ")");
  }
}

void Environment::fill_round(std::int64_t t, std::span<double> out) {
  switch (kind_) {
    case EnvironmentSpec::Kind::kBernoulliDrift: {
      const std::uint64_t block =
          static_cast<std::uint64_t>((t - 1) / resample_period_);
      // Means depend only on (seed, block), never on query order.
      RandomStream rng = make_stream({seed_, block});
      for (double& v : out) v = uniform01(rng);
      break;
    }
    case EnvironmentSpec::Kind::kUnitFixedMeans:
      std::copy(stationary_means_.begin(), stationary_means_.end(), out.begin());
      break;
    case EnvironmentSpec::Kind::kAdversarialTrace: {
      const auto& row = trace_[static_cast<std::size_t>(t - 1) % trace_.size()];
      std::copy(row.begin(), row.end(), out.begin());
      break;
    }
  }
}

void Environment::materialize(std::int64_t t) {
  if (t < 1) throw StateError("round index must be >= 1");
  std::int64_t have = materialized_rounds();
  if (t <= have) return;
  means_.resize(static_cast<std::size_t>(t) * n_arms_);
  cumulative_.resize(means_.size());
  for (std::int64_t r = have + 1; r <= t; ++r) {
    const std::size_t off = static_cast<std::size_t>(r - 1) * n_arms_;
    std::span<double> row(means_.data() + off, n_arms_);
    const bool same_block =
        kind_ == EnvironmentSpec::Kind::kBernoulliDrift && r > 1 &&
        (r - 1) % resample_period_ != 0;
    if (same_block) {
      std::copy_n(means_.data() + off - n_arms_, n_arms_, row.begin());
    } else {
      fill_round(r, row);
    }
    for (std::size_t s = 0; s < n_arms_; ++s) {
      assert(row[s] >= 0.0 && row[s] <= 1.0);
      cumulative_[off + s] = (r > 1 ? cumulative_[off + s - n_arms_] : 0.0) + row[s];
    }
  }
}

double Environment::expected_reward(std::int64_t t, std::size_t arm) {
  check_arm(arm);
  materialize(t);
  return means_[static_cast<std::size_t>(t - 1) * n_arms_ + arm];
}

double Environment::expected_reward(std::int64_t t,
                                    const ExposureSuperArm& arm) {
  return expected_reward(t, index_->index_of(arm));
}

std::span<const double> Environment::means_at(std::int64_t t) {
  materialize(t);
  return {means_.data() + static_cast<std::size_t>(t - 1) * n_arms_, n_arms_};
}

std::span<const double> Environment::cumulative_means(std::int64_t t) {
  materialize(t);
  return {cumulative_.data() + static_cast<std::size_t>(t - 1) * n_arms_,
          n_arms_};
}

double Environment::realize_reward(std::int64_t t, std::size_t arm,
                                   std::span<const int> real_arm,
                                   RandomStream& rng) {
  const double mean = expected_reward(t, arm);
  double reward = 0.0;
  if (kind_ == EnvironmentSpec::Kind::kUnitFixedMeans) {
    const int n = network_->n_units();
    for (UnitId u = 1; u <= n; ++u) reward += outcomes_(u, real_arm);
    reward /= n;
  } else {
    reward = bernoulli(rng, mean);
  }
  assert(reward >= 0.0 && reward <= 1.0);
  return reward;
}

double Environment::true_ate(std::int64_t t, std::size_t arm_i,
                             std::size_t arm_j) {
  check_arm(arm_i);
  check_arm(arm_j);
  if (arm_i == arm_j) return 0.0;
  const auto cum = cumulative_means(t);
  return (cum[arm_i] - cum[arm_j]) / static_cast<double>(t);
}

}  // namespace mabn
