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

#include "mabn/exposure.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "mabn/errors.h"

namespace mabn {
namespace {

void check_arm_count(int arm_count) {
  if (arm_count < 1) {
    throw ParameterError("arm count must be positive, got " +
                         std::to_string(arm_count));
  }
}

// base^exp, or limit + 1 once the product passes limit.
std::uint64_t saturating_pow(std::uint64_t base, int exp, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

}  // namespace

const char* to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::kPerUnitArm:
      return "per_unit_arm";
    case MappingKind::kGlobalSwitchback:
      return "global_switchback";
    case MappingKind::kClusterIndexArm:
      return "cluster_index_arm";
    case MappingKind::kNeighborFractionThreshold:
      return "neighbor_fraction_threshold";
  }
  return "unknown";
}

ExposureMapping ExposureMapping::per_unit_arm(int arm_count) {
  check_arm_count(arm_count);
  return ExposureMapping(MappingKind::kPerUnitArm, arm_count);
}

ExposureMapping ExposureMapping::global_switchback(int arm_count) {
  check_arm_count(arm_count);
  return ExposureMapping(MappingKind::kGlobalSwitchback, arm_count);
}

ExposureMapping ExposureMapping::cluster_index_arm(
    int arm_count, const Clustering& clustering) {
  check_arm_count(arm_count);
  ExposureMapping m(MappingKind::kClusterIndexArm, arm_count);
  m.leaders_.resize(clustering.n_units());
  for (UnitId u = 1; u <= clustering.n_units(); ++u) {
    m.leaders_[u - 1] = clustering.clusters()[clustering.cluster_of(u) - 1][0];
  }
  return m;
}

ExposureMapping ExposureMapping::neighbor_fraction_threshold(
    int arm_count, Rational threshold) {
  check_arm_count(arm_count);
  if (threshold.den <= 0 || threshold.num <= 0 ||
      threshold.num >= threshold.den) {
    throw ParameterError("threshold must be a rational in (0, 1), got " +
                         std::to_string(threshold.num) + "/" +
                         std::to_string(threshold.den));
  }
  ExposureMapping m(MappingKind::kNeighborFractionThreshold, arm_count);
  m.threshold_ = threshold;
  return m;
}

int ExposureMapping::exposure_arm_count() const {
  return kind_ == MappingKind::kNeighborFractionThreshold ? 2 : arm_count_;
}

UnitId ExposureMapping::cluster_leader(UnitId unit) const {
  if (kind_ != MappingKind::kClusterIndexArm) {
    throw ParameterError("cluster_leader requires a cluster_index_arm mapping");
  }
  if (unit < 1 || unit > static_cast<int>(leaders_.size())) {
    throw StructureError("unit " + std::to_string(unit) +
                         " outside the mapping's clustering");
  }
  return leaders_[unit - 1];
}

ArmLabel exposure_of(const ExposureMapping& mapping, UnitId unit,
                     std::span<const int> real_arm, const Network& network) {
  const int n = network.n_units();
  if (static_cast<int>(real_arm.size()) != n) {
    throw ParameterError("real arm has length " +
                         std::to_string(real_arm.size()) + ", expected " +
                         std::to_string(n));
  }
  if (unit < 1 || unit > n) {
    throw StructureError("unit " + std::to_string(unit) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  auto arm_at = [&](UnitId u) {
    const int a = real_arm[u - 1];
    if (a < 0 || a >= mapping.arm_count()) {
      throw ParameterError("arm label " + std::to_string(a) + " of unit " +
                           std::to_string(u) + " outside [0, " +
                           std::to_string(mapping.arm_count() - 1) + "]");
    }
    return a;
  };
  switch (mapping.kind()) {
    case MappingKind::kPerUnitArm:
      return arm_at(unit);
    case MappingKind::kGlobalSwitchback:
      return arm_at(1);
    case MappingKind::kClusterIndexArm:
      return arm_at(mapping.cluster_leader(unit));
    case MappingKind::kNeighborFractionThreshold: {
      const auto nbrs = network.neighbors(unit);
      if (nbrs.empty()) {
        throw IsolatedUnitError("unit " + std::to_string(unit) +
                                " has no neighbors");
      }
      std::int64_t treated = 0;
      for (UnitId j : nbrs) treated += arm_at(j) != 0 ? 1 : 0;
      const std::int64_t degree = static_cast<std::int64_t>(nbrs.size());
      // treated/degree < num/den, exact in integers.
      const Rational thr = mapping.threshold();
      return treated * thr.den < thr.num * degree ? 1 : 0;
    }
  }
  throw ParameterError("unknown mapping kind");
}

std::vector<ArmLabel> exposure_vector(const ExposureMapping& mapping,
                                      std::span<const int> real_arm,
                                      const Network& network) {
  std::vector<ArmLabel> out(network.n_units());
  for (UnitId u = 1; u <= network.n_units(); ++u) {
    out[u - 1] = exposure_of(mapping, u, real_arm, network);
  }
  return out;
}

const ExposureSuperArm& LegitimateArmIndex::arm(std::size_t index) const {
  if (index >= arms_.size()) {
    throw UnknownArmError("arm index " + std::to_string(index) +
                          " outside [0, " + std::to_string(arms_.size()) + ")");
  }
  return arms_[index];
}

std::span<const RealArm> LegitimateArmIndex::witnesses(
    std::size_t index) const {
  arm(index);
  return pools_[index];
}

std::size_t LegitimateArmIndex::index_of(const ExposureSuperArm& arm) const {
  auto it = std::lower_bound(
      arms_.begin(), arms_.end(), arm.cluster_profile,
      [](const ExposureSuperArm& a, const std::vector<ArmLabel>& profile) {
        return a.cluster_profile < profile;
      });
  if (it == arms_.end() || !(*it == arm)) {
    throw UnknownArmError("exposure super arm is not in the legitimate set");
  }
  return static_cast<std::size_t>(it - arms_.begin());
}

LegitimateArmIndex enumerate_legitimate_arms(const ExposureMapping& mapping,
                                             const Network& network,
                                             const Clustering& clustering,
                                             std::uint64_t witness_budget) {
  if (witness_budget < 1) throw ParameterError("witness_budget must be >= 1");
  if (clustering.n_units() != network.n_units()) {
    throw StructureError("clustering covers " +
                         std::to_string(clustering.n_units()) +
                         " units but the network has " +
                         std::to_string(network.n_units()));
  }
  const int c = clustering.cluster_count();
  const int ds = mapping.exposure_arm_count();
  const int k = mapping.arm_count();
  const std::uint64_t profiles = saturating_pow(ds, c, kMaxClusterProfiles);
  if (profiles > kMaxClusterProfiles) {
    throw BudgetExceeded("d_s^C = " + std::to_string(ds) + "^" +
                         std::to_string(c) + " exceeds " +
                         std::to_string(kMaxClusterProfiles) + " profiles");
  }
  const std::uint64_t candidates = saturating_pow(k, c, witness_budget);
  if (candidates > witness_budget) {
    throw BudgetExceeded("K^C = " + std::to_string(k) + "^" +
                         std::to_string(c) + " exceeds the witness budget " +
                         std::to_string(witness_budget));
  }

  // Keyed by the profile's base-d_s value with cluster 1 most significant, so
  // map order is lexicographic order.
  std::map<std::uint64_t, std::vector<RealArm>> pools;
  std::vector<int> cluster_arms(c, 0);
  RealArm real(network.n_units());
  for (std::uint64_t code = 0; code < candidates; ++code) {
    std::uint64_t rest = code;
    for (int q = c - 1; q >= 0; --q) {
      cluster_arms[q] = static_cast<int>(rest % k);
      rest /= k;
    }
    for (UnitId u = 1; u <= network.n_units(); ++u) {
      real[u - 1] = cluster_arms[clustering.cluster_of(u) - 1];
    }
    const auto exposures = exposure_vector(mapping, real, network);
    bool switchback = true;
    std::uint64_t key = 0;
    for (int q = 0; q < c && switchback; ++q) {
      const auto& members = clustering.clusters()[q];
      const ArmLabel label = exposures[members[0] - 1];
      for (UnitId u : members) {
        if (exposures[u - 1] != label) {
          switchback = false;
          break;
        }
      }
      key = key * ds + static_cast<std::uint64_t>(label);
    }
    if (switchback) pools[key].push_back(real);
  }

  LegitimateArmIndex index;
  index.n_units_ = network.n_units();
  index.cluster_count_ = c;
  index.exposure_arm_count_ = ds;
  index.candidates_searched_ = candidates;
  for (auto& [key, pool] : pools) {
    ExposureSuperArm arm;
    arm.cluster_profile.resize(c);
    std::uint64_t rest = key;
    for (int q = c - 1; q >= 0; --q) {
      arm.cluster_profile[q] = static_cast<ArmLabel>(rest % ds);
      rest /= ds;
    }
    arm.per_unit.resize(network.n_units());
    for (UnitId u = 1; u <= network.n_units(); ++u) {
      arm.per_unit[u - 1] = arm.cluster_profile[clustering.cluster_of(u) - 1];
    }
    index.arms_.push_back(std::move(arm));
    index.pools_.push_back(std::move(pool));
  }
  if (index.arms_.size() < 2) {
    throw ConditionViolation("legitimate set has " +
                             std::to_string(index.arms_.size()) +
                             " exposure super arm(s); at least 2 are required");
  }
  return index;
}

const RealArm& sample_real_arm(const LegitimateArmIndex& index,
                               std::size_t arm_index, RandomStream& rng) {
  const auto pool = index.witnesses(arm_index);
  if (pool.size() == 1) return pool[0];
  return pool[uniform_index(rng, pool.size())];
}

const RealArm& sample_real_arm(const LegitimateArmIndex& index,
                               const ExposureSuperArm& arm, RandomStream& rng) {
  return sample_real_arm(index, index.index_of(arm), rng);
}

std::string dump_arms(const LegitimateArmIndex& index) {
  std::ostringstream out;
  for (const auto& arm : index.arms()) {
    for (std::size_t q = 0; q < arm.cluster_profile.size(); ++q) {
      if (q) out << ' ';
      out << arm.cluster_profile[q];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mabn
