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

// Exposure mappings and the legitimate exposure super arm set.
//
// A real super arm assigns one of K arms to every unit. An exposure mapping
// compresses (unit, real super arm, network) into one of d_s exposure labels;
// applying it to every unit yields an exposure super arm. The legitimate set
// keeps the exposure super arms that are constant within every cluster and are
// produced by at least one real super arm (a "witness").
//
// Witnesses are searched among cluster-switchback real super arms only, i.e.
// assignments where every unit of a cluster takes the same arm. Sampling a
// real super arm for a chosen exposure super arm is uniform over its witness
// pool.

#ifndef MABN_EXPOSURE_H_
#define MABN_EXPOSURE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mabn/network.h"
#include "mabn/random.h"

namespace mabn {

using ArmLabel = int;
// a_i for unit i stored at index i-1.
using RealArm = std::vector<int>;

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 2;
};

enum class MappingKind {
  kPerUnitArm,         // S(i, A, H) = a_i
  kGlobalSwitchback,   // S(i, A, H) = a_1 for every i
  kClusterIndexArm,    // S(i, A, H) = arm of the lowest unit in i's cluster
  kNeighborFractionThreshold,  // 1{treated neighbor fraction in [0, thr)}
};

const char* to_string(MappingKind kind);

class ExposureMapping {
 public:
  static ExposureMapping per_unit_arm(int arm_count);
  static ExposureMapping global_switchback(int arm_count);
  static ExposureMapping cluster_index_arm(int arm_count,
                                           const Clustering& clustering);
  // A neighbor counts as treated when its arm is nonzero. The threshold must
  // lie strictly inside (0, 1).
  static ExposureMapping neighbor_fraction_threshold(int arm_count,
                                                     Rational threshold);

  MappingKind kind() const { return kind_; }
  int arm_count() const { return arm_count_; }
  // d_s, the size of the mapping's image.
  int exposure_arm_count() const;
  Rational threshold() const { return threshold_; }

  // Lowest unit of the cluster containing `unit`; only for kClusterIndexArm.
  UnitId cluster_leader(UnitId unit) const;

 private:
  ExposureMapping(MappingKind kind, int arm_count)
      : kind_(kind), arm_count_(arm_count) {}

  MappingKind kind_;
  int arm_count_;
  Rational threshold_{};
  std::vector<UnitId> leaders_;
};

// Exposure label of one unit. Throws ParameterError for arm labels outside
// [0, K-1] or a real arm of the wrong length, and IsolatedUnitError when a
// neighbor-fraction mapping meets a unit without neighbors.
ArmLabel exposure_of(const ExposureMapping& mapping, UnitId unit,
                     std::span<const int> real_arm, const Network& network);

// Componentwise exposure_of over all units.
std::vector<ArmLabel> exposure_vector(const ExposureMapping& mapping,
                                      std::span<const int> real_arm,
                                      const Network& network);

struct ExposureSuperArm {
  std::vector<ArmLabel> per_unit;         // length N
  std::vector<ArmLabel> cluster_profile;  // length C

  friend bool operator==(const ExposureSuperArm&,
                         const ExposureSuperArm&) = default;
};

class LegitimateArmIndex {
 public:
  std::size_t size() const { return arms_.size(); }
  const std::vector<ExposureSuperArm>& arms() const { return arms_; }
  const ExposureSuperArm& arm(std::size_t index) const;
  std::span<const RealArm> witnesses(std::size_t index) const;

  // Position of `arm` in the lexicographic order. Throws UnknownArmError.
  std::size_t index_of(const ExposureSuperArm& arm) const;

  int n_units() const { return n_units_; }
  int cluster_count() const { return cluster_count_; }
  int exposure_arm_count() const { return exposure_arm_count_; }
  // Size of the searched real-arm family (K^C).
  std::uint64_t candidates_searched() const { return candidates_searched_; }

 private:
  friend LegitimateArmIndex enumerate_legitimate_arms(const ExposureMapping&,
                                                      const Network&,
                                                      const Clustering&,
                                                      std::uint64_t);

  std::vector<ExposureSuperArm> arms_;
  std::vector<std::vector<RealArm>> pools_;
  int n_units_ = 0;
  int cluster_count_ = 0;
  int exposure_arm_count_ = 0;
  std::uint64_t candidates_searched_ = 0;
};

// Upper bound on the number of cluster profiles d_s^C that will be enumerated.
inline constexpr std::uint64_t kMaxClusterProfiles = 1'000'000;

// Enumerates U_E in lexicographic cluster_profile order. Throws BudgetExceeded
// when d_s^C > kMaxClusterProfiles or K^C > witness_budget, and
// ConditionViolation when fewer than two arms survive.
LegitimateArmIndex enumerate_legitimate_arms(const ExposureMapping& mapping,
                                             const Network& network,
                                             const Clustering& clustering,
                                             std::uint64_t witness_budget);

// Uniform draw from the arm's witness pool.
const RealArm& sample_real_arm(const LegitimateArmIndex& index,
                               std::size_t arm_index, RandomStream& rng);
const RealArm& sample_real_arm(const LegitimateArmIndex& index,
                               const ExposureSuperArm& arm, RandomStream& rng);

// One cluster_profile per line, labels separated by spaces.
std::string dump_arms(const LegitimateArmIndex& index);

}  // namespace mabn

#endif  // MABN_EXPOSURE_H_
