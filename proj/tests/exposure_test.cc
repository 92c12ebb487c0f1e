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
#include <map>
#include <set>
#include <vector>

#include "mabn/config.h"
#include "mabn/errors.h"
#include "mabn/exposure.h"
#include "mabn/harness.h"
#include "mabn/random.h"
#include "support.h"

namespace mabn {
namespace {

using testing::Design;
using testing::fix_a;
using testing::fix_b;
using testing::make_design;

// Independent reimplementation of the threshold exposure: a unit is exposed
// when fewer than half of its neighbors are treated.
int oracle_threshold_exposure(const Network& net, UnitId u, const RealArm& a) {
  int treated = 0;
  const auto nbrs = net.neighbors(u);
  for (UnitId j : nbrs) treated += a[j - 1] != 0;
  return 2 * treated < static_cast<int>(nbrs.size()) ? 1 : 0;
}

// Brute force over every cluster-switchback assignment: returns the
// cluster-constant exposure profiles and their witness pools.
std::map<std::vector<int>, std::set<RealArm>> oracle_pools(const Design& d) {
  const int c = d.clustering.cluster_count();
  const int n = d.network.n_units();
  const int k = d.mapping.arm_count();
  std::map<std::vector<int>, std::set<RealArm>> out;
  int total = 1;
  for (int q = 0; q < c; ++q) total *= k;
  for (int code = 0; code < total; ++code) {
    std::vector<int> per_cluster(c);
    int rest = code;
    for (int q = 0; q < c; ++q) {
      per_cluster[q] = rest % k;
      rest /= k;
    }
    RealArm a(n);
    for (int q = 0; q < c; ++q) {
      for (UnitId u : d.clustering.clusters()[q]) a[u - 1] = per_cluster[q];
    }
    std::vector<int> exposure(n);
    for (UnitId u = 1; u <= n; ++u) {
      exposure[u - 1] = d.mapping.kind() == MappingKind::kNeighborFractionThreshold
                            ? oracle_threshold_exposure(d.network, u, a)
                            : a[u - 1];
    }
    std::vector<int> profile;
    bool constant = true;
    for (const auto& members : d.clustering.clusters()) {
      for (UnitId u : members) constant &= exposure[u - 1] == exposure[members[0] - 1];
      profile.push_back(exposure[members[0] - 1]);
    }
    if (constant) out[profile].insert(a);
  }
  return out;
}

TEST(ExposureTest, PerUnitReturnsOwnArm) {
  const Network net = build_network(4, {});
  const auto m = ExposureMapping::per_unit_arm(2);
  const RealArm a = {0, 1, 0, 1};
  EXPECT_EQ(exposure_of(m, 2, a, net), 1);
  EXPECT_EQ(exposure_vector(m, RealArm{1, 1, 0, 0}, net), (std::vector<int>{1, 1, 0, 0}));
}

TEST(ExposureTest, ThresholdOneThirdIsExposed) {
  const Network net = build_network(4, std::vector<std::pair<UnitId, UnitId>>{{1, 2}, {1, 3}, {1, 4}});
  const auto m = ExposureMapping::neighbor_fraction_threshold(2, {1, 2});
  EXPECT_EQ(exposure_of(m, 1, RealArm{0, 1, 0, 0}, net), 1);
}

TEST(ExposureTest, ThresholdExactlyHalfIsNotExposed) {
  const Network net = build_network(3, std::vector<std::pair<UnitId, UnitId>>{{1, 2}, {1, 3}});
  const auto m = ExposureMapping::neighbor_fraction_threshold(2, {1, 2});
  EXPECT_EQ(exposure_of(m, 1, RealArm{0, 1, 0}, net), 0);
  EXPECT_EQ(exposure_of(m, 1, RealArm{0, 0, 0}, net), 1);
}

TEST(ExposureTest, ThresholdOnRingFour) {
  const Network net = build_network(
      4, std::vector<std::pair<UnitId, UnitId>>{{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  const auto m = ExposureMapping::neighbor_fraction_threshold(2, {1, 2});
  EXPECT_EQ(exposure_vector(m, RealArm{1, 0, 1, 0}, net), (std::vector<int>{1, 0, 1, 0}));
  EXPECT_EQ(exposure_vector(m, RealArm{0, 1, 0, 1}, net), (std::vector<int>{0, 1, 0, 1}));
}

TEST(ExposureTest, GlobalSwitchbackBroadcastsFirstUnit) {
  const Network net = build_network(4, {});
  const auto m = ExposureMapping::global_switchback(2);
  EXPECT_EQ(exposure_vector(m, RealArm{1, 1, 1, 1}, net), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(exposure_vector(m, RealArm{0, 1, 1, 1}, net), (std::vector<int>{0, 0, 0, 0}));
}

TEST(ExposureTest, ClusterIndexUsesLowestMember) {
  const Network net = build_network(4, {});
  const Clustering cl = build_clustering(net, {{3, 1}, {2, 4}});
  const auto m = ExposureMapping::cluster_index_arm(3, cl);
  EXPECT_EQ(m.cluster_leader(3), 1);
  EXPECT_EQ(m.cluster_leader(4), 2);
  EXPECT_EQ(exposure_vector(m, RealArm{2, 0, 1, 1}, net), (std::vector<int>{2, 0, 2, 0}));
}

TEST(ExposureTest, Errors) {
  const Network net = build_network(3, std::vector<std::pair<UnitId, UnitId>>{{1, 2}});
  const auto thr = ExposureMapping::neighbor_fraction_threshold(2, {1, 2});
  EXPECT_THROW(exposure_of(thr, 3, RealArm{0, 0, 0}, net), IsolatedUnitError);
  EXPECT_THROW(exposure_of(thr, 1, RealArm{0, 2, 0}, net), ParameterError);
  EXPECT_THROW(exposure_of(thr, 1, RealArm{0, 0}, net), ParameterError);
  EXPECT_THROW(ExposureMapping::neighbor_fraction_threshold(2, {1, 1}), ParameterError);
  EXPECT_THROW(ExposureMapping::neighbor_fraction_threshold(2, {0, 2}), ParameterError);
  EXPECT_THROW(ExposureMapping::per_unit_arm(0), ParameterError);
}

TEST(LegitimateSetTest, FourUnitsTwoClusters) {
  const Design d = fix_a();
  ASSERT_EQ(d.index.size(), 4u);
  const std::vector<std::vector<int>> expected = {
      {0, 0, 0, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 1, 1}};
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(d.index.arm(s).per_unit, expected[s]);
  EXPECT_EQ(d.index.candidates_searched(), 4u);
}

TEST(LegitimateSetTest, GlobalSwitchbackHasTwoArms) {
  for (int n : {1, 3, 6}) {
    std::vector<UnitId> all;
    for (int u = 1; u <= n; ++u) all.push_back(u);
    const Design d = make_design(n, {}, {all}, MappingKind::kGlobalSwitchback);
    EXPECT_EQ(d.index.size(), 2u) << n;
  }
}

TEST(LegitimateSetTest, ThresholdStarMatchesBruteForce) {
  const Design d = fix_b();
  const auto oracle = oracle_pools(d);
  ASSERT_EQ(d.index.size(), oracle.size());
  EXPECT_EQ(d.index.size(), 5u);
  std::size_t s = 0;
  for (const auto& [profile, pool] : oracle) {
    EXPECT_EQ(d.index.arm(s).cluster_profile, profile);
    const auto w = d.index.witnesses(s);
    EXPECT_EQ(std::set<RealArm>(w.begin(), w.end()), pool);
    ++s;
  }
  EXPECT_EQ(d.index.witnesses(0).size(), 4u);
}

TEST(LegitimateSetTest, PresetsMatchBruteForceAndBounds) {
  for (const std::string& name : preset_names()) {
    if (name == "main") continue;  // 2^6 profiles; covered by the count below
    const Experiment e = prepare_experiment(preset_instance(name));
    const Design d{e.network, e.clustering, e.mapping, e.index};
    const auto oracle = oracle_pools(d);
    ASSERT_EQ(e.index.size(), oracle.size()) << name;
    std::size_t s = 0;
    for (const auto& [profile, pool] : oracle) {
      EXPECT_EQ(e.index.arm(s++).cluster_profile, profile) << name;
    }
  }
  const Experiment main = prepare_experiment(preset_instance("main"));
  EXPECT_LE(main.index.size(), 64u);
  EXPECT_GE(main.index.size(), 2u);
}

TEST(LegitimateSetTest, ArmsAreClusterConstantAndSorted) {
  const Experiment e = prepare_experiment(preset_instance("instance4"));
  for (std::size_t s = 0; s < e.index.size(); ++s) {
    const auto& arm = e.index.arm(s);
    for (UnitId u = 1; u <= e.network.n_units(); ++u) {
      EXPECT_EQ(arm.per_unit[u - 1], arm.cluster_profile[e.clustering.cluster_of(u) - 1]);
    }
    if (s > 0) EXPECT_LT(e.index.arm(s - 1).cluster_profile, arm.cluster_profile);
    EXPECT_EQ(e.index.index_of(arm), s);
  }
}

TEST(LegitimateSetTest, EnumerationIsDeterministic) {
  const Design a = fix_b();
  const Design b = fix_b();
  EXPECT_EQ(dump_arms(a.index), dump_arms(b.index));
  EXPECT_EQ(dump_arms(a.index), "0 0 0\n0 0 1\n0 1 0\n1 0 0\n1 1 1\n");
}

TEST(LegitimateSetTest, Errors) {
  EXPECT_THROW(make_design(2, {{1, 2}}, {{1}, {2}}, MappingKind::kPerUnitArm, 1),
               ConditionViolation);
  const Network net = build_network(30, {});
  std::vector<std::vector<UnitId>> singletons;
  for (int u = 1; u <= 30; ++u) singletons.push_back({u});
  const Clustering cl = build_clustering(net, singletons);
  EXPECT_THROW(enumerate_legitimate_arms(ExposureMapping::per_unit_arm(2), net, cl, 1u << 20),
               BudgetExceeded);
  const Design d = fix_a();
  ExposureSuperArm bogus{{1, 0, 1, 0}, {1, 0}};
  EXPECT_THROW(d.index.index_of(bogus), UnknownArmError);
}

TEST(SamplingTest, UniqueWitnessIsReturned) {
  const Design d = fix_a();
  RandomStream rng = make_stream({1});
  const ExposureSuperArm s{{1, 1, 0, 0}, {1, 0}};
  EXPECT_EQ(sample_real_arm(d.index, s, rng), (RealArm{1, 1, 0, 0}));
}

TEST(SamplingTest, GlobalSwitchbackAllOnes) {
  const Design d =
      make_design(6, {}, {{1, 2, 3, 4, 5, 6}}, MappingKind::kGlobalSwitchback);
  RandomStream rng = make_stream({2});
  EXPECT_EQ(sample_real_arm(d.index, 1, rng), (RealArm{1, 1, 1, 1, 1, 1}));
}

TEST(SamplingTest, RoundTripOnEveryPreset) {
  RandomStream rng = make_stream({3});
  for (const std::string& name : preset_names()) {
    const Experiment e = prepare_experiment(preset_instance(name));
    for (int draw = 0; draw < 2000; ++draw) {
      const std::size_t s = uniform_index(rng, e.index.size());
      const RealArm& a = sample_real_arm(e.index, s, rng);
      ASSERT_EQ(exposure_vector(e.mapping, a, e.network), e.index.arm(s).per_unit) << name;
    }
  }
}

TEST(SamplingTest, PoolDrawsAreUniform) {
  const Design d = fix_b();
  const auto pool = d.index.witnesses(0);
  ASSERT_EQ(pool.size(), 4u);
  RandomStream rng = make_stream({4});
  const int draws = 100000;
  std::map<RealArm, int> counts;
  for (int k = 0; k < draws; ++k) ++counts[sample_real_arm(d.index, 0, rng)];
  ASSERT_EQ(counts.size(), pool.size());
  const double p = 1.0 / pool.size();
  const double sigma = std::sqrt(p * (1 - p) / draws);
  double chi2 = 0.0;
  for (const auto& [arm, c] : counts) {
    EXPECT_NEAR(c / double(draws), p, 3 * sigma);
    chi2 += (c - draws * p) * (c - draws * p) / (draws * p);
  }
  EXPECT_LT(chi2, 11.34);  // 0.99 quantile with 3 degrees of freedom
}

}  // namespace
}  // namespace mabn
