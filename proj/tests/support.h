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


// Shared fixtures for the test binaries.

#ifndef MABN_TESTS_SUPPORT_H_
#define MABN_TESTS_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mabn/config.h"
#include "mabn/exposure.h"
#include "mabn/harness.h"
#include "mabn/network.h"
#include "mabn/policy.h"

namespace mabn::testing {

// Network, clustering, mapping and U_E held together.
struct Design {
  Network network;
  Clustering clustering;
  ExposureMapping mapping;
  LegitimateArmIndex index;
};

inline Design make_design(int n_units, std::vector<std::pair<UnitId, UnitId>> edges,
                          std::vector<std::vector<UnitId>> clusters,
                          MappingKind kind, int arm_count = 2) {
  Network net = build_network(n_units, edges);
  Clustering cl = build_clustering(net, clusters);
  ExposureMapping m = ExposureMapping::per_unit_arm(arm_count);
  switch (kind) {
    case MappingKind::kPerUnitArm:
      break;
    case MappingKind::kGlobalSwitchback:
      m = ExposureMapping::global_switchback(arm_count);
      break;
    case MappingKind::kClusterIndexArm:
      m = ExposureMapping::cluster_index_arm(arm_count, cl);
      break;
    case MappingKind::kNeighborFractionThreshold:
      m = ExposureMapping::neighbor_fraction_threshold(arm_count, {1, 2});
      break;
  }
  LegitimateArmIndex idx = enumerate_legitimate_arms(m, net, cl, 1u << 20);
  return Design{std::move(net), std::move(cl), std::move(m), std::move(idx)};
}

// Four units in two clusters {1,2},{3,4} with the per-unit mapping and K=2.
inline Design fix_a() {
  return make_design(4, {{1, 2}, {3, 4}}, {{1, 2}, {3, 4}}, MappingKind::kPerUnitArm);
}

// Star of cliques: center 1, outer cliques {2,3} and {4,5}, each outer unit
// tied to the center; threshold-1/2 mapping with K=2.
inline Design fix_b() {
  return make_design(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {4, 5}},
                     {{1}, {2, 3}, {4, 5}}, MappingKind::kNeighborFractionThreshold);
}

// FIX-A topology with a stationary trace environment.
inline RunConfig stationary_config(std::vector<double> means, MadSchedule schedule,
                                   std::int64_t horizon, int reps,
                                   std::uint64_t seed = 7) {
  RunConfig c;
  c.topology.n_units = 4;
  c.topology.edges = {{1, 2}, {3, 4}};
  c.topology.clusters = {{1, 2}, {3, 4}};
  c.mapping = {MappingKind::kPerUnitArm, 2, {1, 2}};
  c.environment.kind = EnvironmentSpec::Kind::kAdversarialTrace;
  c.environment.trace = {std::move(means)};
  c.schedules = {schedule};
  c.horizon = horizon;
  c.replications = reps;
  c.master_seed = seed;
  return c;
}

// Fresh empty directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mabn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace mabn::testing

#endif  // MABN_TESTS_SUPPORT_H_
