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

// Run configuration, named presets and the JSON configuration document.
// The document schema is described in README.md.

#ifndef MABN_CONFIG_H_
#define MABN_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mabn/environment.h"
#include "mabn/exposure.h"
#include "mabn/inference.h"
#include "mabn/network.h"
#include "mabn/policy.h"

namespace mabn {

struct TopologySpec {
  int n_units = 1;
  std::vector<std::pair<UnitId, UnitId>> edges;
  std::vector<std::vector<UnitId>> clusters;
};

struct MappingSpec {
  MappingKind kind = MappingKind::kPerUnitArm;
  int arm_count = 2;
  Rational threshold{1, 2};  // kNeighborFractionThreshold only
};

enum class CsExport {
  kAll,     // every tracked pair
  kWidest,  // the pair with the largest mean final width
  kNone,
};

struct OutputOptions {
  std::string directory = "results";
  std::int64_t rounds_stride = 1;  // write every k-th round row (and round T)
  std::int64_t cs_stride = 1;      // CS snapshots every k-th round (and T)
  CsExport cs_export = CsExport::kAll;
  bool log_probabilities = false;  // also write probs.csv
};

struct RunConfig {
  std::string preset;  // empty for explicit configurations
  TopologySpec topology;
  MappingSpec mapping;
  EnvironmentSpec environment;  // `seed` is derived per replication
  std::vector<MadSchedule> schedules{MadSchedule::power_law(0.1)};
  std::int64_t horizon = 1000;
  int replications = 1;
  std::uint64_t master_seed = 1;
  CsParams cs;
  std::vector<ArmPair> tracked_pairs;  // empty: all pairs
  std::uint64_t witness_budget = std::uint64_t{1} << 20;
  double importance_clip = 0.0;         // 0 disables clipping
  bool per_round_comparator = false;
  int threads = 1;
  OutputOptions output;
  // Free-form notes carried into the manifest, e.g. reconstructed topologies.
  std::vector<std::string> notes;
};

// Names accepted by preset_instance, in a fixed order.
const std::vector<std::string>& preset_names();

// Throws ConfigError for an unknown name.
RunConfig preset_instance(const std::string& name);

// Structural checks; throws ConfigError naming the offending key.
void validate(const RunConfig& config);

// Parses a configuration document. A "preset" key loads that preset first and
// the remaining keys override it. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Parses a standalone topology document {"n_units", "edges", "clusters"}.
TopologySpec parse_topology(const std::string& json_text);

// Applies one flat key=value override, e.g. "horizon=5000" or "alpha=0.2".
// Throws ConfigError.
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

// Fully resolved configuration as a JSON document (stable key order).
std::string to_json(const RunConfig& config);

}  // namespace mabn

#endif  // MABN_CONFIG_H_
