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

// Interference network and its clustering.
//
// Units are 1-indexed contiguous integers [1, N]. Clusters are also
// 1-indexed: cluster q is `clusters()[q - 1]`. Both types are immutable after
// construction and can be shared read-only between replications.

#ifndef MABN_NETWORK_H_
#define MABN_NETWORK_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mabn {

using UnitId = int;

class Network {
 public:
  static constexpr int kMaxUnits = 1024;

  int n_units() const { return n_units_; }

  // h_{i,j}. Both ids must be in range.
  bool adjacent(UnitId i, UnitId j) const;

  // Sorted ascending.
  std::span<const UnitId> neighbors(UnitId unit) const;

  int degree(UnitId unit) const;

  std::size_t edge_count() const { return edge_count_; }

 private:
  friend Network build_network(int n_units,
                               std::span<const std::pair<UnitId, UnitId>> edges);

  void check_unit(UnitId unit) const;

  int n_units_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adjacency_;  // dense N x N, row-major
  std::vector<std::vector<UnitId>> neighbors_;
};

// Builds the symmetric closure of `edges`. Duplicate edges are merged.
// Throws StructureError for n_units outside [1, kMaxUnits], out-of-range
// endpoints, or self-loops.
Network build_network(int n_units,
                      std::span<const std::pair<UnitId, UnitId>> edges);

// Free-function form of Network::neighbors.
std::span<const UnitId> neighbors(const Network& network, UnitId unit);

class Clustering {
 public:
  int cluster_count() const { return static_cast<int>(clusters_.size()); }
  int n_units() const { return static_cast<int>(cluster_of_.size()); }

  // Members of each cluster, sorted ascending. Index q-1 holds cluster q.
  const std::vector<std::vector<UnitId>>& clusters() const { return clusters_; }

  // 1-indexed cluster containing `unit`.
  int cluster_of(UnitId unit) const;

 private:
  friend Clustering build_clustering(const Network& network,
                                     const std::vector<std::vector<UnitId>>& clusters);

  std::vector<std::vector<UnitId>> clusters_;
  std::vector<int> cluster_of_;  // index unit-1
};

// Validates that `clusters` is a partition of [1, N]. Throws StructureError on
// an empty list, an empty cluster, an out-of-range unit, an overlap, or a unit
// left uncovered.
Clustering build_clustering(const Network& network,
                            const std::vector<std::vector<UnitId>>& clusters);

}  // namespace mabn

#endif  // MABN_NETWORK_H_
