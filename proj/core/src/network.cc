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

#include "mabn/network.h"

#include <algorithm>
#include <string>

#include "mabn/errors.h"

namespace mabn {

void Network::check_unit(UnitId unit) const {
  if (unit < 1 || unit > n_units_) {
    throw StructureError("unit " + std::to_string(unit) + " outside [1, " +
                         std::to_string(n_units_) + "]");
  }
}

bool Network::adjacent(UnitId i, UnitId j) const {
  check_unit(i);
  check_unit(j);
  return adjacency_[static_cast<std::size_t>(i - 1) * n_units_ + (j - 1)] != 0;
}

std::span<const UnitId> Network::neighbors(UnitId unit) const {
  check_unit(unit);
  return neighbors_[unit - 1];
}

int Network::degree(UnitId unit) const {
  return static_cast<int>(neighbors(unit).size());
}

Network build_network(int n_units,
                      std::span<const std::pair<UnitId, UnitId>> edges) {
  if (n_units < 1 || n_units > Network::kMaxUnits) {
    throw StructureError("n_units must be in [1, " +
                         std::to_string(Network::kMaxUnits) + "], got " +
                         std::to_string(n_units));
  }
  Network net;
  net.n_units_ = n_units;
  net.adjacency_.assign(static_cast<std::size_t>(n_units) * n_units, 0);
  for (const auto& [i, j] : edges) {
    if (i < 1 || i > n_units || j < 1 || j > n_units) {
      throw StructureError("edge (" + std::to_string(i) + "," +
                           std::to_string(j) + ") has an endpoint outside [1, " +
                           std::to_string(n_units) + "]");
    }
    if (i == j) {
      throw StructureError("self-loop at unit " + std::to_string(i));
    }
    net.adjacency_[static_cast<std::size_t>(i - 1) * n_units + (j - 1)] = 1;
    net.adjacency_[static_cast<std::size_t>(j - 1) * n_units + (i - 1)] = 1;
  }
  net.neighbors_.resize(n_units);
  for (int i = 0; i < n_units; ++i) {
    for (int j = 0; j < n_units; ++j) {
      if (net.adjacency_[static_cast<std::size_t>(i) * n_units + j]) {
        net.neighbors_[i].push_back(j + 1);
      }
    }
    net.edge_count_ += net.neighbors_[i].size();
  }
  net.edge_count_ /= 2;
  return net;
}

std::span<const UnitId> neighbors(const Network& network, UnitId unit) {
  return network.neighbors(unit);
}

int Clustering::cluster_of(UnitId unit) const {
  if (unit < 1 || unit > n_units()) {
    throw StructureError("unit " + std::to_string(unit) + " outside [1, " +
                         std::to_string(n_units()) + "]");
  }
  return cluster_of_[unit - 1];
}

Clustering build_clustering(const Network& network,
                            const std::vector<std::vector<UnitId>>& clusters) {
  if (clusters.empty()) throw StructureError("clustering has no clusters");
  const int n = network.n_units();
  Clustering out;
  out.cluster_of_.assign(n, 0);
  out.clusters_.reserve(clusters.size());
  for (std::size_t q = 0; q < clusters.size(); ++q) {
    const int label = static_cast<int>(q) + 1;
    if (clusters[q].empty()) {
      throw StructureError("cluster " + std::to_string(label) + " is empty");
    }
    std::vector<UnitId> members = clusters[q];
    std::sort(members.begin(), members.end());
    for (UnitId u : members) {
      if (u < 1 || u > n) {
        throw StructureError("cluster " + std::to_string(label) +
                             " contains unit " + std::to_string(u) +
                             " outside [1, " + std::to_string(n) + "]");
      }
      if (out.cluster_of_[u - 1] != 0) {
        throw StructureError("unit " + std::to_string(u) +
                             " appears in clusters " +
                             std::to_string(out.cluster_of_[u - 1]) + " and " +
                             std::to_string(label));
      }
      out.cluster_of_[u - 1] = label;
    }
    out.clusters_.push_back(std::move(members));
  }
  for (int u = 1; u <= n; ++u) {
    if (out.cluster_of_[u - 1] == 0) {
      throw StructureError("unit " + std::to_string(u) +
                           " is not covered by any cluster");
    }
  }
  return out;
}

}  // namespace mabn
