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

#include "mabn/random.h"

#include <limits>
#include <vector>

namespace mabn {

RandomStream make_stream(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> material;
  material.reserve(words.size() * 2);
  for (std::uint64_t w : words) {
    material.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
    material.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(material.begin(), material.end());
  return RandomStream(seq);
}

RandomStream replication_stream(std::uint64_t master_seed,
                                std::uint64_t rep_index, StreamPurpose purpose) {
  return make_stream(
      {master_seed, rep_index, static_cast<std::uint64_t>(purpose)});
}

std::uint64_t uniform_index(RandomStream& rng, std::uint64_t n) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace mabn
