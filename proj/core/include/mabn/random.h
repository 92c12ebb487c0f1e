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

// Random streams. Every stream is a pure function of the seed material passed
// to `make_stream`, and draws are converted to numbers without the
// implementation-defined std distributions so results match across standard
// libraries.

#ifndef MABN_RANDOM_H_
#define MABN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mabn {

using RandomStream = std::mt19937_64;

// Purposes of the independent streams used inside one replication.
enum class StreamPurpose : std::uint32_t {
  kPolicy = 1,    // exposure super arm selection
  kSampling = 2,  // witness draw P(A | S)
  kReward = 3,    // reward realization
  kEnvironment = 4,
};

// Seeds a stream from an arbitrary list of 64-bit words via std::seed_seq.
RandomStream make_stream(std::initializer_list<std::uint64_t> words);

// Stream for (master_seed, rep_index, purpose).
RandomStream replication_stream(std::uint64_t master_seed,
                                std::uint64_t rep_index, StreamPurpose purpose);

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). n must be positive.
std::uint64_t uniform_index(RandomStream& rng, std::uint64_t n);

// Bernoulli(p) as 1.0 / 0.0. p is clamped to [0, 1].
inline double bernoulli(RandomStream& rng, double p) {
  return uniform01(rng) < p ? 1.0 : 0.0;
}

}  // namespace mabn

#endif  // MABN_RANDOM_H_
