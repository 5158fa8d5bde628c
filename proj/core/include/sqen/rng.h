// Copyright 2026 The sqen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQEN_RNG_H_
#define SQEN_RNG_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sqen {

// splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t SplitMix64(std::uint64_t& state);

// xoshiro256** (Blackman & Vigna, 2018) seeded by four splitmix64 outputs.
//
// Streams are bit-identical across runs and platforms for a given seed.
// Each Rng belongs to one execution context; copy it to fork a replay.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "xoshiro256**/splitmix64";

  explicit Rng(std::uint64_t seed);

  // Independent generator for a named substream of `seed`. Used so that
  // initialization, shuffling and data generation never share draws.
  static Rng Substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64();

  // Uniform in [0, 1) with 53 bits of resolution; one NextU64 per call.
  double NextUnit();

  // Uniform in [lo, hi). Throws InvalidArgument unless lo < hi.
  double Uniform(double lo, double hi);

  // Box-Muller sample. Always consumes exactly two NextUnit draws, and uses
  // only the cosine branch, so the stream position after k samples is 2k.
  // stddev == 0 returns `mean` exactly (draws are still consumed).
  double Gaussian(double mean, double stddev);

  // Uniform integer in [0, bound), bound > 0, by modulo with rejection;
  // consumes a variable number of draws.
  std::uint64_t UniformIndex(std::uint64_t bound);

  const std::array<std::uint64_t, 4>& state() const { return state_; }

 private:
  std::array<std::uint64_t, 4> state_;
};

// In-place Fisher-Yates shuffle, walking from the back.
void Shuffle(std::span<std::size_t> items, Rng& rng);

}  // namespace sqen

#endif  // SQEN_RNG_H_
