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

#include "sqen/rng.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "sqen/errors.h"

namespace sqen {

std::uint64_t SplitMix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = SplitMix64(sm);
  // splitmix64 cannot emit four zero words in a row, but keep the
  // xoshiro precondition explicit.
  if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0) {
    state_[0] = 1;
  }
}

Rng Rng::Substream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = stream;
  const std::uint64_t salt = SplitMix64(sm);
  return Rng(seed ^ salt);
}

std::uint64_t Rng::NextU64() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double Rng::NextUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  if (!(lo < hi)) {
    throw InvalidArgument("Uniform: need lo < hi, got lo=" +
                          std::to_string(lo) + " hi=" + std::to_string(hi));
  }
  const double u = lo + (hi - lo) * NextUnit();
  // Rounding can land exactly on hi for wide ranges.
  return u < hi ? u : std::nextafter(hi, lo);
}

double Rng::Gaussian(double mean, double stddev) {
  if (!(stddev >= 0.0)) {
    throw InvalidArgument("Gaussian: stddev must be >= 0, got " +
                          std::to_string(stddev));
  }
  const double u1 = 1.0 - NextUnit();  // (0, 1], keeps log finite
  const double u2 = NextUnit();
  if (stddev == 0.0) return mean;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::UniformIndex(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("UniformIndex: bound must be > 0");
  // Reject the low 2^64 mod bound values so the modulo is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = NextU64();
    if (r >= threshold) return r % bound;
  }
}

void Shuffle(std::span<std::size_t> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.UniformIndex(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace sqen
