// Copyright 2026 The AIRPF Authors
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

#ifndef AIRPF_RNG_HPP
#define AIRPF_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <random>

/**
 * \file
 * \brief Counter-based random streams (Philox4x32-10).
 *
 * A stream is identified by a master seed and a 64-bit stream id. The seed is
 * the Philox key; the stream id occupies the upper half of the 128-bit
 * counter and the draw position the lower half, so two streams with distinct
 * ids never share a counter block and can never overlap.
 */

namespace airpf {

/// Philox4x32 with 10 rounds applied to one counter block.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// What a stream is used for. Part of the stream id.
enum class StreamPurpose : std::uint64_t {
  simulate = 1,
  initialize = 2,
  mutate = 3,
  within_island = 4,
  stage_pe = 5,
  stage_pair = 6,
  global = 7,
  between_island = 8,
};

/// Packs (purpose, stage, step, index) into a stream id.
/**
 * Layout: 4 bits purpose | 8 bits stage | 32 bits step | 20 bits index.
 */
constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t step, std::uint64_t index,
                                  std::uint64_t stage = 0) {
  return (static_cast<std::uint64_t>(purpose) << 60) | ((stage & 0xFFu) << 52) | ((step & 0xFFFFFFFFu) << 20) |
         (index & 0xFFFFFu);
}

/// A UniformRandomBitGenerator over one Philox stream.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_{seed}, stream_{stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal variate.
  double normal() { return normal_(*this); }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }
  /// Number of 128-bit blocks consumed so far.
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_{0};
  std::array<std::uint32_t, 4> block_{};
  int used_{2};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace airpf

#endif  // AIRPF_RNG_HPP
