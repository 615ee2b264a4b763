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


#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>

#include "airpf/rng.hpp"

namespace {

using airpf::RngStream;
using airpf::StreamPurpose;
using airpf::stream_id;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(airpf::philox4x32({0, 0, 0, 0}, {0, 0}),
            (std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(airpf::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(airpf::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameSeedAndStreamRepeat) {
  RngStream a{42, stream_id(StreamPurpose::mutate, 3, 5)};
  RngStream b{42, stream_id(StreamPurpose::mutate, 3, 5)};
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a(), b());
  }
  EXPECT_EQ(a.counter(), 50u);
}

TEST(RngStream, DistinctStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 64; ++k) {
    RngStream rng{7, stream_id(StreamPurpose::mutate, 0, k)};
    firsts.insert(rng());
  }
  RngStream other{8, stream_id(StreamPurpose::mutate, 0, 0)};
  firsts.insert(other());
  EXPECT_EQ(firsts.size(), 65u);
}

TEST(RngStream, StreamIdFieldsDoNotOverlap) {
  std::set<std::uint64_t> ids;
  for (auto p : {StreamPurpose::initialize, StreamPurpose::mutate, StreamPurpose::stage_pe, StreamPurpose::stage_pair}) {
    for (std::uint64_t step : {0u, 1u, 4095u}) {
      for (std::uint64_t index : {0u, 1u, 255u}) {
        for (std::uint64_t stage : {0u, 1u, 8u}) {
          ids.insert(stream_id(p, step, index, stage));
        }
      }
    }
  }
  EXPECT_EQ(ids.size(), 4u * 3u * 3u * 3u);
}

TEST(RngStream, UniformMoments) {
  RngStream rng{1, 0};
  constexpr int kDraws = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 0.005);
  EXPECT_NEAR(sq / kDraws - 0.25, 1.0 / 12.0, 0.002);
}

TEST(RngStream, NormalMoments) {
  RngStream rng{2, 0};
  constexpr int kDraws = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 0.01);
  EXPECT_NEAR(sq / kDraws, 1.0, 0.015);
}

}  // namespace
