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

#ifndef AIRPF_BUTTERFLY_HPP
#define AIRPF_BUTTERFLY_HPP

#include <cstddef>
#include <string>
#include <vector>

/**
 * \file
 * \brief Radix-2 butterfly pairing of processing elements (PEs).
 *
 * Stage s pairs PE i with the PE whose zero-based index differs from i-1 in
 * bit s-1. The public schedule uses 1-based PE indices; everything else in the
 * library is 0-based and converts at this boundary.
 */

namespace airpf {

/// m PEs (a power of two) each holding M particles.
class Topology {
 public:
  /// Throws TopologyError unless pes is a power of two and per_pe > 0.
  Topology(std::size_t pes, std::size_t per_pe);

  [[nodiscard]] std::size_t pes() const { return pes_; }
  [[nodiscard]] std::size_t per_pe() const { return per_pe_; }
  [[nodiscard]] std::size_t stages() const { return stages_; }
  [[nodiscard]] std::size_t particles() const { return pes_ * per_pe_; }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t pes_;
  std::size_t per_pe_;
  std::size_t stages_;
};

/// A pair (left, right) of 1-based PE indices with left < right.
struct PePair {
  std::size_t left;
  std::size_t right;
  friend bool operator==(const PePair&, const PePair&) = default;
};

/// 1-based partner of PE `pe` at stage `stage`.
constexpr std::size_t butterfly_partner(std::size_t pe, std::size_t stage) {
  return ((pe - 1) ^ (std::size_t{1} << (stage - 1))) + 1;
}

/// 0-based variant of butterfly_partner.
constexpr std::size_t partner_index(std::size_t pe, std::size_t stage) {
  return pe ^ (std::size_t{1} << (stage - 1));
}

/// The m/2 pairs of every stage 1..S.
class PairSchedule {
 public:
  PairSchedule(Topology topology, std::vector<std::vector<PePair>> stages);

  [[nodiscard]] const Topology& topology() const { return topology_; }
  [[nodiscard]] std::size_t stage_count() const { return stages_.size(); }
  /// Pairs of stage `stage` (1-based).
  [[nodiscard]] const std::vector<PePair>& stage(std::size_t stage) const;
  /// 1-based partner of 1-based `pe` at `stage`, looked up from the pair list.
  [[nodiscard]] std::size_t partner(std::size_t pe, std::size_t stage) const;

  /// Throws TopologyError when this schedule was built for a different PE count.
  void check(const Topology& topology) const;

 private:
  Topology topology_;
  std::vector<std::vector<PePair>> stages_;
  std::vector<std::vector<std::size_t>> partners_;
};

/// Builds the schedule from the closed-form left/right index sequences.
PairSchedule build_schedule(const Topology& topology);

/// One line per stage with pairs written as "(l,r)" separated by spaces.
std::string schedule_to_text(const PairSchedule& schedule);

}  // namespace airpf

#endif  // AIRPF_BUTTERFLY_HPP
