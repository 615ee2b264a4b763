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

#include "airpf/butterfly.hpp"

#include <bit>
#include <sstream>

#include "airpf/errors.hpp"

namespace airpf {

Topology::Topology(std::size_t pes, std::size_t per_pe) : pes_{pes}, per_pe_{per_pe}, stages_{0} {
  if (pes == 0 || !std::has_single_bit(pes)) {
    throw TopologyError("PE count must be a power of two, got " + std::to_string(pes));
  }
  if (per_pe == 0) {
    throw TopologyError("particles per PE must be positive");
  }
  stages_ = static_cast<std::size_t>(std::countr_zero(pes));
}

PairSchedule::PairSchedule(Topology topology, std::vector<std::vector<PePair>> stages)
    : topology_{topology}, stages_{std::move(stages)} {
  if (stages_.size() != topology_.stages()) {
    throw TopologyError("schedule stage count does not match log2(m)");
  }
  partners_.resize(stages_.size(), std::vector<std::size_t>(topology_.pes() + 1, 0));
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    if (stages_[s].size() != topology_.pes() / 2) {
      throw TopologyError("stage does not hold m/2 pairs");
    }
    for (const auto& [left, right] : stages_[s]) {
      if (left < 1 || right > topology_.pes() || left >= right || partners_[s][left] != 0 ||
          partners_[s][right] != 0) {
        throw TopologyError("stage pairs do not partition the PEs");
      }
      partners_[s][left] = right;
      partners_[s][right] = left;
    }
  }
}

const std::vector<PePair>& PairSchedule::stage(std::size_t stage) const {
  if (stage < 1 || stage > stages_.size()) {
    throw TopologyError("stage index out of range");
  }
  return stages_[stage - 1];
}

std::size_t PairSchedule::partner(std::size_t pe, std::size_t stage) const {
  if (stage < 1 || stage > stages_.size() || pe < 1 || pe > topology_.pes()) {
    throw TopologyError("PE or stage index out of range");
  }
  return partners_[stage - 1][pe];
}

void PairSchedule::check(const Topology& topology) const {
  if (topology.pes() != topology_.pes()) {
    throw TopologyError("schedule was built for a different PE count");
  }
}

PairSchedule build_schedule(const Topology& topology) {
  const std::size_t total_stages = topology.stages();
  std::vector<std::vector<PePair>> stages(total_stages);
  for (std::size_t s = 1; s <= total_stages; ++s) {
    const std::size_t half = std::size_t{1} << (s - 1);
    const std::size_t blocks = std::size_t{1} << (total_stages - s);
    auto& pairs = stages[s - 1];
    pairs.reserve(topology.pes() / 2);
    for (std::size_t i = 1; i <= blocks; ++i) {
      for (std::size_t j = 1; j <= half; ++j) {
        const std::size_t left = 2 * half * (i - 1) + (j - 1) + 1;
        pairs.push_back({left, left + half});
      }
    }
  }
  return PairSchedule{topology, std::move(stages)};
}

std::string schedule_to_text(const PairSchedule& schedule) {
  std::ostringstream out;
  for (std::size_t s = 1; s <= schedule.stage_count(); ++s) {
    bool first = true;
    for (const auto& [left, right] : schedule.stage(s)) {
      out << (first ? "" : " ") << '(' << left << ',' << right << ')';
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace airpf
