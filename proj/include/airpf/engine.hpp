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


#ifndef AIRPF_ENGINE_HPP
#define AIRPF_ENGINE_HPP

#include <cstddef>
#include <functional>

#include "airpf/comm.hpp"
#include "airpf/filters.hpp"
#include "airpf/model.hpp"

namespace airpf {

/**
 * Runs a filter with one simulated PE per island. In threaded mode each PE is a
 * worker thread; results are identical to the serial mode for equal seeds.
 * Throws RuntimeFailure if a worker cannot be started.
 */
FilterRun execute_parallel(const StateSpaceModel& model, const FilterConfig& config, ExecutionMode mode,
                           std::function<void(std::size_t)> spawn_hook = {});

/// Island stages needed until a single heavy island has reached every PE.
/**
 * One particle per island; island `hot_island` (1-based) carries weight 1 and
 * all others `cold_weight`. Stages cycle 1..S until every island descends from
 * the hot one, or `max_rounds` is hit (returns max_rounds + 1 then).
 */
std::size_t dissemination_drill(std::size_t pes, std::size_t hot_island, std::uint64_t seed,
                                double cold_weight = 1e-30, std::size_t max_rounds = 1000);

}  // namespace airpf

#endif  // AIRPF_ENGINE_HPP
