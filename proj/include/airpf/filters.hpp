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

#ifndef AIRPF_FILTERS_HPP
#define AIRPF_FILTERS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airpf/butterfly.hpp"
#include "airpf/comm.hpp"
#include "airpf/model.hpp"
#include "airpf/resample.hpp"
#include "airpf/series.hpp"

/**
 * \file
 * \brief Particle filters built from the resampling primitives.
 *
 * Every filter follows the same step pipeline at time n: weight the current
 * (predicted) particles by g_n, record estimates, resample, mutate. The
 * reported estimate is the g_n-weighted mean of the predicted particles, i.e.
 * the particle approximation of the filtering mean, computed before any
 * resampling so that all algorithms estimate the same quantity.
 */

namespace airpf {

enum class Algorithm { bpf, bpf_augmented, airpf_plain, airpf_modified, ipf1, ipf2 };

std::string_view to_string(Algorithm algorithm);
/// Accepts the names produced by to_string, case-insensitively.
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct FilterConfig {
  Topology topology{1, 1};
  Algorithm algorithm{Algorithm::bpf};
  /// Adaptive resampling threshold; empty means resample at every step.
  std::optional<double> theta;
  /// Start each step's stage sequence after the last executed stage.
  bool stage_rotation{false};
  std::uint64_t seed{0};
  /// Keep per-island predictive means (for exchangeability checks).
  bool record_island_estimates{false};
};

/// Everything recorded during one filter run.
struct FilterRun {
  Algorithm algorithm{Algorithm::bpf};
  /// Filtering-mean estimates, one row per step n = 0..n_max-1.
  Series estimates;
  /// Mean of the (weighted) predicted particles, rows n = 0..n_max.
  Series predictive;
  /// Per island k, the island-restricted predictive means (optional).
  std::vector<Series> island_predictive;
  /// Particle-level ESS of the weighted predicted particles at every step.
  std::vector<double> ess;
  /// Resampling stages executed per step (butterfly stages; 0/1 for BPF and
  /// for the between-island level of IPF).
  std::vector<std::size_t> stages;
  std::vector<ExchangeRecord> exchanges;
  CommStats comm;
  double wall_time_s{0.0};
};

/// Runs the configured algorithm on `executor`'s PEs.
/**
 * The executor must have exactly topology.pes() workers. Throws ConfigError
 * for thresholds out of range.
 */
FilterRun run_filter(const StateSpaceModel& model, const FilterConfig& config, PeExecutor& executor);

/// Bootstrap filter with global multinomial resampling.
FilterRun run_bpf(const StateSpaceModel& model, const FilterConfig& config);
/// Bootstrap filter with augmented resampling over the butterfly schedule.
FilterRun run_bpf_augmented(const StateSpaceModel& model, const FilterConfig& config);
/// Augmented island resampling particle filter (plain or modified).
FilterRun run_airpf(const StateSpaceModel& model, const FilterConfig& config);
/// Island particle filter; variant 1 resamples islands first, variant 2 last.
FilterRun run_ipf(const StateSpaceModel& model, const FilterConfig& config, int variant);

/// One row per step: n, estimate components, ess, stages, payload.
void write_filter_run_csv(std::ostream& out, const FilterRun& run);

/// Header step,stage,pair,outcome,payload_particles.
void write_exchange_log_csv(std::ostream& out, const std::vector<ExchangeRecord>& log);

/// Header step,stage_rounds,weight_msgs,payload_particles.
void write_comm_trace_csv(std::ostream& out, const CommStats& comm);

}  // namespace airpf

#endif  // AIRPF_FILTERS_HPP
