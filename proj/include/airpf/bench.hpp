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


#ifndef AIRPF_BENCH_HPP
#define AIRPF_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "airpf/comm.hpp"
#include "airpf/filters.hpp"
#include "airpf/model.hpp"
#include "airpf/series.hpp"

/**
 * \file
 * \brief Experiment grids over (algorithm, m, M, theta), MSE tables and lower envelopes.
 */

namespace airpf {

struct ExperimentGrid {
  RandomWalkParams params{7, 1.0, 1.0, 0.25};
  std::size_t n_max{500};
  /// Independent filter runs per cell.
  std::size_t runs{5};
  std::vector<std::size_t> m_values{8};
  std::vector<std::size_t> M_values{200};
  /// An empty entry means resampling at every step.
  std::vector<std::optional<double>> thetas{std::nullopt};
  std::vector<Algorithm> algorithms{Algorithm::airpf_modified};
  std::uint64_t data_seed{1};
  std::uint64_t run_seed_base{1000};
  bool stage_rotation{false};
  ExecutionMode mode{ExecutionMode::serial};

  /// Throws ConfigError for empty lists, J = 0 or m not a power of two.
  void validate() const;
};

struct CellResult {
  Algorithm algorithm{Algorithm::bpf};
  std::size_t m{1};
  std::size_t M{1};
  std::optional<double> theta;
  double mse{0.0};
  /// Mean wall time of the filtering loop over the J runs.
  double time_s{0.0};
  /// Communication totals summed over the J runs.
  std::uint64_t stage_rounds{0};
  std::uint64_t weight_msgs{0};
  std::uint64_t payload_particles{0};
};

/// "always" for an empty theta, otherwise the shortest round-trip decimal.
std::string theta_to_string(const std::optional<double>& theta);

/// Unique key of a cell, e.g. "AIRPF_MODIFIED,8,200,0.2".
std::string cell_key(Algorithm algorithm, std::size_t m, std::size_t M, const std::optional<double>& theta);
std::string cell_key(const CellResult& cell);

struct GridOptions {
  /// Report time_s = 0 so that result tables are reproducible byte for byte.
  bool omit_timing{false};
  /// Called after every finished cell, in grid order.
  std::function<void(const CellResult&)> on_row;
  /// Cell keys that are already done and must not be rerun.
  std::set<std::string> skip;
  /// Called after every filter run with the cell key and the 0-based run index.
  std::function<void(const std::string&, std::size_t, const FilterRun&)> on_run;
  /// Debug hook: score the Kalman means instead of the filter estimates.
  bool substitute_truth{false};
};

/// Runs every cell on the shared `data`; failures are rethrown as RuntimeFailure naming the cell.
std::vector<CellResult> run_grid(const ExperimentGrid& grid, const Dataset& data, const GridOptions& options = {});

/// Simulates the shared dataset from grid.data_seed, then runs the grid.
std::vector<CellResult> run_grid(const ExperimentGrid& grid, const GridOptions& options = {});

inline constexpr const char* kResultsHeader = "alg,m,M,theta,mse,time_s,stage_rounds,weight_msgs,payload_particles";

void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const CellResult& cell);
void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells);
std::vector<CellResult> read_results_csv(std::istream& in);

struct EnvelopePoint {
  double time_s{0.0};
  double mse{0.0};
  std::string algorithm;
  std::size_t m{1};
  std::size_t M{1};
  std::string theta{"always"};

  /// Configuration tag used for tie-breaking, "alg,m,M,theta".
  [[nodiscard]] std::string tag() const;

  friend bool operator==(const EnvelopePoint&, const EnvelopePoint&) = default;
};

struct EnvelopeEntry {
  std::string group;
  EnvelopePoint point;
};

using GroupKey = std::function<std::string(const EnvelopePoint&)>;

/// Groups by algorithm name.
std::string group_by_algorithm(const EnvelopePoint& point);

/**
 * Pareto-minimal points of every group, ordered by group and then by time.
 * Ties are broken by (time, mse, tag); of several identical points only the
 * first survives.
 */
std::vector<EnvelopeEntry> lower_envelope(const std::vector<EnvelopePoint>& points,
                                          const GroupKey& group_key = group_by_algorithm);

std::vector<EnvelopePoint> envelope_points(const std::vector<CellResult>& cells);

void write_envelope_csv(std::ostream& out, const std::vector<EnvelopeEntry>& envelope);

/// MSE of using the observations themselves as estimates in each of the J runs.
double raw_observation_mse(const Series& observations, const Series& truth_means, std::size_t runs);

}  // namespace airpf

#endif  // AIRPF_BENCH_HPP
