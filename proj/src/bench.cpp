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


#include "airpf/bench.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "airpf/csv.hpp"
#include "airpf/engine.hpp"
#include "airpf/errors.hpp"
#include "airpf/kalman.hpp"

namespace airpf {

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::uint64_t parse_count(std::string_view field) {
  const double v = parse_double(field);
  if (!(v >= 0.0)) {
    throw ShapeError("results.csv: negative count");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

void ExperimentGrid::validate() const {
  if (runs == 0) {
    throw ConfigError("grid: J must be at least 1");
  }
  if (n_max == 0) {
    throw ConfigError("grid: n_max must be at least 1");
  }
  if (m_values.empty() || M_values.empty() || thetas.empty() || algorithms.empty()) {
    throw ConfigError("grid: every parameter list needs at least one value");
  }
  if (!std::all_of(m_values.begin(), m_values.end(), is_power_of_two)) {
    throw ConfigError("grid: every m must be a power of two");
  }
  if (std::find(M_values.begin(), M_values.end(), std::size_t{0}) != M_values.end()) {
    throw ConfigError("grid: M must be positive");
  }
}

std::string theta_to_string(const std::optional<double>& theta) {
  return theta ? format_shortest(*theta) : std::string{"always"};
}

std::string cell_key(Algorithm algorithm, std::size_t m, std::size_t M, const std::optional<double>& theta) {
  return std::string(to_string(algorithm)) + ',' + std::to_string(m) + ',' + std::to_string(M) + ',' +
         theta_to_string(theta);
}

std::string cell_key(const CellResult& cell) { return cell_key(cell.algorithm, cell.m, cell.M, cell.theta); }

std::vector<CellResult> run_grid(const ExperimentGrid& grid, const Dataset& data, const GridOptions& options) {
  grid.validate();
  if (data.observations.rows() != grid.n_max || data.observations.dim() != grid.params.dim) {
    throw ShapeError("grid: dataset does not match n_max and d");
  }
  const RandomWalkModel model{grid.params, data.observations};
  const Series truth = kalman_means(kalman_filter(grid.params, data.observations));

  std::vector<CellResult> results;
  for (const Algorithm algorithm : grid.algorithms) {
    for (const std::size_t m : grid.m_values) {
      for (const std::size_t M : grid.M_values) {
        for (const auto& theta : grid.thetas) {
          const std::string key = cell_key(algorithm, m, M, theta);
          if (options.skip.contains(key)) {
            continue;
          }
          CellResult cell{algorithm, m, M, theta};
          try {
            std::vector<Series> estimates;
            estimates.reserve(grid.runs);
            double total_time = 0.0;
            for (std::size_t j = 0; j < grid.runs; ++j) {
              FilterConfig config;
              config.topology = Topology{m, M};
              config.algorithm = algorithm;
              config.theta = theta;
              config.stage_rotation = grid.stage_rotation;
              config.seed = grid.run_seed_base + j;
              FilterRun run = execute_parallel(model, config, grid.mode);
              if (options.on_run) {
                options.on_run(key, j, run);
              }
              total_time += run.wall_time_s;
              cell.stage_rounds += run.comm.stage_rounds;
              cell.weight_msgs += run.comm.weight_msgs;
              cell.payload_particles += run.comm.payload_particles;
              estimates.push_back(options.substitute_truth ? truth : std::move(run.estimates));
            }
            cell.mse = mse(estimates, truth);
            cell.time_s = options.omit_timing ? 0.0 : total_time / static_cast<double>(grid.runs);
          } catch (const std::exception& e) {
            throw RuntimeFailure("grid cell " + key + " failed: " + e.what());
          }
          results.push_back(cell);
          if (options.on_row) {
            options.on_row(cell);
          }
        }
      }
    }
  }
  return results;
}

std::vector<CellResult> run_grid(const ExperimentGrid& grid, const GridOptions& options) {
  grid.validate();
  return run_grid(grid, simulate_data(grid.params, grid.n_max, grid.data_seed), options);
}

void write_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_result_row(std::ostream& out, const CellResult& cell) {
  out << cell_key(cell) << ',' << format_double(cell.mse) << ',' << format_double(cell.time_s) << ','
      << cell.stage_rounds << ',' << cell.weight_msgs << ',' << cell.payload_particles << '\n';
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  write_results_header(out);
  for (const auto& cell : cells) {
    write_result_row(out, cell);
  }
}

std::vector<CellResult> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw ShapeError("results.csv: unexpected header");
  }
  std::vector<CellResult> cells;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) {
      throw ShapeError("results.csv: expected 9 fields in '" + line + "'");
    }
    const auto algorithm = parse_algorithm(fields[0]);
    if (!algorithm) {
      throw ShapeError("results.csv: unknown algorithm '" + std::string(fields[0]) + "'");
    }
    CellResult cell;
    cell.algorithm = *algorithm;
    cell.m = static_cast<std::size_t>(parse_count(fields[1]));
    cell.M = static_cast<std::size_t>(parse_count(fields[2]));
    if (fields[3] != "always") {
      cell.theta = parse_double(fields[3]);
    }
    cell.mse = parse_double(fields[4]);
    cell.time_s = parse_double(fields[5]);
    cell.stage_rounds = parse_count(fields[6]);
    cell.weight_msgs = parse_count(fields[7]);
    cell.payload_particles = parse_count(fields[8]);
    cells.push_back(cell);
  }
  return cells;
}

std::string EnvelopePoint::tag() const {
  return algorithm + ',' + std::to_string(m) + ',' + std::to_string(M) + ',' + theta;
}

std::string group_by_algorithm(const EnvelopePoint& point) { return point.algorithm; }

std::vector<EnvelopeEntry> lower_envelope(const std::vector<EnvelopePoint>& points, const GroupKey& group_key) {
  std::map<std::string, std::vector<EnvelopePoint>> groups;
  for (const auto& p : points) {
    groups[group_key(p)].push_back(p);
  }
  std::vector<EnvelopeEntry> envelope;
  for (auto& [group, members] : groups) {
    std::sort(members.begin(), members.end(), [](const EnvelopePoint& a, const EnvelopePoint& b) {
      return std::forward_as_tuple(a.time_s, a.mse, a.tag()) < std::forward_as_tuple(b.time_s, b.mse, b.tag());
    });
    bool first = true;
    double best = 0.0;
    for (const auto& p : members) {
      if (first || p.mse < best) {
        envelope.push_back({group, p});
        best = p.mse;
        first = false;
      }
    }
  }
  return envelope;
}

std::vector<EnvelopePoint> envelope_points(const std::vector<CellResult>& cells) {
  std::vector<EnvelopePoint> points;
  points.reserve(cells.size());
  for (const auto& c : cells) {
    points.push_back({c.time_s, c.mse, std::string(to_string(c.algorithm)), c.m, c.M, theta_to_string(c.theta)});
  }
  return points;
}

void write_envelope_csv(std::ostream& out, const std::vector<EnvelopeEntry>& envelope) {
  out << "group,time_s,mse,alg,m,M,theta\n";
  for (const auto& [group, p] : envelope) {
    out << group << ',' << format_double(p.time_s) << ',' << format_double(p.mse) << ',' << p.algorithm << ','
        << p.m << ',' << p.M << ',' << p.theta << '\n';
  }
}

double raw_observation_mse(const Series& observations, const Series& truth_means, std::size_t runs) {
  if (runs == 0) {
    throw ShapeError("raw_observation_mse: J must be at least 1");
  }
  const std::vector<Series> estimates(runs, observations);
  return mse(estimates, truth_means);
}

}  // namespace airpf
