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


#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "airpf/bench.hpp"
#include "airpf/csv.hpp"
#include "airpf/engine.hpp"
#include "airpf/errors.hpp"
#include "airpf/filters.hpp"
#include "airpf/kalman.hpp"
#include "airpf/model.hpp"

namespace fs = std::filesystem;
using airpf::Algorithm;

namespace {

struct CommonOptions {
  std::size_t dim{7};
  std::size_t n_max{500};
  std::uint64_t seed{1};
  std::string data;
  std::string out{"."};
};

struct CellOptions {
  std::vector<std::string> algorithms{"AIRPF_MODIFIED"};
  std::vector<std::size_t> m_values{8};
  std::vector<std::size_t> M_values{200};
  std::vector<std::string> thetas{"always"};
  std::size_t runs{5};
  std::uint64_t run_seed{1000};
  bool rotate_stages{false};
  bool threaded{false};
  bool no_timing{false};
  bool resume{false};
};

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) {
    throw airpf::Error("cannot write " + path.string());
  }
  return out;
}

airpf::RandomWalkParams params_for(std::size_t dim) {
  airpf::RandomWalkParams params;
  params.dim = dim;
  return params;
}

/// Reads observations from --data when given, otherwise simulates them from --seed.
airpf::Dataset load_dataset(const CommonOptions& common) {
  if (common.data.empty()) {
    return airpf::simulate_data(params_for(common.dim), common.n_max, common.seed);
  }
  airpf::Dataset data{{}, airpf::read_series_csv_file(common.data)};
  if (data.observations.dim() != common.dim) {
    throw airpf::ShapeError("dataset dimension " + std::to_string(data.observations.dim()) +
                            " does not match --d " + std::to_string(common.dim));
  }
  return data;
}

std::vector<std::optional<double>> parse_thetas(const std::vector<std::string>& values) {
  std::vector<std::optional<double>> thetas;
  for (const auto& v : values) {
    if (v == "always") {
      thetas.emplace_back(std::nullopt);
    } else {
      thetas.emplace_back(airpf::parse_double(v));
    }
  }
  return thetas;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> algorithms;
  for (const auto& name : names) {
    const auto a = airpf::parse_algorithm(name);
    if (!a) {
      throw airpf::ConfigError("unknown algorithm '" + name + "'");
    }
    algorithms.push_back(*a);
  }
  return algorithms;
}

void add_common(CLI::App& app, CommonOptions& common) {
  app.add_option("--d", common.dim, "State dimension")->check(CLI::PositiveNumber);
  app.add_option("--n-max", common.n_max, "Number of observations")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "Seed of the simulated dataset");
  app.add_option("--out", common.out, "Output directory");
}

void add_cell(CLI::App& app, CommonOptions& common, CellOptions& cell, bool lists) {
  add_common(app, common);
  app.add_option("--data", common.data, "Observation CSV to use instead of simulating")->check(CLI::ExistingFile);
  if (lists) {
    app.add_option("--alg", cell.algorithms, "Algorithms")->delimiter(',');
    app.add_option("--m", cell.m_values, "PE counts (powers of two)")->delimiter(',');
    app.add_option("--M", cell.M_values, "Particles per PE")->delimiter(',');
    app.add_option("--theta", cell.thetas, "ESS thresholds or 'always'")->delimiter(',');
    app.add_flag("--resume", cell.resume, "Skip cells already present in results.csv");
  } else {
    app.add_option("--alg", cell.algorithms, "Algorithm")->expected(1);
    app.add_option("--m", cell.m_values, "PE count (power of two)")->expected(1);
    app.add_option("--M", cell.M_values, "Particles per PE")->expected(1);
    app.add_option("--theta", cell.thetas, "ESS threshold or 'always'")->expected(1);
  }
  app.add_option("--J", cell.runs, "Independent runs per cell")->check(CLI::PositiveNumber);
  app.add_option("--run-seed", cell.run_seed, "Seed of the first filter run");
  app.add_flag("--rotate-stages", cell.rotate_stages, "Rotate the first butterfly stage between steps");
  auto* serial = app.add_flag("--serial", "Run PEs one after another (default)");
  app.add_flag("--threaded", cell.threaded, "Run each PE on its own thread")->excludes(serial);
  app.add_flag("--no-timing", cell.no_timing, "Write time_s = 0 for reproducible tables");
}

airpf::ExperimentGrid make_grid(const CommonOptions& common, const CellOptions& cell) {
  airpf::ExperimentGrid grid;
  grid.params = params_for(common.dim);
  grid.n_max = common.n_max;
  grid.runs = cell.runs;
  grid.m_values = cell.m_values;
  grid.M_values = cell.M_values;
  grid.thetas = parse_thetas(cell.thetas);
  grid.algorithms = parse_algorithms(cell.algorithms);
  grid.data_seed = common.seed;
  grid.run_seed_base = cell.run_seed;
  grid.stage_rotation = cell.rotate_stages;
  grid.mode = cell.threaded ? airpf::ExecutionMode::threaded : airpf::ExecutionMode::serial;
  return grid;
}

nlohmann::json cell_json(const airpf::CellResult& c) {
  nlohmann::json j;
  j["alg"] = std::string(airpf::to_string(c.algorithm));
  j["m"] = c.m;
  j["M"] = c.M;
  j["theta"] = airpf::theta_to_string(c.theta);
  j["mse"] = c.mse;
  j["time_s"] = c.time_s;
  j["stage_rounds"] = c.stage_rounds;
  j["weight_msgs"] = c.weight_msgs;
  j["payload_particles"] = c.payload_particles;
  return j;
}

int cmd_simulate(const CommonOptions& common) {
  const auto data = airpf::simulate_data(params_for(common.dim), common.n_max, common.seed);
  const fs::path out{common.out};
  fs::create_directories(out);
  airpf::write_series_csv_file((out / "dataset.csv").string(), data.observations);
  airpf::write_series_csv_file((out / "states.csv").string(), data.states);
  std::cout << "wrote " << (out / "dataset.csv").string() << '\n';
  return 0;
}

int cmd_kalman(const CommonOptions& common) {
  const auto data = load_dataset(common);
  const auto states = airpf::kalman_filter(params_for(common.dim), data.observations);
  const fs::path out{common.out};
  fs::create_directories(out);
  airpf::write_series_csv_file((out / "kalman.csv").string(), airpf::kalman_means(states));
  std::cout << "wrote " << (out / "kalman.csv").string() << '\n';
  return 0;
}

int cmd_grid(const CommonOptions& common, const CellOptions& cell, bool single) {
  auto grid = make_grid(common, cell);
  grid.validate();
  auto data = load_dataset(common);
  grid.n_max = data.observations.rows();

  const fs::path out{common.out};
  fs::create_directories(out);
  airpf::write_series_csv_file((out / "dataset.csv").string(), data.observations);
  const auto truth = airpf::kalman_means(airpf::kalman_filter(grid.params, data.observations));
  airpf::write_series_csv_file((out / "kalman.csv").string(), truth);

  airpf::GridOptions options;
  options.omit_timing = cell.no_timing;
  std::vector<airpf::CellResult> done;
  const fs::path results_path = out / "results.csv";
  if (cell.resume && fs::exists(results_path)) {
    std::ifstream in(results_path);
    done = airpf::read_results_csv(in);
    for (const auto& c : done) {
      options.skip.insert(airpf::cell_key(c));
    }
  } else {
    auto header = open_output(results_path);
    airpf::write_results_header(header);
  }
  options.on_row = [&](const airpf::CellResult& c) {
    auto row = open_output(results_path, std::ios::app);
    airpf::write_result_row(row, c);
    std::cout << airpf::cell_key(c) << " mse=" << airpf::format_shortest(c.mse) << '\n';
    done.push_back(c);
  };
  if (single) {
    options.on_run = [&](const std::string&, std::size_t j, const airpf::FilterRun& run) {
      auto csv = open_output(out / ("run_" + std::to_string(j + 1) + ".csv"));
      airpf::write_filter_run_csv(csv, run);
    };
  }
  airpf::run_grid(grid, data, options);

  nlohmann::json summary;
  summary["d"] = grid.params.dim;
  summary["n_max"] = grid.n_max;
  summary["J"] = grid.runs;
  summary["data_seed"] = grid.data_seed;
  summary["run_seed_base"] = grid.run_seed_base;
  summary["mode"] = std::string(airpf::to_string(grid.mode));
  summary["raw_observation_mse"] = airpf::raw_observation_mse(data.observations, truth, grid.runs);
  summary["cells"] = nlohmann::json::array();
  for (const auto& c : done) {
    summary["cells"].push_back(cell_json(c));
  }
  auto json_out = open_output(out / "summary.json");
  json_out << summary.dump(2) << '\n';
  return 0;
}

int cmd_envelope(const std::string& input, const std::string& out_dir) {
  std::ifstream in(input);
  if (!in) {
    throw airpf::Error("cannot read " + input);
  }
  const auto cells = airpf::read_results_csv(in);
  if (cells.empty()) {
    throw airpf::ShapeError(input + " has no result rows");
  }
  const fs::path out{out_dir};
  fs::create_directories(out);
  auto csv = open_output(out / "envelope.csv");
  airpf::write_envelope_csv(csv, airpf::lower_envelope(airpf::envelope_points(cells)));
  std::cout << "wrote " << (out / "envelope.csv").string() << '\n';
  return 0;
}

int cmd_drill(std::size_t pes, std::size_t hot, std::uint64_t seed, double cold) {
  const std::size_t rounds = airpf::dissemination_drill(pes, hot, seed, cold);
  nlohmann::json j;
  j["m"] = pes;
  j["hot_island"] = hot;
  j["cold_weight"] = cold;
  j["rounds"] = rounds;
  j["log2_m"] = static_cast<std::size_t>(std::log2(static_cast<double>(pes)));
  std::cout << j.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Butterfly-resampled island particle filters on a random walk benchmark"};
  app.require_subcommand(1);

  CommonOptions common;
  CellOptions cell;

  auto* simulate = app.add_subcommand("simulate", "Simulate a dataset (dataset.csv, states.csv)");
  add_common(*simulate, common);

  auto* kalman = app.add_subcommand("kalman", "Exact filtering means (kalman.csv)");
  add_common(*kalman, common);
  kalman->add_option("--data", common.data, "Observation CSV to use instead of simulating")
      ->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Run one cell (results.csv, run_<j>.csv, summary.json)");
  add_cell(*run, common, cell, false);

  auto* grid = app.add_subcommand("grid", "Run a grid of cells (results.csv, summary.json)");
  add_cell(*grid, common, cell, true);

  std::string envelope_in{"results.csv"};
  auto* envelope = app.add_subcommand("envelope", "Lower envelopes of a results table (envelope.csv)");
  envelope->add_option("--in", envelope_in, "results.csv to read")->check(CLI::ExistingFile);
  envelope->add_option("--out", common.out, "Output directory");

  std::size_t drill_m{4};
  std::size_t drill_hot{1};
  double drill_cold{1e-30};
  auto* drill = app.add_subcommand("drill", "Rounds until one heavy island reaches every PE");
  drill->add_option("--m", drill_m, "PE count (power of two)");
  drill->add_option("--hot", drill_hot, "1-based index of the heavy island");
  drill->add_option("--cold", drill_cold, "Weight of the other islands");
  drill->add_option("--seed", common.seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      return cmd_simulate(common);
    }
    if (*kalman) {
      return cmd_kalman(common);
    }
    if (*run) {
      return cmd_grid(common, cell, true);
    }
    if (*grid) {
      return cmd_grid(common, cell, false);
    }
    if (*envelope) {
      return cmd_envelope(envelope_in, common.out);
    }
    if (*drill) {
      return cmd_drill(drill_m, drill_hot, common.seed, drill_cold);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
