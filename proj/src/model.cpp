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

#include "airpf/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "airpf/errors.hpp"

namespace airpf {

namespace {

const double kLogFloor = std::log(kPotentialFloor);

void check_params(const RandomWalkParams& params) {
  if (params.dim == 0) {
    throw ShapeError("state dimension must be positive");
  }
  if (!(params.initial_variance >= 0.0) || !(params.process_variance >= 0.0) ||
      !(params.observation_variance > 0.0)) {
    throw DomainError("random walk variances must be nonnegative (observation variance positive)");
  }
}

}  // namespace

Dataset simulate_data(const RandomWalkParams& params, std::size_t n_max, std::uint64_t seed) {
  check_params(params);
  if (n_max == 0) {
    throw EmptyTrajectoryError("simulate_data: n_max must be at least 1");
  }
  const std::size_t d = params.dim;
  const double initial_sd = std::sqrt(params.initial_variance);
  const double process_sd = std::sqrt(params.process_variance);
  const double obs_sd = std::sqrt(params.observation_variance);

  RngStream rng{seed, stream_id(StreamPurpose::simulate, 0, 0)};
  Dataset data{Series(n_max, d), Series(n_max, d)};
  for (std::size_t n = 0; n < n_max; ++n) {
    auto state = data.states.row(n);
    auto obs = data.observations.row(n);
    for (std::size_t i = 0; i < d; ++i) {
      if (n == 0) {
        state[i] = initial_sd * rng.normal();
      } else {
        state[i] = data.states(n - 1, i) + process_sd * rng.normal();
      }
      obs[i] = state[i] + obs_sd * rng.normal();
    }
  }
  return data;
}

RandomWalkModel::RandomWalkModel(RandomWalkParams params, Series observations)
    : params_{params},
      observations_{std::move(observations)},
      initial_sd_{std::sqrt(params.initial_variance)},
      process_sd_{std::sqrt(params.process_variance)},
      log_norm_{-0.5 * static_cast<double>(params.dim) *
                std::log(2.0 * std::numbers::pi * params.observation_variance)} {
  check_params(params_);
  if (!observations_.empty() && observations_.dim() != params_.dim) {
    throw ShapeError("observation dimension does not match the model dimension");
  }
}

void RandomWalkModel::sample_initial(std::span<double> x, RngStream& rng) const {
  for (auto& xi : x) {
    xi = initial_sd_ * rng.normal();
  }
}

void RandomWalkModel::transition(std::span<double> x, RngStream& rng) const {
  for (auto& xi : x) {
    xi += process_sd_ * rng.normal();
  }
}

double RandomWalkModel::log_potential(std::size_t n, std::span<const double> x) const {
  const auto y = observations_.row(n);
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - y[i];
    sq += r * r;
  }
  return std::max(log_norm_ - 0.5 * sq / params_.observation_variance, kLogFloor);
}

double gaussian_potential(const RandomWalkModel& model, std::size_t n, std::span<const double> x) {
  if (x.size() != model.dim()) {
    throw ShapeError("gaussian_potential: state dimension mismatch");
  }
  if (n >= model.steps()) {
    throw DomainError("gaussian_potential: time index past the observation sequence");
  }
  const double log_g = model.log_potential(n, x);
  return log_g <= kLogFloor ? kPotentialFloor : std::exp(log_g);
}

}  // namespace airpf
