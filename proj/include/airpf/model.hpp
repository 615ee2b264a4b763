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

#ifndef AIRPF_MODEL_HPP
#define AIRPF_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "airpf/rng.hpp"
#include "airpf/series.hpp"

/**
 * \file
 * \brief Hidden Markov model interface and the linear-Gaussian random-walk benchmark.
 */

namespace airpf {

/// Smallest value a potential may take after flooring.
inline constexpr double kPotentialFloor = 1e-300;

/// A hidden Markov model with fixed observations.
/**
 * Implementations must be pure after construction: sampling is a function of
 * the passed stream only, and all members are safe to call concurrently.
 */
class StateSpaceModel {
 public:
  virtual ~StateSpaceModel() = default;

  /// State dimension.
  [[nodiscard]] virtual std::size_t dim() const = 0;
  /// Number of observations, i.e. filter steps.
  [[nodiscard]] virtual std::size_t steps() const = 0;

  /// Draws X_0 into `x`.
  virtual void sample_initial(std::span<double> x, RngStream& rng) const = 0;
  /// Replaces `x` by a draw from the transition kernel started at `x`.
  virtual void transition(std::span<double> x, RngStream& rng) const = 0;
  /// Log of the potential g_n(x), floored at log(kPotentialFloor).
  [[nodiscard]] virtual double log_potential(std::size_t n, std::span<const double> x) const = 0;
};

/// Parameters of X_n = X_{n-1} + eta_n, Y_n = X_n + eps_n with isotropic Gaussian noise.
struct RandomWalkParams {
  std::size_t dim{1};
  double initial_variance{1.0};
  double process_variance{1.0};
  double observation_variance{0.25};
};

/// Hidden states and observations of one simulated data set.
struct Dataset {
  Series states;
  Series observations;
};

/// Simulates `n_max` steps of the random walk model.
/**
 * Deterministic per seed. Throws EmptyTrajectoryError when n_max is zero.
 */
Dataset simulate_data(const RandomWalkParams& params, std::size_t n_max, std::uint64_t seed);

/// The random walk model conditioned on an observation sequence.
class RandomWalkModel final : public StateSpaceModel {
 public:
  RandomWalkModel(RandomWalkParams params, Series observations);

  [[nodiscard]] std::size_t dim() const override { return params_.dim; }
  [[nodiscard]] std::size_t steps() const override { return observations_.rows(); }
  void sample_initial(std::span<double> x, RngStream& rng) const override;
  void transition(std::span<double> x, RngStream& rng) const override;
  [[nodiscard]] double log_potential(std::size_t n, std::span<const double> x) const override;

  [[nodiscard]] const RandomWalkParams& params() const { return params_; }
  [[nodiscard]] const Series& observations() const { return observations_; }

 private:
  RandomWalkParams params_;
  Series observations_;
  double initial_sd_;
  double process_sd_;
  double log_norm_;
};

/// Density of N(y_n; x, observation_variance * I) at x, floored at kPotentialFloor.
/**
 * Throws ShapeError when x has the wrong dimension and DomainError when n is
 * past the end of the observations.
 */
double gaussian_potential(const RandomWalkModel& model, std::size_t n, std::span<const double> x);

}  // namespace airpf

#endif  // AIRPF_MODEL_HPP
