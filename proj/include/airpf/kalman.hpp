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

#ifndef AIRPF_KALMAN_HPP
#define AIRPF_KALMAN_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airpf/model.hpp"
#include "airpf/series.hpp"

/**
 * \file
 * \brief Exact filtering for the random walk model, used as ground truth.
 */

namespace airpf {

/// Filtering mean and covariance after assimilating Y_n.
struct KalmanState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Kalman filter exploiting isotropy: one scalar variance per step.
/**
 * Starts from the prior N(0, initial_variance I) and updates with every
 * observation including Y_0. Throws NumericInputError on non-finite
 * observations and ShapeError on a dimension mismatch.
 */
std::vector<KalmanState> kalman_filter(const RandomWalkParams& params, const Series& observations);

/// Generic dense Kalman filter with a Joseph-form covariance update.
std::vector<KalmanState> kalman_filter_dense(const RandomWalkParams& params, const Series& observations);

/// The filtering means as a series (for CSV export and MSE).
Series kalman_means(std::span<const KalmanState> states);

/// Sum over steps and coordinates of squared error, averaged over runs.
/**
 * (1/J) sum_j sum_n sum_i (estimate_{n,j}^i - truth_n^i)^2 with J = estimates.size().
 * Throws ShapeError when any run disagrees with the truth in length or dimension.
 */
double mse(std::span<const Series> estimates, const Series& truth_means);
double mse(std::span<const Series> estimates, std::span<const KalmanState> truth);

}  // namespace airpf

#endif  // AIRPF_KALMAN_HPP
