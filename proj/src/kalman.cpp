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

#include "airpf/kalman.hpp"

#include <cmath>

#include "airpf/errors.hpp"

namespace airpf {

namespace {

void check_observations(const RandomWalkParams& params, const Series& observations) {
  if (observations.empty()) {
    throw ShapeError("kalman_filter: empty observation sequence");
  }
  if (observations.dim() != params.dim) {
    throw ShapeError("kalman_filter: observation dimension mismatch");
  }
  for (double v : observations.values()) {
    if (!std::isfinite(v)) {
      throw NumericInputError("kalman_filter: non-finite observation");
    }
  }
}

}  // namespace

std::vector<KalmanState> kalman_filter(const RandomWalkParams& params, const Series& observations) {
  check_observations(params, observations);
  const auto d = static_cast<Eigen::Index>(params.dim);
  std::vector<KalmanState> out;
  out.reserve(observations.rows());

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  double variance = params.initial_variance;
  for (std::size_t n = 0; n < observations.rows(); ++n) {
    const double predicted = n == 0 ? variance : variance + params.process_variance;
    const double gain = predicted / (predicted + params.observation_variance);
    const auto y = observations.row(n);
    for (Eigen::Index i = 0; i < d; ++i) {
      mean[i] += gain * (y[static_cast<std::size_t>(i)] - mean[i]);
    }
    variance = (1.0 - gain) * predicted;
    out.push_back({mean, variance * Eigen::MatrixXd::Identity(d, d)});
  }
  return out;
}

std::vector<KalmanState> kalman_filter_dense(const RandomWalkParams& params, const Series& observations) {
  check_observations(params, observations);
  const auto d = static_cast<Eigen::Index>(params.dim);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd transition = identity;
  const Eigen::MatrixXd observation = identity;
  const Eigen::MatrixXd process_cov = params.process_variance * identity;
  const Eigen::MatrixXd obs_cov = params.observation_variance * identity;

  std::vector<KalmanState> out;
  out.reserve(observations.rows());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd cov = params.initial_variance * identity;
  for (std::size_t n = 0; n < observations.rows(); ++n) {
    if (n > 0) {
      mean = transition * mean;
      cov = transition * cov * transition.transpose() + process_cov;
    }
    const Eigen::MatrixXd innovation_cov = observation * cov * observation.transpose() + obs_cov;
    // K = P H' S^-1, solved as S K' = H P.
    const Eigen::MatrixXd gain = innovation_cov.ldlt().solve(observation * cov).transpose();
    const Eigen::Map<const Eigen::VectorXd> y(observations.row(n).data(), d);
    mean += gain * (y - observation * mean);
    const Eigen::MatrixXd joseph = identity - gain * observation;
    cov = joseph * cov * joseph.transpose() + gain * obs_cov * gain.transpose();
    cov = 0.5 * (cov + cov.transpose());
    out.push_back({mean, cov});
  }
  return out;
}

Series kalman_means(std::span<const KalmanState> states) {
  if (states.empty()) {
    return {};
  }
  Series means(states.size(), static_cast<std::size_t>(states.front().mean.size()));
  for (std::size_t n = 0; n < states.size(); ++n) {
    for (std::size_t i = 0; i < means.dim(); ++i) {
      means(n, i) = states[n].mean[static_cast<Eigen::Index>(i)];
    }
  }
  return means;
}

double mse(std::span<const Series> estimates, const Series& truth_means) {
  if (estimates.empty()) {
    throw ShapeError("mse: no runs");
  }
  double total = 0.0;
  for (const auto& run : estimates) {
    if (run.rows() != truth_means.rows() || run.dim() != truth_means.dim()) {
      throw ShapeError("mse: run shape does not match the truth");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < run.values().size(); ++k) {
      const double e = run.values()[k] - truth_means.values()[k];
      sum += e * e;
    }
    total += sum;
  }
  return total / static_cast<double>(estimates.size());
}

double mse(std::span<const Series> estimates, std::span<const KalmanState> truth) {
  return mse(estimates, kalman_means(truth));
}

}  // namespace airpf
