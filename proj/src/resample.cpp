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

#include "airpf/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "airpf/errors.hpp"

namespace airpf {

namespace {

void check_positive(std::span<const double> weights, const char* what) {
  if (weights.empty()) {
    throw DomainError(std::string(what) + ": empty weight vector");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError(std::string(what) + ": weights must be finite and strictly positive");
    }
  }
}

void copy_particle(const ParticleEnsemble& from, std::size_t i, ParticleEnsemble& to, std::size_t j) {
  const auto src = from.particle(i);
  std::copy(src.begin(), src.end(), to.particle(j).begin());
}

}  // namespace

double effective_sample_size(std::span<const double> weights) {
  check_positive(weights, "effective_sample_size");
  // Scale by the maximum so that squares cannot overflow or underflow.
  const double top = *std::max_element(weights.begin(), weights.end());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    const double v = w / top;
    sum += v;
    sum_sq += v * v;
  }
  const auto n = static_cast<double>(weights.size());
  return (sum * sum) / (n * sum_sq);
}

double effective_sample_size_log(std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw DomainError("effective_sample_size_log: empty weight vector");
  }
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) {
    throw DomainError("effective_sample_size_log: non-finite log weight");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double lw : log_weights) {
    const double v = std::exp(lw - top);
    sum += v;
    sum_sq += v * v;
  }
  const auto n = static_cast<double>(log_weights.size());
  return (sum * sum) / (n * sum_sq);
}

double log_mean_exp(std::span<const double> values) {
  if (values.empty()) {
    throw DomainError("log_mean_exp: empty input");
  }
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) {
    return top;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += std::exp(v - top);
  }
  return top + std::log(sum / static_cast<double>(values.size()));
}

void normalized_cdf(std::span<const double> weights, std::vector<double>& cdf) {
  cdf.resize(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("resampling weights must be finite and nonnegative");
    }
    total += weights[i];
    cdf[i] = total;
  }
  if (!(total > 0.0)) {
    throw DomainError("resampling weights have zero total");
  }
  for (auto& c : cdf) {
    c /= total;
  }
}

void normalized_cdf_from_log(std::span<const double> log_weights, std::vector<double>& cdf) {
  if (log_weights.empty()) {
    throw DomainError("resampling weights have zero total");
  }
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) {
    throw DomainError("resampling log weights are not finite");
  }
  cdf.resize(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    total += std::exp(log_weights[i] - top);
    cdf[i] = total;
  }
  for (auto& c : cdf) {
    c /= total;
  }
}

std::size_t sample_from_cdf(std::span<const double> cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto index = static_cast<std::size_t>(it - cdf.begin());
  return std::min(index, cdf.size() - 1);
}

std::vector<std::size_t> multinomial_ancestors(std::span<const double> weights, std::size_t count, RngStream& rng) {
  std::vector<double> cdf;
  normalized_cdf(weights, cdf);
  std::vector<std::size_t> out(count);
  for (auto& a : out) {
    a = sample_from_cdf(cdf, rng.uniform());
  }
  return out;
}

ParticleEnsemble multinomial_resample(const ParticleEnsemble& particles, std::span<const double> weights,
                                      RngStream& rng) {
  if (weights.size() != particles.size()) {
    throw ShapeError("multinomial_resample: one weight per particle required");
  }
  const auto ancestors = multinomial_ancestors(weights, particles.size(), rng);
  ParticleEnsemble out{particles.topology(), particles.dim()};
  for (std::size_t i = 0; i < ancestors.size(); ++i) {
    copy_particle(particles, ancestors[i], out, i);
  }
  return out;
}

AugmentedResult augmented_resample(const ParticleEnsemble& particles, std::span<const double> potentials,
                                   const PairSchedule& schedule, RngStream& rng) {
  schedule.check(particles.topology());
  if (potentials.size() != particles.size()) {
    throw ShapeError("augmented_resample: one potential per particle required");
  }
  check_positive(potentials, "augmented_resample");

  const std::size_t per_pe = particles.topology().per_pe();
  AugmentedResult result{particles, {}, {}};
  result.stage_weights.emplace_back(potentials.begin(), potentials.end());
  result.sources.resize(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    result.sources[i] = i;
  }

  std::vector<double> window(2 * per_pe);
  std::vector<std::size_t> window_index(2 * per_pe);
  std::vector<double> cdf;
  for (std::size_t s = 1; s <= schedule.stage_count(); ++s) {
    const auto& previous = result.stage_weights.back();
    std::vector<double> current(previous.size());
    ParticleEnsemble next{particles.topology(), particles.dim()};
    std::vector<std::size_t> next_sources(particles.size());

    for (const auto& [left, right] : schedule.stage(s)) {
      const std::size_t islands[2] = {left - 1, right - 1};
      double total = 0.0;
      for (std::size_t side = 0; side < 2; ++side) {
        for (std::size_t j = 0; j < per_pe; ++j) {
          const std::size_t index = islands[side] * per_pe + j;
          window[side * per_pe + j] = previous[index];
          window_index[side * per_pe + j] = index;
          total += previous[index];
        }
      }
      const double mean = total / static_cast<double>(2 * per_pe);
      normalized_cdf(window, cdf);
      for (std::size_t side = 0; side < 2; ++side) {
        for (std::size_t j = 0; j < per_pe; ++j) {
          const std::size_t target = islands[side] * per_pe + j;
          const std::size_t source = window_index[sample_from_cdf(cdf, rng.uniform())];
          copy_particle(result.particles, source, next, target);
          next_sources[target] = result.sources[source];
          current[target] = mean;
        }
      }
    }
    result.particles = std::move(next);
    result.sources = std::move(next_sources);
    result.stage_weights.push_back(std::move(current));
  }
  return result;
}

WithinIslandResult within_island_resample(const ParticleEnsemble& particles, std::span<const double> potentials,
                                          RngStream& rng) {
  if (potentials.size() != particles.size()) {
    throw ShapeError("within_island_resample: one potential per particle required");
  }
  check_positive(potentials, "within_island_resample");
  const std::size_t per_pe = particles.topology().per_pe();
  WithinIslandResult result{ParticleEnsemble{particles.topology(), particles.dim()},
                            std::vector<double>(particles.size()), std::vector<std::size_t>(particles.size())};
  std::vector<double> cdf;
  for (std::size_t k = 0; k < particles.topology().pes(); ++k) {
    const auto local = potentials.subspan(k * per_pe, per_pe);
    normalized_cdf(local, cdf);
    double sum = 0.0;
    for (double g : local) {
      sum += g;
    }
    const double mean = sum / static_cast<double>(per_pe);
    for (std::size_t j = 0; j < per_pe; ++j) {
      const std::size_t source = k * per_pe + sample_from_cdf(cdf, rng.uniform());
      copy_particle(particles, source, result.particles, k * per_pe + j);
      result.sources[k * per_pe + j] = source;
      result.out_weights[k * per_pe + j] = mean;
    }
  }
  return result;
}

std::string_view to_string(PairOutcome outcome) {
  switch (outcome) {
    case PairOutcome::keep_keep:
      return "keep-keep";
    case PairOutcome::one_copy:
      return "one-copy";
    case PairOutcome::two_copy:
      return "two-copy";
    case PairOutcome::swap_avoided:
      return "swap-avoided";
  }
  return "unknown";
}

PairDecision draw_pair_decision(double left_weight, double right_weight, RngStream& rng) {
  const double p_left = left_weight / (left_weight + right_weight);
  const double u_left = rng.uniform();
  const double u_right = rng.uniform();
  return {u_left >= p_left, u_right < p_left};
}

PairDecision draw_pair_decision_log(double left_log_weight, double right_log_weight, RngStream& rng) {
  // p_left = 1 / (1 + exp(log V_r - log V_l)).
  const double p_left = 1.0 / (1.0 + std::exp(right_log_weight - left_log_weight));
  const double u_left = rng.uniform();
  const double u_right = rng.uniform();
  return {u_left >= p_left, u_right < p_left};
}

PairResolution resolve_pair(PairDecision decision, IslandMode mode) {
  if (decision.left_adopts && decision.right_adopts) {
    if (mode == IslandMode::modified) {
      return {PairOutcome::swap_avoided, false, false, 0};
    }
    return {PairOutcome::two_copy, true, true, 2};
  }
  if (decision.left_adopts || decision.right_adopts) {
    return {PairOutcome::one_copy, decision.left_adopts, decision.right_adopts, 1};
  }
  return {PairOutcome::keep_keep, false, false, 0};
}

void island_stage(IslandState& state, const PairSchedule& schedule, std::size_t stage, RngStream& rng,
                  IslandMode mode, std::vector<ExchangeRecord>* log) {
  const auto& pairs = schedule.stage(stage);
  const std::size_t per_pe = state.particles.topology().per_pe();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::size_t left = pairs[p].left - 1;
    const std::size_t right = pairs[p].right - 1;
    const double v_left = state.weights[left];
    const double v_right = state.weights[right];
    const auto resolution = resolve_pair(draw_pair_decision(v_left, v_right, rng), mode);

    if (resolution.left_takes_right && resolution.right_takes_left) {
      auto a = state.particles.island(left);
      auto b = state.particles.island(right);
      std::swap_ranges(a.begin(), a.end(), b.begin());
      std::swap(state.sources[left], state.sources[right]);
    } else if (resolution.left_takes_right) {
      const auto b = state.particles.island(right);
      std::copy(b.begin(), b.end(), state.particles.island(left).begin());
      state.sources[left] = state.sources[right];
    } else if (resolution.right_takes_left) {
      const auto a = state.particles.island(left);
      std::copy(a.begin(), a.end(), state.particles.island(right).begin());
      state.sources[right] = state.sources[left];
    }
    const double mean = 0.5 * (v_left + v_right);
    state.weights[left] = mean;
    state.weights[right] = mean;
    if (log != nullptr) {
      log->push_back({0, stage, p + 1, left + 1, right + 1, resolution.outcome, resolution.blocks_moved * per_pe});
    }
  }
}

IslandResampleResult island_augmented_resample(const ParticleEnsemble& particles,
                                               std::span<const double> island_weights, const PairSchedule& schedule,
                                               RngStream& rng, IslandMode mode) {
  schedule.check(particles.topology());
  if (island_weights.size() != particles.topology().pes()) {
    throw ShapeError("island_augmented_resample: one weight per island required");
  }
  check_positive(island_weights, "island_augmented_resample");

  IslandState state{particles, {island_weights.begin(), island_weights.end()}, {}};
  state.sources.resize(particles.topology().pes());
  for (std::size_t k = 0; k < state.sources.size(); ++k) {
    state.sources[k] = k;
  }
  IslandResampleResult result{particles, {state.weights}, {}, {}};
  for (std::size_t s = 1; s <= schedule.stage_count(); ++s) {
    island_stage(state, schedule, s, rng, mode, &result.exchanges);
    result.stage_weights.push_back(state.weights);
  }
  result.particles = std::move(state.particles);
  result.island_sources = std::move(state.sources);
  return result;
}

void check_threshold(double theta, std::size_t population, std::string_view what) {
  const double lower = 1.0 / static_cast<double>(population);
  if (!(theta > lower && theta <= 1.0)) {
    throw ConfigError(std::string(what) + ": threshold " + std::to_string(theta) + " outside (" +
                      std::to_string(lower) + ", 1]");
  }
}

ControllerResult fully_adapted_controller(const ParticleEnsemble& particles, std::span<const double> island_weights,
                                          const PairSchedule& schedule, double theta, std::size_t start_stage,
                                          RngStream& rng, IslandMode mode) {
  schedule.check(particles.topology());
  const std::size_t stages = schedule.stage_count();
  if (particles.topology().pes() > 1) {
    check_threshold(theta, particles.topology().pes(), "fully_adapted_controller");
  }
  if (stages > 0 && (start_stage < 1 || start_stage > stages)) {
    throw ConfigError("fully_adapted_controller: start stage out of range");
  }
  if (island_weights.size() != particles.topology().pes()) {
    throw ShapeError("fully_adapted_controller: one weight per island required");
  }
  check_positive(island_weights, "fully_adapted_controller");

  IslandState state{particles, {island_weights.begin(), island_weights.end()}, {}};
  state.sources.resize(particles.topology().pes());
  for (std::size_t k = 0; k < state.sources.size(); ++k) {
    state.sources[k] = k;
  }
  ControllerResult result{particles, {}, 0, {}, {}, {}, {}};
  result.ess_trace.push_back(effective_sample_size(state.weights));
  for (std::size_t offset = 0; offset < stages; ++offset) {
    if (!(result.ess_trace.back() < theta)) {
      break;
    }
    const std::size_t s = cyclic_stage(start_stage, offset, stages);
    island_stage(state, schedule, s, rng, mode, &result.exchanges);
    result.executed_stages.push_back(s);
    result.ess_trace.push_back(effective_sample_size(state.weights));
  }
  result.stages_executed = result.executed_stages.size();
  result.particles = std::move(state.particles);
  result.weights = std::move(state.weights);
  result.island_sources = std::move(state.sources);
  return result;
}

std::vector<std::size_t> keep_one_copy(std::span<const std::size_t> ancestors) {
  const std::size_t m = ancestors.size();
  std::vector<std::size_t> counts(m, 0);
  for (auto a : ancestors) {
    if (a >= m) {
      throw DomainError("keep_one_copy: ancestor index out of range");
    }
    ++counts[a];
  }
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> out(m, unset);
  for (std::size_t k = 0; k < m; ++k) {
    if (counts[k] > 0) {
      out[k] = k;
      --counts[k];
    }
  }
  std::size_t donor = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (out[k] != unset) {
      continue;
    }
    while (counts[donor] == 0) {
      ++donor;
    }
    out[k] = donor;
    --counts[donor];
  }
  return out;
}

}  // namespace airpf
