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

#ifndef AIRPF_RESAMPLE_HPP
#define AIRPF_RESAMPLE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "airpf/butterfly.hpp"
#include "airpf/ensemble.hpp"
#include "airpf/rng.hpp"

/**
 * \file
 * \brief Resampling primitives: multinomial, augmented (particle level),
 * within-island, augmented island (plain and swap-avoiding), and the
 * fully adapted stage controller.
 */

namespace airpf {

/// (mean w)^2 / mean(w^2), in [1/N, 1]. Throws DomainError on empty input or
/// any weight that is not strictly positive.
double effective_sample_size(std::span<const double> weights);

/// The same quantity computed from log weights.
double effective_sample_size_log(std::span<const double> log_weights);

/// log((1/n) sum exp(v)), stable for large negative v.
double log_mean_exp(std::span<const double> values);

/// Normalized cumulative sums of nonnegative weights into `cdf`.
/// Throws DomainError for negative or non-finite weights and for a zero total.
void normalized_cdf(std::span<const double> weights, std::vector<double>& cdf);

/// Normalized cumulative sums of exp(log_weights - max).
void normalized_cdf_from_log(std::span<const double> log_weights, std::vector<double>& cdf);

/// Inverse-CDF lookup of one uniform.
std::size_t sample_from_cdf(std::span<const double> cdf, double u);

/// `count` i.i.d. indices drawn with probability proportional to `weights`.
std::vector<std::size_t> multinomial_ancestors(std::span<const double> weights, std::size_t count, RngStream& rng);

/// Multinomial resampling of all N particles.
ParticleEnsemble multinomial_resample(const ParticleEnsemble& particles, std::span<const double> weights,
                                      RngStream& rng);

/// Output of augmented_resample.
struct AugmentedResult {
  ParticleEnsemble particles;
  /// V_0 .. V_S, each of length N.
  std::vector<std::vector<double>> stage_weights;
  /// Input index each output particle descends from.
  std::vector<std::size_t> sources;
};

/// Multi-stage resampling over the butterfly schedule.
/**
 * At stage s every particle of a paired island (l, r) is drawn from the 2M
 * particles of both islands with probability proportional to V_{s-1}; both
 * islands then carry V_s = window mean of V_{s-1}. After S stages all weights
 * equal the mean input potential.
 */
AugmentedResult augmented_resample(const ParticleEnsemble& particles, std::span<const double> potentials,
                                   const PairSchedule& schedule, RngStream& rng);

/// Output of within_island_resample.
struct WithinIslandResult {
  ParticleEnsemble particles;
  /// Per-particle output weight: the mean potential of the particle's island.
  std::vector<double> out_weights;
  std::vector<std::size_t> sources;
};

/// Each island multinomially resamples its own M particles by their potentials.
WithinIslandResult within_island_resample(const ParticleEnsemble& particles, std::span<const double> potentials,
                                          RngStream& rng);

/// Whether a pure pairwise swap of island blocks is carried out or undone.
enum class IslandMode { plain, modified };

/// What happened in one pair at one stage.
enum class PairOutcome {
  keep_keep,     ///< both PEs keep their own block
  one_copy,      ///< one PE adopts the partner's block
  two_copy,      ///< both PEs adopt each other's block (plain mode)
  swap_avoided,  ///< a pure swap turned into keep-keep (modified mode)
};

std::string_view to_string(PairOutcome outcome);

/// Independent adopt decisions of the two sides of a pair.
struct PairDecision {
  bool left_adopts;   ///< left takes right's block
  bool right_adopts;  ///< right takes left's block
};

/// Draws both decisions with two uniforms: left keeps its own block with
/// probability V_l / (V_l + V_r) and so does right with probability V_r / (V_l + V_r).
PairDecision draw_pair_decision(double left_weight, double right_weight, RngStream& rng);

/// As draw_pair_decision for weights given by their logarithms.
PairDecision draw_pair_decision_log(double left_log_weight, double right_log_weight, RngStream& rng);

/// Effective movement in one pair after applying the mode rule.
struct PairResolution {
  PairOutcome outcome;
  bool left_takes_right;
  bool right_takes_left;
  /// Island blocks moved between the two PEs (0, 1 or 2).
  std::size_t blocks_moved;
};

/// In modified mode a pure exchange (both adopt) becomes keep-keep.
PairResolution resolve_pair(PairDecision decision, IslandMode mode);

/// One pair at one stage, for exchange logs and CSV export.
struct ExchangeRecord {
  std::size_t step{0};
  std::size_t stage{0};
  std::size_t pair{0};  ///< 1-based position of the pair within its stage
  std::size_t left{0};  ///< 1-based PE indices
  std::size_t right{0};
  PairOutcome outcome{PairOutcome::keep_keep};
  std::size_t payload_particles{0};

  friend bool operator==(const ExchangeRecord&, const ExchangeRecord&) = default;
};

/// Island blocks plus per-island weights, transformed stage by stage.
struct IslandState {
  ParticleEnsemble particles;
  std::vector<double> weights;
  /// Input island each current block descends from.
  std::vector<std::size_t> sources;
};

/// Executes one island stage in place, appending one record per pair to `log` if given.
void island_stage(IslandState& state, const PairSchedule& schedule, std::size_t stage, RngStream& rng,
                  IslandMode mode, std::vector<ExchangeRecord>* log = nullptr);

/// Output of island_augmented_resample.
struct IslandResampleResult {
  ParticleEnsemble particles;
  /// V-bar_0 .. V-bar_S, each of length m.
  std::vector<std::vector<double>> stage_weights;
  std::vector<ExchangeRecord> exchanges;
  std::vector<std::size_t> island_sources;
};

/// All S stages of whole-island augmented resampling.
IslandResampleResult island_augmented_resample(const ParticleEnsemble& particles,
                                               std::span<const double> island_weights, const PairSchedule& schedule,
                                               RngStream& rng, IslandMode mode);

/// Stage number reached `offset` steps after `start` in the cyclic order over 1..S.
constexpr std::size_t cyclic_stage(std::size_t start, std::size_t offset, std::size_t stages) {
  return (start - 1 + offset) % stages + 1;
}

/// Throws ConfigError unless theta lies in (1/population, 1].
void check_threshold(double theta, std::size_t population, std::string_view what);

/// Output of fully_adapted_controller.
struct ControllerResult {
  ParticleEnsemble particles;
  std::vector<double> weights;
  std::size_t stages_executed{0};
  std::vector<std::size_t> executed_stages;
  /// ESS of the input followed by the ESS after every executed stage.
  std::vector<double> ess_trace;
  std::vector<ExchangeRecord> exchanges;
  std::vector<std::size_t> island_sources;
};

/// Runs island stages in cyclic order from `start_stage` while the island-level
/// ESS stays below theta, for at most S stages.
/**
 * Throws ConfigError unless theta is in (1/m, 1] and start_stage in 1..S.
 */
ControllerResult fully_adapted_controller(const ParticleEnsemble& particles, std::span<const double> island_weights,
                                          const PairSchedule& schedule, double theta, std::size_t start_stage,
                                          RngStream& rng, IslandMode mode = IslandMode::modified);

/// Relabels island ancestors so that every selected island keeps one copy in place.
/**
 * Islands that were drawn at least once are assigned to themselves first; the
 * remaining copies fill the unselected positions in increasing order.
 */
std::vector<std::size_t> keep_one_copy(std::span<const std::size_t> ancestors);

}  // namespace airpf

#endif  // AIRPF_RESAMPLE_HPP
