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

#include "airpf/filters.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <utility>

#include "airpf/csv.hpp"
#include "airpf/ensemble.hpp"
#include "airpf/errors.hpp"

namespace airpf {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kAlgorithmNames{{
    {Algorithm::bpf, "BPF"},
    {Algorithm::bpf_augmented, "BPF_AUGMENTED"},
    {Algorithm::airpf_plain, "AIRPF_PLAIN"},
    {Algorithm::airpf_modified, "AIRPF_MODIFIED"},
    {Algorithm::ipf1, "IPF1"},
    {Algorithm::ipf2, "IPF2"},
}};

/// Per-PE counters, summed in PE order at the end of every step.
struct PeCounters {
  std::uint64_t weight_msgs{0};
  std::uint64_t payload_particles{0};
};

/// 1-based position of the pair whose left PE is `left` (0-based) at `stage`.
std::size_t pair_position(std::size_t left, std::size_t stage) {
  const std::size_t half = std::size_t{1} << (stage - 1);
  return (left / (2 * half)) * half + left % half + 1;
}

class FilterDriver {
 public:
  FilterDriver(const StateSpaceModel& model, const FilterConfig& config, PeExecutor& executor)
      : model_{model},
        config_{config},
        executor_{executor},
        schedule_{build_schedule(config.topology)},
        pes_{config.topology.pes()},
        per_pe_{config.topology.per_pe()},
        dim_{model.dim()},
        current_{config.topology, model.dim()},
        next_{config.topology, model.dim()},
        log_w_(config.topology.particles(), 0.0),
        log_u_(config.topology.particles(), 0.0),
        island_log_(config.topology.pes(), 0.0),
        mailboxes_{config.topology.pes()},
        counters_(config.topology.pes()),
        exchanges_(config.topology.pes()) {
    if (executor.workers() != pes_) {
      throw ConfigError("executor worker count must equal the PE count");
    }
    if (model.steps() == 0) {
      throw EmptyTrajectoryError("filter: model has no observations");
    }
    validate_threshold();
  }

  FilterRun run() {
    const std::size_t n_max = model_.steps();
    run_.algorithm = config_.algorithm;
    run_.estimates = Series(n_max, dim_);
    run_.predictive = Series(n_max + 1, dim_);
    if (config_.record_island_estimates) {
      run_.island_predictive.assign(pes_, Series(n_max + 1, dim_));
    }
    run_.ess.reserve(n_max);
    run_.stages.reserve(n_max);

    const auto start = std::chrono::steady_clock::now();
    initialize();
    for (std::size_t n = 0; n < n_max; ++n) {
      step_ = {};
      weigh(n);
      record(n);
      std::copy(log_u_.begin(), log_u_.end(), log_w_.begin());
      std::size_t stages = 0;
      switch (config_.algorithm) {
        case Algorithm::bpf:
          stages = resample_bpf(n);
          break;
        case Algorithm::bpf_augmented:
          stages = resample_bpf_augmented(n);
          break;
        case Algorithm::airpf_plain:
        case Algorithm::airpf_modified:
          stages = resample_airpf(n);
          break;
        case Algorithm::ipf1:
          stages = resample_between(n, 1);
          resample_within(n);
          break;
        case Algorithm::ipf2:
          resample_within(n);
          stages = resample_between(n, 2);
          break;
      }
      run_.stages.push_back(stages);
      normalize_weights();
      mutate(n);
      finish_step();
    }
    record_predictive(n_max);
    run_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run_.comm.inbox_messages = mailboxes_.delivered();
    run_.comm.cross_pair_violations = mailboxes_.violations();
    return std::move(run_);
  }

 private:
  void validate_threshold() const {
    if (!config_.theta) {
      return;
    }
    const double theta = *config_.theta;
    const std::size_t total = config_.topology.particles();
    switch (config_.algorithm) {
      case Algorithm::bpf:
      case Algorithm::bpf_augmented:
        if (total > 1) {
          check_threshold(theta, total, to_string(config_.algorithm));
        }
        break;
      case Algorithm::airpf_plain:
      case Algorithm::airpf_modified:
        if (pes_ > 1) {
          check_threshold(theta, pes_, to_string(config_.algorithm));
        }
        break;
      case Algorithm::ipf1:
      case Algorithm::ipf2:
        if (pes_ > 1) {
          check_threshold(theta, pes_, "island level");
        }
        if (per_pe_ > 1) {
          check_threshold(theta, per_pe_, "within-island level");
        }
        break;
    }
  }

  std::span<double> island_log_w(std::size_t k) { return {log_w_.data() + k * per_pe_, per_pe_}; }
  std::span<const double> island_log_u(std::size_t k) const { return {log_u_.data() + k * per_pe_, per_pe_}; }

  void copy_island(std::size_t from, std::size_t to) {
    const auto src = current_.island(from);
    std::copy(src.begin(), src.end(), next_.island(to).begin());
  }

  void initialize() {
    executor_.for_each_pe([this](std::size_t k) {
      RngStream rng{config_.seed, stream_id(StreamPurpose::initialize, 0, k)};
      for (std::size_t j = 0; j < per_pe_; ++j) {
        model_.sample_initial(current_.particle(k * per_pe_ + j), rng);
      }
    });
  }

  void weigh(std::size_t n) {
    executor_.for_each_pe([this, n](std::size_t k) {
      for (std::size_t j = 0; j < per_pe_; ++j) {
        const std::size_t i = k * per_pe_ + j;
        log_u_[i] = log_w_[i] + model_.log_potential(n, current_.particle(i));
      }
    });
  }

  /// Weighted mean of particles [begin, end) under log weights `log_weights`.
  void weighted_mean(std::span<const double> log_weights, std::size_t begin, std::size_t end,
                     std::span<double> out) const {
    const double top = *std::max_element(log_weights.begin() + static_cast<std::ptrdiff_t>(begin),
                                         log_weights.begin() + static_cast<std::ptrdiff_t>(end));
    std::fill(out.begin(), out.end(), 0.0);
    double total = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double w = std::exp(log_weights[i] - top);
      total += w;
      const auto x = current_.particle(i);
      for (std::size_t c = 0; c < dim_; ++c) {
        out[c] += w * x[c];
      }
    }
    for (auto& v : out) {
      v /= total;
    }
  }

  void record_predictive(std::size_t n) {
    weighted_mean(log_w_, 0, log_w_.size(), run_.predictive.row(n));
    if (config_.record_island_estimates) {
      for (std::size_t k = 0; k < pes_; ++k) {
        weighted_mean(log_w_, k * per_pe_, (k + 1) * per_pe_, run_.island_predictive[k].row(n));
      }
    }
  }

  void record(std::size_t n) {
    record_predictive(n);
    weighted_mean(log_u_, 0, log_u_.size(), run_.estimates.row(n));
    step_ess_ = effective_sample_size_log(log_u_);
    run_.ess.push_back(step_ess_);
  }

  void normalize_weights() {
    const double top = *std::max_element(log_w_.begin(), log_w_.end());
    for (auto& lw : log_w_) {
      lw -= top;
    }
  }

  void mutate(std::size_t n) {
    executor_.for_each_pe([this, n](std::size_t k) {
      RngStream rng{config_.seed, stream_id(StreamPurpose::mutate, n, k)};
      for (std::size_t j = 0; j < per_pe_; ++j) {
        model_.transition(current_.particle(k * per_pe_ + j), rng);
      }
    });
  }

  void finish_step() {
    for (auto& c : counters_) {
      step_.weight_msgs += c.weight_msgs;
      step_.payload_particles += c.payload_particles;
      c = {};
    }
    run_.comm.add_step(step_);
  }

  /// Runs up to S stages in cyclic order, consulting `ess_now` before each when adaptive.
  std::size_t run_stages(const std::function<double()>& ess_now, const std::function<void(std::size_t)>& stage) {
    const std::size_t total = schedule_.stage_count();
    if (total == 0) {
      return 0;
    }
    const std::size_t start = config_.stage_rotation ? next_start_stage_ : 1;
    std::size_t executed = 0;
    std::size_t last = 0;
    for (std::size_t offset = 0; offset < total; ++offset) {
      if (config_.theta) {
        ++run_.comm.ess_evaluations;
        if (!(ess_now() < *config_.theta)) {
          break;
        }
      }
      const std::size_t s = cyclic_stage(start, offset, total);
      stage(s);
      ++executed;
      ++step_.stage_rounds;
      last = s;
    }
    if (config_.stage_rotation && executed > 0) {
      next_start_stage_ = last % total + 1;
    }
    return executed;
  }

  std::size_t resample_bpf(std::size_t n) {
    if (config_.theta && config_.topology.particles() > 1) {
      ++run_.comm.ess_evaluations;
      if (!(step_ess_ < *config_.theta)) {
        return 0;
      }
    }
    RngStream rng{config_.seed, stream_id(StreamPurpose::global, n, 0)};
    std::vector<double> cdf;
    normalized_cdf_from_log(log_u_, cdf);
    std::vector<std::size_t> ancestors(log_u_.size());
    for (auto& a : ancestors) {
      a = sample_from_cdf(cdf, rng.uniform());
    }
    executor_.for_each_pe([this, &ancestors](std::size_t k) {
      for (std::size_t j = 0; j < per_pe_; ++j) {
        const std::size_t i = k * per_pe_ + j;
        const auto src = current_.particle(ancestors[i]);
        std::copy(src.begin(), src.end(), next_.particle(i).begin());
        if (ancestors[i] / per_pe_ != k) {
          ++counters_[k].payload_particles;
        }
        log_w_[i] = 0.0;
      }
    });
    std::swap(current_, next_);
    step_.weight_msgs += (pes_ - 1) * per_pe_;
    return 1;
  }

  std::size_t resample_bpf_augmented(std::size_t n) {
    const auto ess_now = [this] { return effective_sample_size_log(log_w_); };
    const auto stage = [this, n](std::size_t s) {
      executor_.for_each_pe([this, s](std::size_t k) {
        const auto own = island_log_w(k);
        mailboxes_.post(partner_index(k, s), {k, s, {own.begin(), own.end()}});
        counters_[k].weight_msgs += per_pe_;
      });
      executor_.for_each_pe([this, n, s](std::size_t k) {
        const std::size_t partner = partner_index(k, s);
        const Message message = mailboxes_.take(k, partner);
        const std::size_t left = std::min(k, partner);
        const std::size_t right = std::max(k, partner);
        const auto own = island_log_w(k);
        std::vector<double> window;
        window.reserve(2 * per_pe_);
        if (k == left) {
          window.insert(window.end(), own.begin(), own.end());
          window.insert(window.end(), message.values.begin(), message.values.end());
        } else {
          window.insert(window.end(), message.values.begin(), message.values.end());
          window.insert(window.end(), own.begin(), own.end());
        }
        std::vector<double> cdf;
        normalized_cdf_from_log(window, cdf);
        const double stage_weight = log_mean_exp(window);
        RngStream rng{config_.seed, stream_id(StreamPurpose::stage_pe, n, k, s)};
        for (std::size_t j = 0; j < per_pe_; ++j) {
          const std::size_t slot = sample_from_cdf(cdf, rng.uniform());
          const std::size_t island = slot < per_pe_ ? left : right;
          const std::size_t source = island * per_pe_ + slot % per_pe_;
          const auto src = current_.particle(source);
          std::copy(src.begin(), src.end(), next_.particle(k * per_pe_ + j).begin());
          if (island != k) {
            ++counters_[k].payload_particles;
          }
        }
        std::fill(own.begin(), own.end(), stage_weight);
      });
      std::swap(current_, next_);
    };
    return run_stages(ess_now, stage);
  }

  std::size_t resample_airpf(std::size_t n) {
    const IslandMode mode =
        config_.algorithm == Algorithm::airpf_modified ? IslandMode::modified : IslandMode::plain;
    executor_.for_each_pe([this, n](std::size_t k) {
      const auto local = island_log_u(k);
      std::vector<double> cdf;
      normalized_cdf_from_log(local, cdf);
      RngStream rng{config_.seed, stream_id(StreamPurpose::within_island, n, k)};
      for (std::size_t j = 0; j < per_pe_; ++j) {
        const std::size_t source = k * per_pe_ + sample_from_cdf(cdf, rng.uniform());
        const auto src = current_.particle(source);
        std::copy(src.begin(), src.end(), next_.particle(k * per_pe_ + j).begin());
      }
      island_log_[k] = log_mean_exp(local);
    });
    std::swap(current_, next_);

    const auto ess_now = [this] { return effective_sample_size_log(island_log_); };
    const auto stage = [this, n, mode](std::size_t s) {
      executor_.for_each_pe([this, s](std::size_t k) {
        mailboxes_.post(partner_index(k, s), {k, s, {island_log_[k]}});
        counters_[k].weight_msgs += 1;
      });
      executor_.for_each_pe([this, n, s, mode](std::size_t k) {
        const std::size_t partner = partner_index(k, s);
        const Message message = mailboxes_.take(k, partner);
        const std::size_t left = std::min(k, partner);
        const std::size_t right = std::max(k, partner);
        const double own = island_log_[k];
        const double other = message.values.at(0);
        const double log_left = k == left ? own : other;
        const double log_right = k == left ? other : own;
        // Both PEs of a pair draw from the same pair stream, so they agree on
        // the joint outcome without exchanging their decisions.
        RngStream rng{config_.seed, stream_id(StreamPurpose::stage_pair, n, left, s)};
        const auto resolution = resolve_pair(draw_pair_decision_log(log_left, log_right, rng), mode);
        const bool adopts = k == left ? resolution.left_takes_right : resolution.right_takes_left;
        copy_island(adopts ? partner : k, k);
        if (adopts) {
          counters_[k].payload_particles += per_pe_;
        }
        const std::array<double, 2> pair_logs{log_left, log_right};
        island_log_[k] = log_mean_exp(pair_logs);
        if (k == left) {
          exchanges_[k].push_back({n, s, pair_position(left, s), left + 1, right + 1, resolution.outcome,
                                   resolution.blocks_moved * per_pe_});
        }
      });
      std::swap(current_, next_);
      for (auto& log : exchanges_) {
        run_.exchanges.insert(run_.exchanges.end(), log.begin(), log.end());
        log.clear();
      }
    };
    const std::size_t executed = run_stages(ess_now, stage);
    for (std::size_t k = 0; k < pes_; ++k) {
      const auto w = island_log_w(k);
      std::fill(w.begin(), w.end(), island_log_[k]);
    }
    return executed;
  }

  void resample_within(std::size_t n) {
    executor_.for_each_pe([this, n](std::size_t k) {
      const auto local = island_log_w(k);
      bool go = true;
      if (config_.theta && per_pe_ > 1) {
        go = effective_sample_size_log(local) < *config_.theta;
      }
      if (!go) {
        copy_island(k, k);
        return;
      }
      std::vector<double> cdf;
      normalized_cdf_from_log(local, cdf);
      RngStream rng{config_.seed, stream_id(StreamPurpose::within_island, n, k)};
      for (std::size_t j = 0; j < per_pe_; ++j) {
        const std::size_t source = k * per_pe_ + sample_from_cdf(cdf, rng.uniform());
        const auto src = current_.particle(source);
        std::copy(src.begin(), src.end(), next_.particle(k * per_pe_ + j).begin());
      }
      std::fill(local.begin(), local.end(), log_mean_exp(local));
    });
    std::swap(current_, next_);
  }

  std::size_t resample_between(std::size_t n, int variant) {
    if (pes_ == 1) {
      return 0;
    }
    executor_.for_each_pe([this](std::size_t k) { island_log_[k] = log_mean_exp(island_log_w(k)); });
    if (config_.theta) {
      ++run_.comm.ess_evaluations;
      if (!(effective_sample_size_log(island_log_) < *config_.theta)) {
        return 0;
      }
    }
    RngStream rng{config_.seed, stream_id(StreamPurpose::between_island, n, 0)};
    std::vector<double> cdf;
    normalized_cdf_from_log(island_log_, cdf);
    std::vector<std::size_t> drawn(pes_);
    for (auto& a : drawn) {
      a = sample_from_cdf(cdf, rng.uniform());
    }
    const auto ancestors = keep_one_copy(drawn);
    const double pooled = log_mean_exp(island_log_);
    const std::vector<double> before = log_w_;
    executor_.for_each_pe([this, &ancestors, &before, pooled, variant](std::size_t k) {
      const std::size_t a = ancestors[k];
      copy_island(a, k);
      for (std::size_t j = 0; j < per_pe_; ++j) {
        log_w_[k * per_pe_ + j] = before[a * per_pe_ + j] - island_log_[a] + pooled;
      }
      if (a != k) {
        counters_[k].payload_particles += per_pe_;
        if (variant == 1) {
          counters_[k].weight_msgs += per_pe_;
        }
      }
    });
    std::swap(current_, next_);
    std::fill(island_log_.begin(), island_log_.end(), pooled);
    step_.weight_msgs += pes_ - 1;
    return 1;
  }

  const StateSpaceModel& model_;
  FilterConfig config_;
  PeExecutor& executor_;
  PairSchedule schedule_;
  std::size_t pes_;
  std::size_t per_pe_;
  std::size_t dim_;
  ParticleEnsemble current_;
  ParticleEnsemble next_;
  std::vector<double> log_w_;
  std::vector<double> log_u_;
  std::vector<double> island_log_;
  Mailboxes mailboxes_;
  std::vector<PeCounters> counters_;
  std::vector<std::vector<ExchangeRecord>> exchanges_;
  std::size_t next_start_stage_{1};
  double step_ess_{1.0};
  StepComm step_;
  FilterRun run_;
};

FilterRun run_serial(const StateSpaceModel& model, const FilterConfig& config) {
  PeExecutor executor{config.topology.pes(), ExecutionMode::serial};
  return run_filter(model, config, executor);
}

void require(const FilterConfig& config, std::initializer_list<Algorithm> allowed, const char* who) {
  if (std::find(allowed.begin(), allowed.end(), config.algorithm) == allowed.end()) {
    throw ConfigError(std::string(who) + ": unexpected algorithm " + std::string(to_string(config.algorithm)));
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [value, name] : kAlgorithmNames) {
    if (value == algorithm) {
      return name;
    }
  }
  return "UNKNOWN";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto& [value, known] : kAlgorithmNames) {
    if (known.size() == name.size() &&
        std::equal(known.begin(), known.end(), name.begin(), [](char a, char b) {
          return std::toupper(static_cast<unsigned char>(a)) == std::toupper(static_cast<unsigned char>(b));
        })) {
      return value;
    }
  }
  return std::nullopt;
}

FilterRun run_filter(const StateSpaceModel& model, const FilterConfig& config, PeExecutor& executor) {
  return FilterDriver{model, config, executor}.run();
}

FilterRun run_bpf(const StateSpaceModel& model, const FilterConfig& config) {
  require(config, {Algorithm::bpf}, "run_bpf");
  return run_serial(model, config);
}

FilterRun run_bpf_augmented(const StateSpaceModel& model, const FilterConfig& config) {
  require(config, {Algorithm::bpf_augmented}, "run_bpf_augmented");
  return run_serial(model, config);
}

FilterRun run_airpf(const StateSpaceModel& model, const FilterConfig& config) {
  require(config, {Algorithm::airpf_plain, Algorithm::airpf_modified}, "run_airpf");
  return run_serial(model, config);
}

FilterRun run_ipf(const StateSpaceModel& model, const FilterConfig& config, int variant) {
  if (variant != 1 && variant != 2) {
    throw ConfigError("run_ipf: variant must be 1 or 2");
  }
  require(config, {variant == 1 ? Algorithm::ipf1 : Algorithm::ipf2}, "run_ipf");
  return run_serial(model, config);
}

void write_filter_run_csv(std::ostream& out, const FilterRun& run) {
  const std::size_t dim = run.estimates.dim();
  out << 'n';
  for (std::size_t i = 0; i < dim; ++i) {
    out << ",x" << (i + 1);
  }
  out << ",ess,stages,payload\n";
  for (std::size_t n = 0; n < run.estimates.rows(); ++n) {
    out << n;
    for (std::size_t i = 0; i < dim; ++i) {
      out << ',' << format_double(run.estimates(n, i));
    }
    const std::uint64_t payload = n < run.comm.per_step.size() ? run.comm.per_step[n].payload_particles : 0;
    out << ',' << format_double(run.ess[n]) << ',' << run.stages[n] << ',' << payload << '\n';
  }
}

void write_exchange_log_csv(std::ostream& out, const std::vector<ExchangeRecord>& log) {
  out << "step,stage,pair,outcome,payload_particles\n";
  for (const auto& r : log) {
    out << r.step << ',' << r.stage << ',' << r.pair << ',' << to_string(r.outcome) << ',' << r.payload_particles
        << '\n';
  }
}

void write_comm_trace_csv(std::ostream& out, const CommStats& comm) {
  out << "step,stage_rounds,weight_msgs,payload_particles\n";
  for (std::size_t n = 0; n < comm.per_step.size(); ++n) {
    const auto& s = comm.per_step[n];
    out << n << ',' << s.stage_rounds << ',' << s.weight_msgs << ',' << s.payload_particles << '\n';
  }
}

}  // namespace airpf
