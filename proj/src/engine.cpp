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


#include "airpf/engine.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "airpf/ensemble.hpp"
#include "airpf/errors.hpp"
#include "airpf/resample.hpp"
#include "airpf/rng.hpp"

namespace airpf {

std::string_view to_string(ExecutionMode mode) {
  return mode == ExecutionMode::serial ? "serial" : "threaded";
}

PeExecutor::PeExecutor(std::size_t workers, ExecutionMode mode, std::function<void(std::size_t)> spawn_hook)
    : workers_{workers}, mode_{mode}, errors_(workers) {
  if (workers == 0) {
    throw ConfigError("executor needs at least one worker");
  }
  if (mode_ == ExecutionMode::serial) {
    return;
  }
  threads_.reserve(workers_);
  try {
    for (std::size_t pe = 0; pe < workers_; ++pe) {
      if (spawn_hook) {
        spawn_hook(pe);
      }
      threads_.emplace_back([this, pe] { worker_loop(pe); });
    }
  } catch (const std::exception& e) {
    shutdown();
    throw RuntimeFailure(std::string("failed to start PE worker: ") + e.what());
  }
}

PeExecutor::~PeExecutor() { shutdown(); }

void PeExecutor::shutdown() {
  {
    const std::lock_guard lock{mutex_};
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) {
    if (t.joinable()) {
      t.join();
    }
  }
  threads_.clear();
}

void PeExecutor::worker_loop(std::size_t pe) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t)>* job = nullptr;
    {
      std::unique_lock lock{mutex_};
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) {
        return;
      }
      seen = generation_;
      job = job_;
    }
    try {
      (*job)(pe);
    } catch (...) {
      errors_[pe] = std::current_exception();
    }
    {
      const std::lock_guard lock{mutex_};
      if (--remaining_ == 0) {
        done_cv_.notify_one();
      }
    }
  }
}

void PeExecutor::for_each_pe(const std::function<void(std::size_t)>& job) {
  if (mode_ == ExecutionMode::serial) {
    for (std::size_t pe = 0; pe < workers_; ++pe) {
      job(pe);
    }
    return;
  }
  {
    std::unique_lock lock{mutex_};
    job_ = &job;
    remaining_ = workers_;
    ++generation_;
    start_cv_.notify_all();
    done_cv_.wait(lock, [&] { return remaining_ == 0; });
    job_ = nullptr;
  }
  for (auto& error : errors_) {
    if (error) {
      auto first = std::exchange(error, nullptr);
      std::fill(errors_.begin(), errors_.end(), nullptr);
      std::rethrow_exception(first);
    }
  }
}

void Mailboxes::post(std::size_t to, Message message) {
  auto& slot = slots_.at(to);
  if (slot.has_value()) {
    ++violations_;
  }
  slot = std::move(message);
  ++delivered_;
}

Message Mailboxes::take(std::size_t pe, std::size_t expected_from) {
  auto& slot = slots_.at(pe);
  if (!slot.has_value()) {
    throw RuntimeFailure("mailbox of PE " + std::to_string(pe + 1) + " is empty");
  }
  Message message = std::move(*slot);
  slot.reset();
  if (message.from != expected_from) {
    ++violations_;
  }
  return message;
}

FilterRun execute_parallel(const StateSpaceModel& model, const FilterConfig& config, ExecutionMode mode,
                           std::function<void(std::size_t)> spawn_hook) {
  PeExecutor executor{config.topology.pes(), mode, std::move(spawn_hook)};
  return run_filter(model, config, executor);
}

std::size_t dissemination_drill(std::size_t pes, std::size_t hot_island, std::uint64_t seed, double cold_weight,
                                std::size_t max_rounds) {
  const Topology topology{pes, 1};
  if (hot_island == 0 || hot_island > pes) {
    throw DomainError("dissemination_drill: hot island out of range");
  }
  if (!(cold_weight > 0.0) || !(cold_weight < 1.0)) {
    throw DomainError("dissemination_drill: cold weight must lie in (0, 1)");
  }
  const auto schedule = build_schedule(topology);
  IslandState state{ParticleEnsemble{topology, 1}, std::vector<double>(pes, cold_weight), {}};
  state.weights[hot_island - 1] = 1.0;
  for (std::size_t k = 0; k < pes; ++k) {
    state.sources.push_back(k);
  }
  const auto done = [&] {
    return std::all_of(state.sources.begin(), state.sources.end(),
                       [&](std::size_t s) { return s == hot_island - 1; });
  };
  if (done()) {
    return 0;
  }
  RngStream rng{seed, stream_id(StreamPurpose::stage_pair, 0, 0)};
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    island_stage(state, schedule, cyclic_stage(1, round - 1, schedule.stage_count()), rng, IslandMode::plain);
    if (done()) {
      return round;
    }
  }
  return max_rounds + 1;
}

}  // namespace airpf
