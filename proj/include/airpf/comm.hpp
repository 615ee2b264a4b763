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

#ifndef AIRPF_COMM_HPP
#define AIRPF_COMM_HPP

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

/**
 * \file
 * \brief Simulated processing elements: a phase executor, per-PE mailboxes
 * and communication counters.
 */

namespace airpf {

/// Message counts of one filter step.
struct StepComm {
  std::uint64_t stage_rounds{0};
  std::uint64_t weight_msgs{0};
  std::uint64_t payload_particles{0};

  friend bool operator==(const StepComm&, const StepComm&) = default;
};

/// Communication counters of one filter run.
/**
 * Accounting rules:
 *  - an executed island stage costs 2 weight messages per pair plus M payload
 *    particles for every side that adopts its partner's block;
 *  - a particle-level stage costs 2M weight messages per pair plus one payload
 *    particle per output drawn from the partner's island;
 *  - a global multinomial resample gathers (m-1)M weights to one PE and moves
 *    every particle whose ancestor lives on another PE;
 *  - between-island resampling gathers m-1 island weights and moves M
 *    particles (and, for IPF1, M particle weights) per relocated island.
 * ESS reductions are counted separately in ess_evaluations.
 */
struct CommStats {
  std::uint64_t stage_rounds{0};
  std::uint64_t weight_msgs{0};
  std::uint64_t payload_particles{0};
  std::uint64_t ess_evaluations{0};
  /// Messages delivered through paired mailboxes.
  std::uint64_t inbox_messages{0};
  /// Mailbox deliveries from a PE other than the scheduled partner.
  std::uint64_t cross_pair_violations{0};
  std::vector<StepComm> per_step;

  void add_step(const StepComm& step) {
    stage_rounds += step.stage_rounds;
    weight_msgs += step.weight_msgs;
    payload_particles += step.payload_particles;
    per_step.push_back(step);
  }

  friend bool operator==(const CommStats&, const CommStats&) = default;
};

/// How PE work is executed.
enum class ExecutionMode { serial, threaded };

std::string_view to_string(ExecutionMode mode);

/// Runs one job per PE, either in a loop or on m persistent worker threads.
/**
 * `for_each_pe` returns only after every PE finished the job, which makes each
 * call a barrier between phases. The first exception thrown by any PE is
 * rethrown on the calling thread.
 */
class PeExecutor {
 public:
  /// `spawn_hook` is called before each worker thread is created; an exception
  /// from it is treated as a spawn failure.
  PeExecutor(std::size_t workers, ExecutionMode mode, std::function<void(std::size_t)> spawn_hook = {});
  ~PeExecutor();

  PeExecutor(const PeExecutor&) = delete;
  PeExecutor& operator=(const PeExecutor&) = delete;

  void for_each_pe(const std::function<void(std::size_t)>& job);

  [[nodiscard]] std::size_t workers() const { return workers_; }
  [[nodiscard]] ExecutionMode mode() const { return mode_; }

 private:
  void worker_loop(std::size_t pe);
  void shutdown();

  std::size_t workers_;
  ExecutionMode mode_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* job_{nullptr};
  std::uint64_t generation_{0};
  std::size_t remaining_{0};
  bool stop_{false};
  std::vector<std::exception_ptr> errors_;
};

/// A weight message sent from one PE to its partner at some stage.
struct Message {
  std::size_t from{0};
  std::size_t stage{0};
  std::vector<double> values;
};

/// One inbox slot per PE, filled in one phase and drained in the next.
class Mailboxes {
 public:
  explicit Mailboxes(std::size_t pes) : slots_(pes) {}

  /// Delivers `message` to PE `to`; a second delivery before a take is a violation.
  void post(std::size_t to, Message message);

  /// Removes PE `pe`'s message; counts a violation unless it came from `expected_from`.
  Message take(std::size_t pe, std::size_t expected_from);

  [[nodiscard]] std::uint64_t delivered() const { return delivered_.load(); }
  [[nodiscard]] std::uint64_t violations() const { return violations_.load(); }

 private:
  std::vector<std::optional<Message>> slots_;
  std::atomic<std::uint64_t> delivered_{0};
  std::atomic<std::uint64_t> violations_{0};
};

}  // namespace airpf

#endif  // AIRPF_COMM_HPP
