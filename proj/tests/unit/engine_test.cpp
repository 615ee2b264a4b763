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


#include <gtest/gtest.h>

#include <atomic>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "airpf/comm.hpp"
#include "airpf/engine.hpp"
#include "airpf/errors.hpp"
#include "airpf/filters.hpp"
#include "airpf/model.hpp"

namespace {

using airpf::Algorithm;
using airpf::ExecutionMode;
using airpf::FilterConfig;
using airpf::Message;
using airpf::PeExecutor;
using airpf::Topology;

airpf::RandomWalkModel make_model(std::size_t dim, std::size_t n_max, std::uint64_t seed) {
  airpf::RandomWalkParams p;
  p.dim = dim;
  return airpf::RandomWalkModel{p, airpf::simulate_data(p, n_max, seed).observations};
}

std::string csv_of(const airpf::FilterRun& run) {
  std::ostringstream out;
  airpf::write_filter_run_csv(out, run);
  airpf::write_exchange_log_csv(out, run.exchanges);
  airpf::write_comm_trace_csv(out, run.comm);
  return out.str();
}

TEST(PeExecutor, RunsEveryPeOncePerCall) {
  for (auto mode : {ExecutionMode::serial, ExecutionMode::threaded}) {
    PeExecutor executor{8, mode};
    std::vector<int> hits(8, 0);
    for (int round = 0; round < 50; ++round) {
      executor.for_each_pe([&](std::size_t pe) { ++hits[pe]; });
    }
    EXPECT_EQ(hits, std::vector<int>(8, 50));
  }
}

TEST(PeExecutor, RethrowsWorkerExceptionAndStaysUsable) {
  PeExecutor executor{4, ExecutionMode::threaded};
  EXPECT_THROW(executor.for_each_pe([](std::size_t pe) {
    if (pe == 2) {
      throw airpf::DomainError("boom");
    }
  }),
               airpf::DomainError);
  std::atomic<int> count{0};
  executor.for_each_pe([&](std::size_t) { ++count; });
  EXPECT_EQ(count.load(), 4);
}

TEST(PeExecutor, SpawnFailureShutsDownCleanly) {
  const auto hook = [](std::size_t pe) {
    if (pe == 3) {
      throw std::runtime_error("no more threads");
    }
  };
  EXPECT_THROW(PeExecutor(8, ExecutionMode::threaded, hook), airpf::RuntimeFailure);
  const auto model = make_model(1, 5, 1);
  FilterConfig c;
  c.topology = Topology{8, 4};
  c.algorithm = Algorithm::airpf_modified;
  EXPECT_THROW(airpf::execute_parallel(model, c, ExecutionMode::threaded, hook), airpf::RuntimeFailure);
  EXPECT_THROW(PeExecutor(0, ExecutionMode::serial), airpf::ConfigError);
  EXPECT_EQ(airpf::to_string(ExecutionMode::threaded), "threaded");
}

TEST(Mailboxes, CountsViolations) {
  airpf::Mailboxes boxes{4};
  boxes.post(1, Message{0, 1, {0.5}});
  EXPECT_EQ(boxes.take(1, 0).values, std::vector<double>{0.5});
  EXPECT_EQ(boxes.violations(), 0u);
  boxes.post(2, Message{1, 1, {}});
  (void)boxes.take(2, 3);
  EXPECT_EQ(boxes.violations(), 1u);
  boxes.post(0, Message{1, 1, {}});
  boxes.post(0, Message{1, 1, {}});
  EXPECT_EQ(boxes.violations(), 2u);
  EXPECT_EQ(boxes.delivered(), 4u);
  (void)boxes.take(0, 1);
  EXPECT_THROW((void)boxes.take(0, 1), airpf::RuntimeFailure);
}

TEST(ExecuteParallel, ThreadedMatchesSerial) {
  const auto model = make_model(3, 20, 2);
  for (auto a : {Algorithm::bpf, Algorithm::bpf_augmented, Algorithm::airpf_plain, Algorithm::airpf_modified,
                 Algorithm::ipf1, Algorithm::ipf2}) {
    for (std::optional<double> theta : {std::optional<double>{}, std::optional<double>{0.5}}) {
      FilterConfig c;
      c.topology = Topology{8, 6};
      c.algorithm = a;
      c.theta = theta;
      c.stage_rotation = theta.has_value();
      c.seed = 31;
      const auto serial = airpf::execute_parallel(model, c, ExecutionMode::serial);
      const auto threaded = airpf::execute_parallel(model, c, ExecutionMode::threaded);
      EXPECT_EQ(csv_of(serial), csv_of(threaded)) << airpf::to_string(a);
      EXPECT_EQ(serial.estimates, threaded.estimates);
      EXPECT_EQ(serial.comm, threaded.comm);
      EXPECT_EQ(threaded.comm.cross_pair_violations, 0u);
    }
  }
}

TEST(ExecuteParallel, AirpfCounterModel) {
  const auto model = make_model(2, 10, 3);
  FilterConfig c;
  c.topology = Topology{8, 4};
  c.algorithm = Algorithm::airpf_modified;
  const auto out = airpf::execute_parallel(model, c, ExecutionMode::threaded);
  EXPECT_EQ(out.comm.stage_rounds, 30u);
  // 4 pairs x 3 stages x 2 weight messages per step
  EXPECT_EQ(out.comm.weight_msgs, 240u);
  EXPECT_EQ(out.comm.inbox_messages, 240u);
  EXPECT_EQ(out.comm.cross_pair_violations, 0u);
  for (const auto& step : out.comm.per_step) {
    EXPECT_EQ(step.weight_msgs, 24u);
    EXPECT_LE(step.payload_particles, 3u * 8u * 4u);
  }
}

TEST(ExecuteParallel, AugmentedCounterModel) {
  const auto model = make_model(1, 6, 4);
  FilterConfig c;
  c.topology = Topology{4, 5};
  c.algorithm = Algorithm::bpf_augmented;
  const auto out = airpf::execute_parallel(model, c, ExecutionMode::threaded);
  for (const auto& step : out.comm.per_step) {
    EXPECT_EQ(step.stage_rounds, 2u);
    // 2 pairs x 2 stages x 2M weights
    EXPECT_EQ(step.weight_msgs, 40u);
    EXPECT_LE(step.payload_particles, 2u * 4u * 5u);
  }
  EXPECT_EQ(out.comm.cross_pair_violations, 0u);
}

TEST(ExecuteParallel, SinglePeSendsNothing) {
  const auto model = make_model(2, 8, 5);
  for (auto a : {Algorithm::bpf, Algorithm::bpf_augmented, Algorithm::airpf_plain, Algorithm::airpf_modified,
                 Algorithm::ipf1, Algorithm::ipf2}) {
    FilterConfig c;
    c.topology = Topology{1, 16};
    c.algorithm = a;
    const auto out = airpf::execute_parallel(model, c, ExecutionMode::threaded);
    EXPECT_EQ(out.comm.weight_msgs, 0u) << airpf::to_string(a);
    EXPECT_EQ(out.comm.payload_particles, 0u);
    EXPECT_EQ(out.comm.inbox_messages, 0u);
  }
}

TEST(DisseminationDrill, LogarithmicRounds) {
  EXPECT_EQ(airpf::dissemination_drill(1, 1, 0), 0u);
  EXPECT_EQ(airpf::dissemination_drill(2, 1, 0), 1u);
  EXPECT_EQ(airpf::dissemination_drill(4, 1, 0), 2u);
  EXPECT_EQ(airpf::dissemination_drill(16, 1, 0), 4u);
  for (std::size_t m = 2; m <= 64; m *= 2) {
    const auto stages = static_cast<std::size_t>(std::countr_zero(m));
    for (std::size_t hot = 1; hot <= m; ++hot) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EXPECT_EQ(airpf::dissemination_drill(m, hot, seed), stages) << m << " " << hot;
      }
    }
  }
}

TEST(DisseminationDrill, Errors) {
  EXPECT_THROW(airpf::dissemination_drill(6, 1, 0), airpf::TopologyError);
  EXPECT_THROW(airpf::dissemination_drill(4, 0, 0), airpf::DomainError);
  EXPECT_THROW(airpf::dissemination_drill(4, 5, 0), airpf::DomainError);
  EXPECT_THROW(airpf::dissemination_drill(4, 1, 0, 0.0), airpf::DomainError);
}

}  // namespace
