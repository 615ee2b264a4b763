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

#ifndef AIRPF_ENSEMBLE_HPP
#define AIRPF_ENSEMBLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "airpf/butterfly.hpp"
#include "airpf/errors.hpp"

namespace airpf {

/// N = m*M particles of dimension d, stored particle-major. Island k (0-based)
/// owns particles kM .. (k+1)M-1.
class ParticleEnsemble {
 public:
  ParticleEnsemble(Topology topology, std::size_t dim)
      : topology_{topology}, dim_{dim}, data_(topology.particles() * dim, 0.0) {}

  ParticleEnsemble(Topology topology, std::size_t dim, std::vector<double> data)
      : topology_{topology}, dim_{dim}, data_{std::move(data)} {
    if (data_.size() != topology_.particles() * dim_) {
      throw ShapeError("ensemble data does not hold m*M*d values");
    }
  }

  [[nodiscard]] const Topology& topology() const { return topology_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return topology_.particles(); }

  [[nodiscard]] std::span<double> particle(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  [[nodiscard]] std::span<const double> particle(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  /// All M particles of island k as one contiguous block.
  [[nodiscard]] std::span<double> island(std::size_t k) {
    const std::size_t block = topology_.per_pe() * dim_;
    return {data_.data() + k * block, block};
  }
  [[nodiscard]] std::span<const double> island(std::size_t k) const {
    const std::size_t block = topology_.per_pe() * dim_;
    return {data_.data() + k * block, block};
  }

  [[nodiscard]] const std::vector<double>& data() const { return data_; }

  friend bool operator==(const ParticleEnsemble&, const ParticleEnsemble&) = default;

 private:
  Topology topology_;
  std::size_t dim_;
  std::vector<double> data_;
};

}  // namespace airpf

#endif  // AIRPF_ENSEMBLE_HPP
