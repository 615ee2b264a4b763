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

#ifndef AIRPF_TESTING_INTERACTION_MATRIX_HPP
#define AIRPF_TESTING_INTERACTION_MATRIX_HPP

#include <cstddef>

#include <Eigen/Dense>

#include "airpf/butterfly.hpp"

/**
 * \file
 * \brief Dense interaction matrices, for property tests only.
 *
 * The runtime never builds these; they exist to check the pair schedule
 * against the Kronecker-product definition.
 */

namespace airpf::testing {

/// Largest N for which a dense N x N matrix is built.
inline constexpr std::size_t kMaxDenseParticles = 4096;

/// I_{2^(S-s)} (x) (1/2)1_2 (x) I_{2^(s-1)} (x) (1/M)1_M. Throws GuardError when N > 4096.
Eigen::MatrixXd interaction_matrix(const Topology& topology, std::size_t stage);

/// The m x m island matrix (the particle matrix with M = 1).
Eigen::MatrixXd island_interaction_matrix(const Topology& topology, std::size_t stage);

/// Kronecker product, written out directly.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace airpf::testing

#endif  // AIRPF_TESTING_INTERACTION_MATRIX_HPP
