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

#ifndef AIRPF_SERIES_HPP
#define AIRPF_SERIES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "airpf/errors.hpp"

namespace airpf {

/// A row-major table of `rows` vectors of length `dim`: states, observations, estimates.
class Series {
 public:
  Series() = default;
  Series(std::size_t rows, std::size_t dim) : dim_{dim}, values_(rows * dim, 0.0) {}
  Series(std::size_t dim, std::vector<double> values) : dim_{dim}, values_{std::move(values)} {
    if (dim_ == 0 || values_.size() % dim_ != 0) {
      throw ShapeError("series values are not a whole number of rows");
    }
  }

  [[nodiscard]] std::size_t rows() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool empty() const { return values_.empty(); }

  [[nodiscard]] std::span<double> row(std::size_t n) { return {values_.data() + n * dim_, dim_}; }
  [[nodiscard]] std::span<const double> row(std::size_t n) const { return {values_.data() + n * dim_, dim_}; }

  double& operator()(std::size_t n, std::size_t i) { return values_[n * dim_ + i]; }
  double operator()(std::size_t n, std::size_t i) const { return values_[n * dim_ + i]; }

  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  void push_back(std::span<const double> row) {
    if (dim_ == 0) {
      dim_ = row.size();
    }
    if (row.size() != dim_) {
      throw ShapeError("row dimension mismatch");
    }
    values_.insert(values_.end(), row.begin(), row.end());
  }

  friend bool operator==(const Series&, const Series&) = default;

 private:
  std::size_t dim_{0};
  std::vector<double> values_;
};

}  // namespace airpf

#endif  // AIRPF_SERIES_HPP
