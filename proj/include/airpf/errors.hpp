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

#ifndef AIRPF_ERRORS_HPP
#define AIRPF_ERRORS_HPP

#include <stdexcept>
#include <string>

/**
 * \file
 * \brief Exception types thrown by the library.
 */

namespace airpf {

/// Base class of every exception thrown by airpf.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array lengths or dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain of an operation (e.g. a nonpositive weight).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// PE count is not a power of two, or a schedule does not match its topology.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, such as a resampling threshold out of range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite numeric input.
class NumericInputError : public Error {
 public:
  using Error::Error;
};

/// A trajectory of zero length was requested.
class EmptyTrajectoryError : public Error {
 public:
  using Error::Error;
};

/// A size guard on a test-only dense construction was exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Worker threads could not be started or failed at runtime.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace airpf

#endif  // AIRPF_ERRORS_HPP
