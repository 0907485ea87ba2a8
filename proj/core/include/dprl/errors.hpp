// Copyright 2026 The dprl Authors
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

#ifndef DPRL_ERRORS_HPP_
#define DPRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dprl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes do not compose (matmul extents, network input, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside its documented domain (C <= 0, std < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A file could not be decoded (IDX, checkpoint). Messages name the
/// offending field and byte offset.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration is invalid; messages carry JSON field paths.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative numeric routine failed (Jacobi non-convergence,
/// degenerate boundary geometry).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dprl

#endif  // DPRL_ERRORS_HPP_
