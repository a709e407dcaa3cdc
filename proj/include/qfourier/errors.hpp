// Copyright 2026 The qfourier Authors.
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
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfourier {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid model, data or experiment configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A caller broke an operation's precondition (shape or length mismatch).
class ContractError : public Error {
  public:
    using Error::Error;
};

/// A request would exceed a configured resource cap.
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// Degenerate input for scaling, metrics or fits (zero variance, rank deficiency).
class DegenerateError : public Error {
  public:
    using Error::Error;
};

/// Non-finite values during optimization.
class NumericError : public Error {
  public:
    NumericError(const std::string &what, std::size_t iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

  private:
    std::size_t iteration_;
};

} // namespace qfourier
