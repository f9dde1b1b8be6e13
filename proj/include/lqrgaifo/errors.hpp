// Copyright 2026 The lqrgaifo Authors
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

#include <stdexcept>
#include <string>

namespace lqrgaifo {

// Failure categories surfaced across the library. The C API maps these onto
// status codes and the CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidArgument,
  NotPositiveDefinite,
  NonFiniteState,
  DegenerateComponent,
  InsufficientData,
  EmptyBatch,
  DegenerateBaseline,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // True for failures that come from the numerics rather than from bad input.
  bool numerical() const noexcept {
    switch (kind_) {
      case ErrorKind::NotPositiveDefinite:
      case ErrorKind::NonFiniteState:
      case ErrorKind::DegenerateComponent:
      case ErrorKind::InsufficientData:
      case ErrorKind::DegenerateBaseline:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace lqrgaifo
