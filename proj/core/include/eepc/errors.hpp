// Copyright 2026 The eepc Authors
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

namespace eepc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array shapes disagree with the model dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A requested SINR is at or above the self-interference ceiling.
class UnreachableSinrError : public Error {
 public:
  using Error::Error;
};

/// A rate target implies an SINR above the ceiling, so no power can meet it.
class TargetExceedsMaxSinrError : public Error {
 public:
  using Error::Error;
};

/// The constraint set is empty (rate targets cannot be met within budgets).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A player's strategy set is empty for the current interference profile.
class EmptyStrategySetError : public Error {
 public:
  using Error::Error;
};

/// A rate-percentage target is undefined because the SINR ceiling is infinite.
class TargetUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Linear system has no unique solution.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Configuration file is malformed; message carries file:line context.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed in a way it cannot recover from.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace eepc
