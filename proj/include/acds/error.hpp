/*
 * Copyright 2026 The ACDS Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace acds {

/// Base class for every error raised by the toolkit. `kind()` is a stable
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ACDS_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(tag, what) {}       \
  }

ACDS_DEFINE_ERROR(InvalidExponentError, "invalid_exponent");
ACDS_DEFINE_ERROR(DimensionMismatchError, "dimension_mismatch");
ACDS_DEFINE_ERROR(ConvergenceError, "convergence");
ACDS_DEFINE_ERROR(UnsupportedConfigurationError, "unsupported_configuration");
ACDS_DEFINE_ERROR(SolverError, "solver");
ACDS_DEFINE_ERROR(DivergenceError, "divergence");
ACDS_DEFINE_ERROR(PreconditionError, "precondition");
ACDS_DEFINE_ERROR(ConfigurationError, "configuration");
ACDS_DEFINE_ERROR(IoError, "io");

#undef ACDS_DEFINE_ERROR

}  // namespace acds
