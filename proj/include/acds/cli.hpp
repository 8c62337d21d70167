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

#include <iosfwd>

namespace acds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< solver, configuration or I/O error
inline constexpr int kExitUsage = 2;    ///< invalid flags or config keys

/// Entry point behind the `acds` binary. Subcommands: run, sweep, verify,
/// counterexample, bound. Failures print one JSON line
/// {"error": kind, "message": ...} to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acds::cli
