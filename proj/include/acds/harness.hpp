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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "acds/solver.hpp"

namespace acds {

inline constexpr const char* kTraceHeader = "k,f_y,gap,oracle_calls,elapsed_ms";
inline constexpr const char* kBoundHeader = "N,bound_n2,bound_n1sq";

struct ProblemDescriptor {
  std::string kind = "quadratic";
  std::size_t n = 10;
  std::uint64_t seed = 0;
};

struct ExperimentSpec {
  ProblemDescriptor problem;
  std::vector<double> p_values;
  std::vector<std::uint64_t> seeds;
  Stopping stopping;
  std::optional<std::size_t> checkpoint_stride;
  std::filesystem::path output_dir;
  /// Parallel runs; 1 selects the serial reference loop, 0 uses every
  /// available OpenMP thread.
  int workers = 0;

  /// Throws ConfigurationError on an empty seed/p list, p outside [1, 2] or
  /// an unknown problem kind.
  void validate() const;
};

struct RunSummary {
  std::uint64_t seed = 0;
  double p = 0.0;
  std::optional<double> theta;
  double c_const = 0.0;
  std::size_t iterations = 0;
  double final_gap = 0.0;
  std::optional<std::size_t> iterations_to_eps;
  std::string trace_path;
  std::optional<std::string> error;
};

struct CheckpointStats {
  std::size_t k = 0;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PAggregate {
  double p = 0.0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::vector<CheckpointStats> checkpoints;
  /// One entry per completed seed, in seed order; empty when not reached.
  std::vector<std::optional<std::size_t>> iterations_to_eps;
  /// Unreached seeds count as +inf; empty if the median itself is +inf.
  std::optional<double> median_iterations_to_eps;
};

struct AggregateSummary {
  std::vector<PAggregate> per_p;
  std::vector<RunSummary> runs;

  const PAggregate& for_p(double p) const;
};

/// Everything the aggregation needs from one run; recoverable from a trace
/// CSV plus its (p, seed) labels.
struct RunTrace {
  double p = 0.0;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
  bool failed = false;
};

/// Pure function of the traces: per-(p, checkpoint) gap statistics and
/// per-p iterations-to-eps (first checkpoint with gap <= eps).
std::vector<PAggregate> aggregate(const std::vector<RunTrace>& traces,
                                  const std::vector<double>& p_order,
                                  std::optional<double> eps);

struct BoundPoint {
  std::size_t N = 0;
  double bound_n2 = 0.0;
  double bound_n1sq = 0.0;
};

/// Theoretical bound sampled at the given checkpoints (N = 0 is skipped).
std::vector<BoundPoint> bound_curve(double theta, double L, double C,
                                    const std::vector<std::size_t>& checkpoints);

struct ExperimentResult {
  AggregateSummary summary;
  /// Indexed like summary.runs; empty optional for failed runs.
  std::vector<std::optional<RunRecord>> records;
  std::filesystem::path summary_path;
};

/// Runs every (p, seed) pair on one shared problem instance. A given seed
/// index replays the same direction stream for every p. Writes one trace
/// CSV per run, one bound-curve CSV per p and summary.json. Solver errors
/// are recorded per run and do not abort the sweep.
ExperimentResult run_experiment(const ExperimentSpec& spec);

QuadraticProblem build_problem(const ProblemDescriptor& problem);

// Serialization ------------------------------------------------------------

std::string format_real(double x);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
/// Throws IoError on a missing file or a header other than kTraceHeader.
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);
void write_bound_csv(const std::filesystem::path& path,
                     const std::vector<BoundPoint>& curve);

nlohmann::json config_json(const AcdsConfig& cfg);
/// FNV-1a 64 of the canonical config JSON, hex encoded.
std::string config_hash(const AcdsConfig& cfg);
nlohmann::json run_metadata_json(const RunRecord& record,
                                 const ProblemDescriptor& problem);
nlohmann::json spec_json(const ExperimentSpec& spec);
nlohmann::json summary_json(const ExperimentSpec& spec, const AggregateSummary& summary);

std::string trace_file_name(double p, std::uint64_t seed);
std::string bound_file_name(double p);

namespace reference {
/// Serial sweep kept as the reference for the OpenMP job loop.
ExperimentResult run_experiment(const ExperimentSpec& spec);
}  // namespace reference

}  // namespace acds
