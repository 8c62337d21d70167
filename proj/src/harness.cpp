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

#include "acds/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace acds {

namespace fs = std::filesystem;

void ExperimentSpec::validate() const {
  if (problem.kind != "quadratic") {
    throw ConfigurationError("unknown problem kind '" + problem.kind + "'");
  }
  if (problem.n < 2) throw ConfigurationError("problem dimension n must be >= 2");
  if (p_values.empty()) throw ConfigurationError("experiment needs at least one p");
  if (seeds.empty()) throw ConfigurationError("experiment needs at least one seed");
  for (double p : p_values) {
    if (!(p >= 1.0 && p <= 2.0)) {
      throw ConfigurationError("p must lie in [1, 2], got " + format_real(p));
    }
  }
  if (!stopping.max_iterations && !stopping.eps) {
    throw ConfigurationError("experiment needs --iters, --eps, or both");
  }
  if (workers < 0) throw ConfigurationError("workers must be >= 0");
}

const PAggregate& AggregateSummary::for_p(double p) const {
  for (const auto& agg : per_p) {
    if (agg.p == p) return agg;
  }
  throw ConfigurationError("no aggregate for p = " + format_real(p));
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string format_label(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  if (m % 2 == 1) return values[m / 2];
  const double lo = values[m / 2 - 1];
  const double hi = values[m / 2];
  if (std::isinf(lo) || std::isinf(hi)) return std::isinf(lo) ? lo : hi;
  return 0.5 * (lo + hi);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json optional_json(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<PAggregate> aggregate(const std::vector<RunTrace>& traces,
                                  const std::vector<double>& p_order,
                                  std::optional<double> eps) {
  std::vector<PAggregate> out;
  for (double p : p_order) {
    PAggregate agg;
    agg.p = p;
    std::map<std::size_t, std::vector<double>> gaps;
    std::vector<double> reach;
    for (const auto& trace : traces) {
      if (trace.p != p) continue;
      if (trace.failed) {
        ++agg.failed;
        continue;
      }
      ++agg.completed;
      for (const auto& row : trace.rows) gaps[row.k].push_back(row.gap);
      if (eps) {
        std::optional<std::size_t> hit;
        for (const auto& row : trace.rows) {
          if (row.gap <= *eps) {
            hit = row.k;
            break;
          }
        }
        agg.iterations_to_eps.push_back(hit);
        reach.push_back(hit ? static_cast<double>(*hit)
                            : std::numeric_limits<double>::infinity());
      }
    }
    for (auto& [k, values] : gaps) {
      CheckpointStats stats;
      stats.k = k;
      stats.count = values.size();
      double sum = 0.0;
      for (double g : values) sum += g;
      stats.mean = sum / static_cast<double>(values.size());
      stats.min = *std::min_element(values.begin(), values.end());
      stats.max = *std::max_element(values.begin(), values.end());
      stats.median = median_of(values);
      agg.checkpoints.push_back(stats);
    }
    if (!reach.empty()) {
      const double med = median_of(reach);
      if (std::isfinite(med)) agg.median_iterations_to_eps = med;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

std::vector<BoundPoint> bound_curve(double theta, double L, double C,
                                    const std::vector<std::size_t>& checkpoints) {
  std::vector<BoundPoint> curve;
  curve.reserve(checkpoints.size());
  for (std::size_t N : checkpoints) {
    if (N == 0) continue;
    curve.push_back({N, theoretical_bound(theta, L, C, N),
                     theoretical_bound_n1sq(theta, L, C, N)});
  }
  return curve;
}

QuadraticProblem build_problem(const ProblemDescriptor& problem) {
  if (problem.kind != "quadratic") {
    throw ConfigurationError("unknown problem kind '" + problem.kind + "'");
  }
  return quadratic_problem(problem.n, problem.seed);
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << kTraceHeader << '\n';
  char elapsed[40];
  for (const auto& row : rows) {
    std::snprintf(elapsed, sizeof elapsed, "%.3f", row.elapsed_ms);
    out << row.k << ',' << format_real(row.f_y) << ',' << format_real(row.gap) << ','
        << row.oracle_calls << ',' << elapsed << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<TraceRow> read_trace_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw IoError("trace '" + path.string() + "' has a malformed header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell[5];
    for (auto& c : cell) {
      if (!std::getline(fields, c, ',')) {
        throw IoError("trace '" + path.string() + "': short row '" + line + "'");
      }
    }
    try {
      TraceRow row;
      row.k = std::stoull(cell[0]);
      row.f_y = std::stod(cell[1]);
      row.gap = std::stod(cell[2]);
      row.oracle_calls = std::stoull(cell[3]);
      row.elapsed_ms = std::stod(cell[4]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw IoError("trace '" + path.string() + "': bad row '" + line + "'");
    }
  }
  return rows;
}

void write_bound_csv(const fs::path& path, const std::vector<BoundPoint>& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << kBoundHeader << '\n';
  for (const auto& pt : curve) {
    out << pt.N << ',' << format_real(pt.bound_n2) << ',' << format_real(pt.bound_n1sq)
        << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

nlohmann::json config_json(const AcdsConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["p"] = cfg.p;
  j["q"] = cfg.q.to_string();
  j["L"] = cfg.L;
  j["c_const"] = cfg.c_const;
  j["max_iterations"] = optional_json(cfg.stopping.max_iterations);
  j["eps"] = optional_json(cfg.stopping.eps);
  j["seed"] = cfg.seed;
  j["checkpoint_stride"] = cfg.checkpoint_stride;
  return j;
}

std::string config_hash(const AcdsConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_json(cfg).dump())));
  return buf;
}

nlohmann::json run_metadata_json(const RunRecord& record,
                                 const ProblemDescriptor& problem) {
  nlohmann::json j;
  j["config"] = config_json(record.config);
  j["config_hash"] = config_hash(record.config);
  j["problem"] = {{"kind", problem.kind}, {"n", problem.n}, {"problem_seed", problem.seed}};
  j["theta"] = optional_json(record.theta);
  j["c_const"] = record.config.c_const;
  j["seed"] = record.config.seed;
  j["sampler"] = record.sampler_algorithm;
  j["iterations"] = record.iterations;
  j["iterations_to_eps"] = optional_json(record.iterations_to_eps);
  j["final_gap"] = record.rows.empty() ? nlohmann::json(nullptr)
                                       : nlohmann::json(record.rows.back().gap);
  j["warnings"] = record.warnings;
  return j;
}

nlohmann::json spec_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["problem"] = {{"kind", spec.problem.kind},
                  {"n", spec.problem.n},
                  {"problem_seed", spec.problem.seed}};
  j["p_values"] = spec.p_values;
  j["seeds"] = spec.seeds;
  j["max_iterations"] = optional_json(spec.stopping.max_iterations);
  j["eps"] = optional_json(spec.stopping.eps);
  j["checkpoint_stride"] = optional_json(spec.checkpoint_stride);
  return j;
}

nlohmann::json summary_json(const ExperimentSpec& spec, const AggregateSummary& summary) {
  nlohmann::json j;
  j["spec"] = spec_json(spec);
  j["sampler"] = SphereSampler::kAlgorithm;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : summary.runs) {
    nlohmann::json r;
    r["seed"] = run.seed;
    r["p"] = run.p;
    r["theta"] = optional_json(run.theta);
    r["c_const"] = run.c_const;
    r["iterations"] = run.iterations;
    r["final_gap"] = run.final_gap;
    r["iterations_to_eps"] = optional_json(run.iterations_to_eps);
    r["trace_path"] = run.trace_path;
    r["error"] = run.error ? nlohmann::json(*run.error) : nlohmann::json(nullptr);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);

  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& agg : summary.per_p) {
    nlohmann::json a;
    a["p"] = agg.p;
    a["completed"] = agg.completed;
    a["failed"] = agg.failed;
    nlohmann::json reach = nlohmann::json::array();
    for (const auto& it : agg.iterations_to_eps) reach.push_back(optional_json(it));
    a["iterations_to_eps"] = std::move(reach);
    a["median_iterations_to_eps"] = optional_json(agg.median_iterations_to_eps);
    nlohmann::json cps = nlohmann::json::array();
    for (const auto& cp : agg.checkpoints) {
      cps.push_back({{"k", cp.k},
                     {"count", cp.count},
                     {"mean_gap", cp.mean},
                     {"median_gap", cp.median},
                     {"min_gap", cp.min},
                     {"max_gap", cp.max}});
    }
    a["checkpoints"] = std::move(cps);
    aggs.push_back(std::move(a));
  }
  j["aggregates"] = std::move(aggs);
  return j;
}

std::string trace_file_name(double p, std::uint64_t seed) {
  return "trace_p" + format_label(p) + "_seed" + std::to_string(seed) + ".csv";
}

std::string bound_file_name(double p) { return "bound_p" + format_label(p) + ".csv"; }

namespace {

struct Job {
  double p;
  std::uint64_t seed;
};

struct JobOutcome {
  std::optional<RunRecord> record;
  std::optional<std::string> error;
  std::string trace_path;
};

JobOutcome run_job(const ExperimentSpec& spec, const QuadraticProblem& problem,
                   const Job& job) {
  JobOutcome out;
  const fs::path path = spec.output_dir / trace_file_name(job.p, job.seed);
  out.trace_path = path.string();
  try {
    const ProxStructure prox = make_prox(job.p, problem.dim());
    const AcdsConfig cfg = AcdsConfig::make(problem.dim(), job.p, problem.lipschitz(),
                                            spec.stopping, job.seed,
                                            spec.checkpoint_stride);
    // One sampler per seed index: every p replays the same directions.
    SphereSampler sampler(job.seed, problem.dim());
    RunRecord record = run_acds(problem, prox, cfg, sampler);
    write_trace_csv(path, record.rows);
    out.record = std::move(record);
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }
  return out;
}

ExperimentResult execute(const ExperimentSpec& spec, bool parallel) {
  spec.validate();
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec || !fs::is_directory(spec.output_dir)) {
    throw IoError("cannot create output directory '" + spec.output_dir.string() +
                  "': " + ec.message());
  }
  {
    const fs::path probe = spec.output_dir / ".acds_write_probe";
    std::ofstream test(probe);
    if (!test) throw IoError("output directory '" + spec.output_dir.string() +
                             "' is not writable");
    test.close();
    fs::remove(probe, ec);
  }

  const QuadraticProblem problem = build_problem(spec.problem);

  std::vector<Job> jobs;
  for (double p : spec.p_values)
    for (std::uint64_t seed : spec.seeds) jobs.push_back({p, seed});

  std::vector<JobOutcome> outcomes(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
  if (parallel) {
    const int threads = spec.workers > 0 ? spec.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      outcomes[static_cast<std::size_t>(i)] =
          run_job(spec, problem, jobs[static_cast<std::size_t>(i)]);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      outcomes[static_cast<std::size_t>(i)] =
          run_job(spec, problem, jobs[static_cast<std::size_t>(i)]);
    }
  }

  ExperimentResult result;
  std::vector<RunTrace> traces;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const JobOutcome& o = outcomes[i];
    RunSummary s;
    s.seed = jobs[i].seed;
    s.p = jobs[i].p;
    s.trace_path = o.trace_path;
    s.error = o.error;
    RunTrace trace{jobs[i].p, jobs[i].seed, {}, !o.record.has_value()};
    if (o.record) {
      const RunRecord& r = *o.record;
      s.theta = r.theta;
      s.c_const = r.config.c_const;
      s.iterations = r.iterations;
      s.final_gap = r.rows.empty() ? 0.0 : r.rows.back().gap;
      s.iterations_to_eps = r.iterations_to_eps;
      trace.rows = r.rows;
    }
    result.summary.runs.push_back(std::move(s));
    traces.push_back(std::move(trace));
    result.records.push_back(o.record);
  }
  result.summary.per_p = aggregate(traces, spec.p_values, spec.stopping.eps);

  for (double p : spec.p_values) {
    const ProxStructure prox = make_prox(p, problem.dim());
    const double th = theta(prox, problem.x0(), problem.x_star());
    const double c = c_nq(problem.dim(), holder_conjugate(p));
    std::vector<std::size_t> checkpoints;
    for (const auto& cp : result.summary.for_p(p).checkpoints) checkpoints.push_back(cp.k);
    write_bound_csv(spec.output_dir / bound_file_name(p),
                    bound_curve(th, problem.lipschitz(), c, checkpoints));
  }

  result.summary_path = spec.output_dir / "summary.json";
  std::ofstream out(result.summary_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + result.summary_path.string() + "'");
  out << summary_json(spec, result.summary).dump(2) << '\n';
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return execute(spec, spec.workers != 1);
}

namespace reference {
ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return execute(spec, false);
}
}  // namespace reference

}  // namespace acds
