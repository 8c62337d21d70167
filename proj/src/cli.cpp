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

#include "acds/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acds/harness.hpp"
#include "acds/verify.hpp"

namespace acds::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kDescription = "Accelerated random directional search toolkit";

/// Bad flag combinations detected after parsing; maps to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

struct RunOptions {
  std::string problem = "quadratic";
  std::size_t n = 10;
  double p = 2.0;
  std::optional<double> eps;
  std::optional<std::size_t> iters;
  std::uint64_t seed = 0;
  std::uint64_t problem_seed = 0;
  std::optional<std::size_t> stride;
  std::string out;
};

struct SweepOptions {
  std::string problem = "quadratic";
  std::size_t n = 10;
  std::vector<double> p{1.0, 2.0};
  std::vector<std::uint64_t> seeds;
  std::size_t num_seeds = 20;
  std::optional<double> eps;
  std::optional<std::size_t> iters;
  std::uint64_t problem_seed = 0;
  std::optional<std::size_t> stride;
  std::string out;
  int workers = 0;
  bool extended = false;
};

struct VerifyOptions {
  std::size_t n = 100;
  std::string q = "2";
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::size_t s_vectors = 3;
  std::string json_path;
};

struct CounterexampleOptions {
  std::size_t n = 4;
  double half_width = 1e3;
  double L = 1.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  std::string json_path;
};

struct BoundOptions {
  std::size_t n = 10;
  double p = 2.0;
  double L = 1.0;
  std::optional<double> eps;
  std::vector<std::size_t> at;
};

struct Options {
  std::string config;
  RunOptions run;
  SweepOptions sweep;
  VerifyOptions verify;
  CounterexampleOptions cex;
  BoundOptions bound;
};

const CLI::Validator kExponentQ(
    [](std::string& text) -> std::string {
      try {
        const Exponent q = Exponent::parse(text);
        if (!q.is_infinite() && q.value() < 2.0) return "q must lie in [2, inf]";
      } catch (const std::exception& ex) {
        return ex.what();
      }
      return {};
    },
    "Q in [2, inf]", "exponent");

void add_config(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config,
                  "Flat JSON document whose keys mirror flag names; flags win")
      ->check(CLI::ExistingFile);
}

void build(CLI::App& app, Options& o) {
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Single ACDS run on a benchmark problem");
  run->add_option("--problem", o.run.problem, "Problem kind")
      ->check(CLI::IsMember({"quadratic"}))
      ->capture_default_str();
  run->add_option("--n", o.run.n, "Dimension")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  run->add_option("--p", o.run.p, "Prox norm exponent in [1, 2]")
      ->check(CLI::Range(1.0, 2.0))
      ->capture_default_str();
  run->add_option("--eps", o.run.eps, "Stop once f(y) - f* <= eps")
      ->check(CLI::PositiveNumber);
  run->add_option("--iters", o.run.iters, "Iteration limit");
  run->add_option("--seed", o.run.seed, "Direction sampler seed")->capture_default_str();
  run->add_option("--problem-seed", o.run.problem_seed, "Problem instance seed")
      ->capture_default_str();
  run->add_option("--stride", o.run.stride, "Checkpoint stride")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", o.run.out, "Directory for trace.csv and run.json");
  add_config(run, o);

  auto* sweep = app.add_subcommand("sweep", "Multi-seed p-sweep with aggregation");
  sweep->add_option("--problem", o.sweep.problem, "Problem kind")
      ->check(CLI::IsMember({"quadratic"}))
      ->capture_default_str();
  sweep->add_option("--n", o.sweep.n, "Dimension")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  sweep->add_option("--p", o.sweep.p, "Prox norm exponents in [1, 2]")
      ->check(CLI::Range(1.0, 2.0))
      ->capture_default_str();
  auto* seeds = sweep->add_option("--seeds", o.sweep.seeds, "Explicit solver seed list");
  sweep->add_option("--num-seeds", o.sweep.num_seeds, "Use seeds 0..K-1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str()
      ->excludes(seeds);
  sweep->add_option("--eps", o.sweep.eps, "Target gap")->check(CLI::PositiveNumber);
  sweep->add_option("--iters", o.sweep.iters, "Iteration limit");
  sweep->add_option("--problem-seed", o.sweep.problem_seed, "Problem instance seed")
      ->capture_default_str();
  sweep->add_option("--stride", o.sweep.stride, "Checkpoint stride")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.sweep.out, "Output directory")->required();
  sweep->add_option("--workers", o.sweep.workers,
                    "Parallel runs (0 = all threads, 1 = serial)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_flag("--extended", o.sweep.extended,
                  "Long preset: n=1000, eps=1e-4, p in {1, 1.8, 1.9, 2}, one seed");
  add_config(sweep, o);

  auto* verify = app.add_subcommand("verify", "Monte-Carlo checks of the sphere moment bounds");
  verify->add_option("--n", o.verify.n, "Dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--q", o.verify.q, "Dual exponent in [2, inf]; spell infinity 'inf'")
      ->check(kExponentQ)
      ->capture_default_str();
  verify->add_option("--samples", o.verify.samples, "Monte-Carlo sample count")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  verify->add_option("--seed", o.verify.seed, "Sampler seed")->capture_default_str();
  verify->add_option("--s-vectors", o.verify.s_vectors, "Random s vectors per weighted check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--json", o.verify.json_path, "Write the JSON report here");
  add_config(verify, o);

  auto* cex = app.add_subcommand("counterexample",
                                 "Constrained one-step experiment on a box facet");
  cex->add_option("--n", o.cex.n, "Dimension")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  cex->add_option("--half-width", o.cex.half_width, "Box half width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cex->add_option("--L", o.cex.L, "Lipschitz constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cex->add_option("--samples", o.cex.samples, "Monte-Carlo sample count")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  cex->add_option("--seed", o.cex.seed, "Sampler seed")->capture_default_str();
  cex->add_option("--json", o.cex.json_path, "Write the JSON report here");
  add_config(cex, o);

  auto* bound = app.add_subcommand("bound", "Rate constants for the benchmark endpoints");
  bound->add_option("--n", o.bound.n, "Dimension")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  bound->add_option("--p", o.bound.p, "Prox norm exponent in [1, 2]")
      ->check(CLI::Range(1.0, 2.0))
      ->capture_default_str();
  bound->add_option("--L", o.bound.L, "Lipschitz constant")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bound->add_option("--eps", o.bound.eps, "Report the iterations needed for this gap")
      ->check(CLI::PositiveNumber);
  bound->add_option("--at", o.bound.at, "Evaluate the bound at these N")
      ->check(CLI::PositiveNumber);
  add_config(bound, o);
}

bool is_flag(const CLI::Option* opt) { return opt->get_expected_max() == 0; }

std::string option_key(const CLI::Option* opt) {
  const auto& names = opt->get_lnames();
  return names.empty() ? std::string() : names.front();
}

/// Appends "--key value..." for every config entry whose flag was not given
/// on the command line.
void merge_config(const CLI::App* sub, const std::string& path,
                  std::vector<std::string>& args) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + ex.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a flat JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (key == "config" || key == "help") {
      throw UsageError("config key '" + key + "' is not allowed");
    }
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw UsageError("unknown config key '" + key + "' for subcommand '" +
                       sub->get_name() + "'");
    }
    if (opt->count() > 0) continue;
    if (is_flag(opt)) {
      if (!value.is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    auto token = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number()) return v.dump();
      throw UsageError("config key '" + key + "' must hold numbers or strings");
    };
    args.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(token(v));
    } else if (!value.is_null()) {
      args.push_back(token(value));
    } else {
      args.pop_back();
    }
  }
}

/// Effective option values of the chosen subcommand (flags merged with the
/// config file); feeding this back through --config replays the run.
json effective_flags(const CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string key = option_key(opt);
    if (key.empty() || key == "help" || key == "config") continue;
    if (is_flag(opt)) {
      j[key] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& res = opt->results();
      j[key] = res.size() == 1 && opt->get_expected_max() <= 1 ? json(res.front()) : json(res);
    } else if (!opt->get_default_str().empty()) {
      j[key] = opt->get_default_str();
    } else {
      j[key] = nullptr;
    }
  }
  return j;
}

Stopping make_stopping(std::optional<std::size_t> iters, std::optional<double> eps) {
  if (!iters && !eps) throw UsageError("give --iters, --eps, or both");
  return Stopping{iters, eps};
}

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

int cmd_run(const RunOptions& o, const json& flags, std::ostream& out) {
  const Stopping stopping = make_stopping(o.iters, o.eps);
  const ProblemDescriptor desc{o.problem, o.n, o.problem_seed};
  const QuadraticProblem problem = build_problem(desc);
  const ProxStructure prox = make_prox(o.p, o.n);
  const AcdsConfig cfg =
      AcdsConfig::make(o.n, o.p, problem.lipschitz(), stopping, o.seed, o.stride);
  SphereSampler sampler(o.seed, o.n);
  const RunRecord record = run_acds(problem, prox, cfg, sampler);

  out << "problem=" << o.problem << " n=" << o.n << " problem_seed=" << o.problem_seed
      << '\n';
  out << "p=" << num(o.p) << " q=" << cfg.q.to_string() << " C=" << num(cfg.c_const)
      << " theta=" << (record.theta ? num(*record.theta) : "n/a") << '\n';
  out << "seed=" << o.seed << " iterations=" << record.iterations
      << " final_gap=" << num(record.rows.back().gap) << " iterations_to_eps="
      << (record.iterations_to_eps ? std::to_string(*record.iterations_to_eps) : "none")
      << '\n';
  for (const auto& w : record.warnings) out << "warning: " << w << '\n';

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    write_trace_csv(dir / "trace.csv", record.rows);
    json meta = run_metadata_json(record, desc);
    meta["invocation"] = {{"subcommand", "run"}, {"flags", flags}};
    write_json(dir / "run.json", meta);
    out << "trace=" << (dir / "trace.csv").string() << '\n';
  }
  return kExitOk;
}

int cmd_sweep(SweepOptions o, const CLI::App* sub, const json& flags, std::ostream& out) {
  auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  if (o.extended) {
    if (!given("--n")) o.n = 1000;
    if (!given("--eps") && !given("--iters")) o.eps = 1e-4;
    if (!given("--p")) o.p = {1.0, 1.8, 1.9, 2.0};
    if (!given("--num-seeds") && !given("--seeds")) o.num_seeds = 1;
  }
  ExperimentSpec spec;
  spec.problem = ProblemDescriptor{o.problem, o.n, o.problem_seed};
  spec.p_values = o.p;
  if (o.seeds.empty()) {
    for (std::size_t i = 0; i < o.num_seeds; ++i) spec.seeds.push_back(i);
  } else {
    spec.seeds = o.seeds;
  }
  spec.stopping = make_stopping(o.iters, o.eps);
  spec.checkpoint_stride = o.stride;
  spec.output_dir = o.out;
  spec.workers = o.workers;

  const ExperimentResult result = run_experiment(spec);
  write_json(spec.output_dir / "invocation.json",
             {{"subcommand", "sweep"}, {"flags", flags}});

  out << "n=" << o.n << " seeds=" << spec.seeds.size() << " problem_seed="
      << o.problem_seed << '\n';
  for (const auto& agg : result.summary.per_p) {
    out << "p=" << num(agg.p) << " completed=" << agg.completed
        << " failed=" << agg.failed;
    if (!agg.checkpoints.empty()) {
      out << " last_k=" << agg.checkpoints.back().k
          << " mean_gap=" << num(agg.checkpoints.back().mean);
    }
    if (spec.stopping.eps) {
      out << " median_iterations_to_eps="
          << (agg.median_iterations_to_eps ? num(*agg.median_iterations_to_eps) : "none");
    }
    out << '\n';
  }
  for (const auto& run : result.summary.runs) {
    if (run.error) out << "error: p=" << num(run.p) << " seed=" << run.seed << ": "
                       << *run.error << '\n';
  }
  out << "summary=" << result.summary_path.string() << '\n';
  return kExitOk;
}

json check_json(const BoundCheck& c) {
  return {{"check", c.check},
          {"n", c.n},
          {"q", c.q.to_string()},
          {"samples", c.estimate.samples},
          {"mean", c.estimate.mean},
          {"stderr", c.estimate.std_error},
          {"bound_or_target", c.bound_or_target},
          {"pass", c.pass}};
}

void print_check(std::ostream& out, const BoundCheck& c) {
  out << (c.pass ? "PASS " : "FAIL ") << c.check << " n=" << c.n
      << " q=" << c.q.to_string() << " samples=" << c.estimate.samples
      << " mean=" << num(c.estimate.mean) << " stderr=" << num(c.estimate.std_error)
      << " bound_or_target=" << num(c.bound_or_target) << '\n';
}

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const Exponent q = Exponent::parse(o.q);
  SphereSampler sampler(o.seed, o.n);
  std::vector<BoundCheck> checks;

  const Vector s = sampler.gaussian();
  checks.push_back(check_lemma_p1(o.n, s, o.samples, sampler));
  {
    const auto basis = random_orthonormal_basis(o.n, sampler);
    const double target = dot(s, s) / static_cast<double>(o.n);
    const double avg = basis_average(s, basis);
    BoundCheck parseval;
    parseval.check = "parseval_basis";
    parseval.n = o.n;
    parseval.estimate = McEstimate{avg, 0.0, o.n};
    parseval.bound_or_target = target;
    parseval.pass = std::abs(avg - target) <= 1e-12 * std::max(1.0, target);
    checks.push_back(parseval);
  }
  if (o.n >= 8) {
    checks.push_back(check_lemma1_norm(o.n, q, o.samples, sampler));
    for (std::size_t i = 0; i < o.s_vectors; ++i) {
      const Vector si = sampler.gaussian();
      checks.push_back(check_lemma1_weighted(o.n, q, si, o.samples, sampler));
    }
    const Vector grad = sampler.gaussian();
    checks.push_back(check_statement(o.n, q, grad, o.samples, sampler));
  } else {
    out << "note: n < 8, moment-bound checks skipped (they assume n >= 8)\n";
  }

  bool all = true;
  json report = json::array();
  for (const auto& c : checks) {
    print_check(out, c);
    report.push_back(check_json(c));
    all = all && c.pass;
  }
  if (!o.json_path.empty()) write_json(o.json_path, report);
  if (!all) {
    err << json{{"error", "check_failed"}, {"message", "at least one check failed"}}.dump()
        << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_counterexample(const CounterexampleOptions& o, std::ostream& out) {
  const double unit = 1.0 / std::sqrt(static_cast<double>(o.n));
  const Vector grad(std::vector<double>(o.n, unit));
  SphereSampler sampler(o.seed, o.n);
  const CounterexampleReport r =
      counterexample_experiment(o.n, grad, o.half_width, o.L, o.samples, sampler);

  const double sep = r.separation();
  const double se = r.combined_std_error();
  const bool violated = sep > 3.0 * se;
  const bool residual_negative = r.residual.mean < -3.0 * r.residual.std_error;

  out << "n=" << o.n << " half_width=" << num(o.half_width) << " L=" << num(o.L)
      << " samples=" << o.samples << '\n';
  out << "lhs E Prog_{n s}(x) = " << num(r.lhs.mean) << " (se " << num(r.lhs.std_error)
      << ")\n";
  out << "rhs n^2 (f(x) - E f(y)) = " << num(r.rhs.mean) << " (se "
      << num(r.rhs.std_error) << ")\n";
  out << "separation = " << num(sep) << " (combined se " << num(se) << ")\n";
  out << "residual E <r, s - grad> = " << num(r.residual.mean) << " (se "
      << num(r.residual.std_error) << ")\n";
  out << "identity_max_abs = " << num(r.identity_max_abs)
      << " scaling_max_abs = " << num(r.scaling_max_abs) << '\n';
  out << "one_step_inequality_violated=" << (violated ? "true" : "false")
      << " residual_negative=" << (residual_negative ? "true" : "false") << '\n';

  if (!o.json_path.empty()) {
    json report = json::array();
    report.push_back({{"check", "counterexample_separation"},
                      {"n", o.n},
                      {"q", "2"},
                      {"samples", o.samples},
                      {"mean", sep},
                      {"stderr", se},
                      {"bound_or_target", 0.0},
                      {"pass", violated}});
    report.push_back({{"check", "counterexample_residual"},
                      {"n", o.n},
                      {"q", "2"},
                      {"samples", o.samples},
                      {"mean", r.residual.mean},
                      {"stderr", r.residual.std_error},
                      {"bound_or_target", 0.0},
                      {"pass", residual_negative},
                      {"identity_max_abs", r.identity_max_abs},
                      {"scaling_max_abs", r.scaling_max_abs},
                      {"residual_scaling_max_abs", r.residual_scaling_max_abs}});
    write_json(o.json_path, report);
  }
  return kExitOk;
}

int cmd_bound(const BoundOptions& o, std::ostream& out) {
  const ProxStructure prox = make_prox(o.p, o.n);
  const Exponent q = holder_conjugate(o.p);
  const double C = c_nq(o.n, q);
  // Benchmark endpoints: x0 = e_n, x* = e_1.
  Vector x0(o.n), x_star(o.n);
  x0[o.n - 1] = 1.0;
  x_star[0] = 1.0;
  const double th = theta(prox, x0, x_star);

  out << "n=" << o.n << " p=" << num(o.p) << " q=" << q.to_string() << " L=" << num(o.L)
      << '\n';
  out << "C=" << num(C) << '\n';
  out << "theta=" << num(th) << '\n';
  for (std::size_t N : o.at) {
    out << "bound(N=" << N << ")=" << num(theoretical_bound(th, o.L, C, N))
        << " bound_n1sq=" << num(theoretical_bound_n1sq(th, o.L, C, N)) << '\n';
  }
  if (o.eps) out << "N=" << iterations_for_eps(th, o.L, C, *o.eps) << '\n';
  return kExitOk;
}

void error_line(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

int dispatch(const CLI::App* sub, const Options& opts, std::ostream& out,
             std::ostream& err) {
  const json flags = effective_flags(sub);
  const std::string name = sub->get_name();
  if (name == "run") return cmd_run(opts.run, flags, out);
  if (name == "sweep") return cmd_sweep(opts.sweep, sub, flags, out);
  if (name == "verify") return cmd_verify(opts.verify, out, err);
  if (name == "counterexample") return cmd_counterexample(opts.cex, out);
  return cmd_bound(opts.bound, out);
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const std::string program = argc > 0 ? argv[0] : "acds";

  auto parse = [&](CLI::App& app, const std::vector<std::string>& a) {
    std::vector<const char*> raw{program.c_str()};
    for (const auto& s : a) raw.push_back(s.c_str());
    app.parse(static_cast<int>(raw.size()), raw.data());
  };

  try {
    auto app = std::make_unique<CLI::App>(kDescription, "acds");
    auto opts = std::make_unique<Options>();
    build(*app, *opts);
    try {
      parse(*app, args);
    } catch (const CLI::CallForHelp&) {
      const auto subs = app->get_subcommands();
      out << (subs.empty() ? app->help() : subs.front()->help());
      return kExitOk;
    }
    if (!opts->config.empty()) {
      // Second pass: command line plus the config entries it did not set.
      merge_config(app->get_subcommands().front(), opts->config, args);
      app = std::make_unique<CLI::App>(kDescription, "acds");
      opts = std::make_unique<Options>();
      build(*app, *opts);
      parse(*app, args);
    }
    return dispatch(app->get_subcommands().front(), *opts, out, err);
  } catch (const CLI::ParseError& ex) {
    error_line(err, "invalid_arguments", ex.what());
    return kExitUsage;
  } catch (const UsageError& ex) {
    error_line(err, "invalid_arguments", ex.what());
    return kExitUsage;
  } catch (const Error& ex) {
    error_line(err, ex.kind(), ex.what());
    return kExitFailure;
  } catch (const std::exception& ex) {
    error_line(err, "internal", ex.what());
    return kExitFailure;
  }
}

}  // namespace acds::cli
