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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here and never loosened at runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acds/harness.hpp"
#include "acds/verify.hpp"

using namespace acds;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Closed forms worked out by hand for the benchmark endpoints x0 = e_n,
// x* = e_1: Theta = 2 ln n - 1 for the l1 setup, 1/2 ||e_1 - e_n||^2 = 1
// for the Euclidean one.
double theta_by_hand(double p, std::size_t n) {
  return p == 1.0 ? 2.0 * std::log(double(n)) - 1.0 : 1.0;
}

double c_by_hand(double p, std::size_t n) {
  const double nn = double(n);
  if (p == 2.0) return nn * nn;
  return std::sqrt(3.0) * (32.0 * std::log(nn) - 8.0) * nn;  // q = inf
}

Verdict rate_bound(const fs::path& work) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.problem = ProblemDescriptor{"quadratic", 10, 0};
  spec.p_values = {1.0, 2.0};
  for (std::uint64_t s = 0; s < 100; ++s) spec.seeds.push_back(s);
  spec.stopping = Stopping{1000, {}};
  spec.checkpoint_stride = 100;
  spec.output_dir = work / "rate_bound";
  const ExperimentResult res = run_experiment(spec);

  const double c1 = c_nq(10, Exponent::infinity());
  v.require(std::abs(c1 - c_by_hand(1.0, 10)) <= 1e-12 * c1, "C_{10,inf} formula");
  // Reference value 1137.56 is a rounded evaluation; allow 1e-4 relative.
  v.require(std::abs(c1 - 1137.56) <= 1e-4 * 1137.56, "C_{10,inf} near 1137.56");
  v.require(c_nq(10, Exponent::finite(2.0)) == 100.0, "C_{10,2} = 100");

  for (double p : spec.p_values) {
    const PAggregate& agg = res.summary.for_p(p);
    v.require(agg.completed == 100, "all 100 runs completed for p=" + fmt("%g", p));
    const double th = theta_by_hand(p, 10);
    const double C = c_by_hand(p, 10);
    double worst_ratio = 0.0;
    std::size_t checked = 0;
    for (const auto& cp : agg.checkpoints) {
      if (cp.k < 100 || cp.k % 100 != 0) continue;
      ++checked;
      const double bound = 4.0 * th * 1.0 * C / (double(cp.k) * double(cp.k));
      worst_ratio = std::max(worst_ratio, cp.mean / bound);
      v.require(cp.mean <= bound, "mean gap <= bound at N=" + std::to_string(cp.k) +
                                      " p=" + fmt("%g", p));
    }
    v.require(checked == 10, "ten checkpoints N=100..1000");
    v.note("p=" + fmt("%g", p) + " max mean/bound=" + fmt("%.3g", worst_ratio));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 60.0, "runtime < 60 s");
  v.note("runtime " + fmt("%.2f", secs) + " s");
  return v;
}

Verdict desk_reproduction(const fs::path& work) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.problem = ProblemDescriptor{"quadratic", 10, 0};
  spec.p_values = {1.0};
  for (std::uint64_t s = 0; s < 20; ++s) spec.seeds.push_back(s);
  spec.stopping = Stopping{std::nullopt, 1e-3};
  spec.output_dir = work / "desk";
  const ExperimentResult res = run_experiment(spec);
  const PAggregate& agg = res.summary.for_p(1.0);
  v.require(agg.completed == 20, "20 runs completed");
  v.require(agg.median_iterations_to_eps.has_value(), "median iterations-to-eps finite");
  if (agg.median_iterations_to_eps) {
    v.require(*agg.median_iterations_to_eps <= 2500.0, "median <= 2500");
    v.note("median iterations-to-eps " + fmt("%g", *agg.median_iterations_to_eps) +
           " (reference single run: 729)");
  }
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, "runtime < 30 s");
  v.note("runtime " + fmt("%.2f", secs) + " s");
  return v;
}

Verdict projection_identity() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t n : {1u, 8u, 100u}) {
    SphereSampler sampler(1000 + n, n);
    const Vector s = sampler.gaussian();
    const BoundCheck c = check_lemma_p1(n, s, 200000, sampler);
    const double z = c.estimate.std_error > 0
                         ? (c.estimate.mean - c.bound_or_target) / c.estimate.std_error
                         : 0.0;
    v.require(c.pass, "MC identity n=" + std::to_string(n));
    v.note("n=" + std::to_string(n) + " z=" + fmt("%.2f", z));

    const auto basis = random_orthonormal_basis(n, sampler);
    const double target = dot(s, s) / double(n);
    const double avg = basis_average(s, basis);
    v.require(std::abs(avg - target) <= 1e-12 * std::max(1.0, target),
              "Parseval n=" + std::to_string(n));
  }
  const double secs = seconds_since(t0);
  v.require(secs < 5.0, "runtime < 5 s");
  v.note("runtime " + fmt("%.2f", secs) + " s");
  return v;
}

Verdict moment_bounds() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t m = 100000;
  double worst_identity = 0.0;
  int checks = 0;
  for (std::size_t n : {8u, 64u, 512u}) {
    for (const Exponent& q :
         {Exponent::finite(2.0), Exponent::finite(4.0), Exponent::infinity()}) {
      const std::string tag = "n=" + std::to_string(n) + " q=" + q.to_string();
      SphereSampler sampler(7 * n + (q.is_infinite() ? 0 : std::uint64_t(q.value())), n);
      const BoundCheck norm = check_lemma1_norm(n, q, m, sampler);
      v.require(norm.pass, "norm bound " + tag);
      ++checks;
      for (int i = 0; i < 3; ++i) {
        const Vector s = sampler.gaussian();
        const BoundCheck w = check_lemma1_weighted(n, q, s, m, sampler);
        v.require(w.pass, "weighted bound " + tag);
        ++checks;
      }
      const Vector grad = sampler.gaussian();
      const std::uint64_t stream = 90000 + n;
      SphereSampler est_sampler(stream, n);
      const BoundCheck st = check_statement(n, q, grad, m, est_sampler);
      v.require(st.pass, "estimator bound " + tag);
      ++checks;

      // Replay the estimator's direction stream: per sample the estimator
      // statistic is n^2 times the weighted statistic.
      SphereSampler replay(stream, n);
      const double n2 = double(n) * double(n);
      Vector e(n);
      for (std::size_t i = 0; i < m; ++i) {
        replay.sample_into(e.span());
        const double a = estimator_statistic(grad, e, q);
        const double b = n2 * weighted_statistic(grad, e, q);
        worst_identity = std::max(worst_identity, std::abs(a - b) / std::max(1e-300, b));
      }
    }
  }
  v.require(worst_identity <= 1e-12, "estimator = n^2 weighted per sample (rel 1e-12)");
  v.note(std::to_string(checks) + " checks, max rel identity gap " +
         fmt("%.2e", worst_identity));
  const double secs = seconds_since(t0);
  v.require(secs < 30.0, "runtime < 30 s");
  v.note("runtime " + fmt("%.2f", secs) + " s");
  return v;
}

Verdict counterexample() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 4;
  const Vector grad(std::vector<double>(n, 1.0 / std::sqrt(double(n))));
  SphereSampler sampler(2024, n);
  const CounterexampleReport r = counterexample_experiment(n, grad, 1e3, 1.0, 100000, sampler);
  const double sep = r.separation(), se = r.combined_std_error();
  v.require(sep > 3.0 * se, "E Prog_{ns} exceeds n^2 (f(x) - E f(y)) by > 3 se");
  v.require(r.residual.mean < -3.0 * r.residual.std_error, "residual < -3 se");
  v.require(r.identity_max_abs <= 1e-9, "per-sample identity <= 1e-9");
  v.require(r.scaling_max_abs <= 1e-9, "Prog scaling law <= 1e-9");
  v.require(r.residual_scaling_max_abs <= 1e-9, "||r~||^2 = n^2 ||r||^2 <= 1e-9");
  v.note("separation " + fmt("%.4g", sep) + " = " + fmt("%.1f", sep / se) +
         " se; residual " + fmt("%.4g", r.residual.mean) + " = " +
         fmt("%.1f", r.residual.mean / r.residual.std_error) + " se");
  const double secs = seconds_since(t0);
  v.require(secs < 10.0, "runtime < 10 s");
  v.note("runtime " + fmt("%.2f", secs) + " s");
  return v;
}

Verdict prox_suite() {
  Verdict v;
  double worst_round = 0, worst_first = 0, worst_bis = 0, worst_three = 0, worst_sc = 0;
  for (double p : {1.0, 1.8, 2.0}) {
    for (std::size_t n : {10u, 100u}) {
      const ProxStructure prox = make_prox(p, n);
      const Exponent a = Exponent::finite(prox.a());
      SphereSampler g(std::uint64_t(p * 1000) + n, n);
      Xoshiro256 u(std::uint64_t(p * 7919) + n);
      for (int inst = 0; inst < 100; ++inst) {
        const Vector z = g.gaussian(), y = g.gaussian(), w = g.gaussian(), vv = g.gaussian();
        const double alpha = 0.01 + u.uniform();
        const auto tag = " p=" + fmt("%g", p) + " n=" + std::to_string(n);

        const double V = prox.bregman(z, y);
        const double dist = pnorm(y - z, a);
        v.require(V >= 0.0, "Bregman nonnegative" + tag);
        // Strong convexity: V >= 1/2 ||y - z||_a^2 (rounding slack 1e-12 relative).
        worst_sc = std::max(worst_sc, 0.5 * dist * dist - V);
        v.require(V >= 0.5 * dist * dist - 1e-12 * std::max(1.0, V), "strong convexity" + tag);

        const double scale = std::max(1.0, pnorm(z, 2.0));
        const double r1 = pnorm(prox.inverse_mirror_map(prox.mirror_map(z)) - z, 2.0) / scale;
        const double r2 = pnorm(prox.mirror_map(prox.inverse_mirror_map(z)) - z, 2.0) / scale;
        worst_round = std::max({worst_round, r1, r2});

        const Vector step = prox.mirror_step(z, vv, alpha);
        Vector target = prox.mirror_map(z);
        axpy(-alpha, vv, target.span());
        const double first = pnorm(prox.mirror_map(step) - target, 2.0) /
                             std::max(1.0, pnorm(target, 2.0));
        worst_first = std::max(worst_first, first);

        const Vector bis = mirror_step_bisection(prox, z, vv, alpha);
        worst_bis = std::max(worst_bis,
                             pnorm(bis - step, 2.0) / std::max(1.0, pnorm(step, 2.0)));

        // <grad d(step) - grad d(z), w - step> = V_z(w) - V_step(w) - V_z(step).
        const double lhs = -alpha * dot(vv, w - step);
        const double rhs = prox.bregman(z, w) - prox.bregman(step, w) - prox.bregman(z, step);
        worst_three = std::max(worst_three, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  v.require(worst_round <= 1e-10, "mirror roundtrips <= 1e-10");
  v.require(worst_first <= 1e-8, "mirror_step first-order residual <= 1e-8");
  v.require(worst_bis <= 1e-6, "closed form vs bisection <= 1e-6 relative");
  v.require(worst_three <= 1e-9, "three-point identity <= 1e-9");
  v.note("roundtrip " + fmt("%.1e", worst_round) + ", first-order " + fmt("%.1e", worst_first) +
         ", bisection " + fmt("%.1e", worst_bis) + ", three-point " + fmt("%.1e", worst_three) +
         ", strong-convexity slack " + fmt("%.1e", worst_sc));
  return v;
}

Verdict schedule_identities() {
  Verdict v;
  double worst_a = 0.0, worst_b = 0.0;
  for (double L : {1.0, 2.5}) {
    for (double C : {100.0, c_by_hand(1.0, 10)}) {
      for (std::size_t k = 0; k <= 10000; ++k) {
        const Schedule s = schedule(k, L, C);
        worst_a = std::max(worst_a, std::abs(s.tau * s.alpha * L * C - 1.0));
        if (k >= 1) {
          // alpha_k^2 LC = alpha_{k+1}^2 LC - alpha_{k+1} + 1/(4LC), with
          // alpha_k = schedule(k-1).alpha.
          const double ak = schedule(k - 1, L, C).alpha;
          const double lhs = ak * ak * L * C;
          const double rhs = s.alpha * s.alpha * L * C - s.alpha + 1.0 / (4.0 * L * C);
          worst_b = std::max(worst_b, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
      }
    }
  }
  v.require(worst_a <= 1e-12, "tau alpha L C = 1");
  v.require(worst_b <= 1e-12, "alpha recursion (relative)");

  // Hand simulation: n = 2, f = 1/2 ||x||^2, L = 1, C = 4, x0 = (1, 0), e = (1, 0):
  // alpha_1 = 1/4, tau_0 = 1, x_1 = x0, dd = 1, y_1 = (0, 0),
  // z_1 = z0 - 1/4 * 2 * 1 * (1, 0) = (0.5, 0).
  Objective f;
  f.value = [](std::span<const double> x) { return 0.5 * dot(x, x); };
  f.dir_deriv = [](std::span<const double> x, std::span<const double> e) { return dot(x, e); };
  f.L = 1.0;
  f.optimum = Optimum{Vector(2), 0.0};
  const ProxStructure prox = make_prox(2.0, 2);
  const AcdsConfig cfg = AcdsConfig::make(2, 2.0, 1.0, Stopping{1, {}}, 0);
  const DirectionSource e1 = [](std::span<double> out) {
    out[0] = 1.0;
    out[1] = 0.0;
  };
  const RunRecord rec = run_acds(f, prox, cfg, Vector{1, 0}, e1);
  v.require(rec.final_y == Vector{0.0, 0.0}, "run_acds y_1 = (0, 0) bitwise");
  v.require(rec.rows.back().f_y == 0.0, "f(y_1) = 0");
  ObjectiveStepper stepper(prox, 1.0, cfg.c_const, Vector{1, 0}, ObjectiveModel(f));
  stepper.step(Vector{1, 0});
  v.require(stepper.state().x == Vector{1.0, 0.0}, "x_1 = (1, 0) bitwise");
  v.require(stepper.state().z == Vector{0.5, 0.0}, "z_1 = (0.5, 0) bitwise");
  v.note("max |tau alpha LC - 1| " + fmt("%.1e", worst_a) + ", recursion " +
         fmt("%.1e", worst_b));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

Verdict determinism(const std::string& cli, const fs::path& work) {
  Verdict v;
  auto run = [&](const std::string& args, const fs::path& out) {
    const std::string cmd = cli + " " + args + " --out " + out.string() + " > " +
                            (out.string() + ".stdout") + " 2>&1";
    return std::system(cmd.c_str());
  };
  const std::string run_args = "run --problem quadratic --n 10 --p 1 --iters 2000 --seed 11 "
                               "--problem-seed 5 --stride 10";
  const std::string sweep_args = "sweep --n 10 --p 1 1.8 2 --num-seeds 4 --iters 500 "
                                 "--stride 25 --problem-seed 2";
  const fs::path d = work / "determinism";
  fs::remove_all(d);
  fs::create_directories(d);
  v.require(run(run_args, d / "run_a") == 0, "run #1 exit 0");
  v.require(run(run_args, d / "run_b") == 0, "run #2 exit 0");
  v.require(run(sweep_args, d / "sweep_a") == 0, "sweep #1 exit 0");
  v.require(run(sweep_args, d / "sweep_b") == 0, "sweep #2 exit 0");

  const std::string ta = slurp(d / "run_a" / "trace.csv");
  v.require(!ta.empty(), "run trace written");
  v.require(without_elapsed(ta) == without_elapsed(slurp(d / "run_b" / "trace.csv")),
            "run traces identical");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(d / "sweep_a")) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const std::string a = slurp(entry.path()), b = slurp(d / "sweep_b" / name);
    if (name.rfind("trace_", 0) == 0) {
      v.require(without_elapsed(a) == without_elapsed(b), "sweep trace " + name);
    } else {
      v.require(a == b, "bound file " + name);
    }
  }
  v.require(compared == 15, "12 sweep traces + 3 bound curves compared");
  // stdout echoes the output directory; compare with that name normalised.
  std::string out_b = slurp(d / "run_b.stdout");
  for (auto pos = out_b.find("run_b"); pos != std::string::npos; pos = out_b.find("run_b"))
    out_b.replace(pos, 5, "run_a");
  v.require(slurp(d / "run_a.stdout") == out_b, "run stdout identical");
  v.note(std::to_string(compared + 1) + " CSV files compared");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string cli;
  std::string workdir = (fs::temp_directory_path() / "acds_acceptance").string();
  std::vector<std::string> only;
  app.add_option("--cli", cli, "Path to the acds binary")->required();
  app.add_option("--workdir", workdir, "Scratch directory");
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  const fs::path work(workdir);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"rate_bound_expectation", [&] { return rate_bound(work); }},
      {"desk_scale_reproduction", [&] { return desk_reproduction(work); }},
      {"projection_identity", projection_identity},
      {"sphere_moment_bounds", moment_bounds},
      {"constrained_counterexample", counterexample},
      {"prox_mirror_suite", prox_suite},
      {"schedule_identities", schedule_identities},
      {"determinism", [&] { return determinism(cli, work); }},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("exception: ") + ex.what();
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << " : " << v.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
