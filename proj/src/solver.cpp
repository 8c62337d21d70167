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

#include "acds/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace acds {

double c_nq_general(std::size_t n, const Exponent& q) {
  if (n < 2) throw PreconditionError("C_{n,q}: n must be >= 2");
  if (!q.is_infinite() && q.value() < 2.0) {
    throw InvalidExponentError("C_{n,q}: q must lie in [2, inf], got " +
                               q.to_string());
  }
  const double ln_n = std::log(static_cast<double>(n));
  const double log_term = 32.0 * ln_n - 8.0;
  const double factor =
      q.is_infinite() ? log_term : std::min(2.0 * q.value() - 1.0, log_term);
  return std::sqrt(3.0) * factor *
         std::pow(static_cast<double>(n), 2.0 * q.reciprocal() + 1.0);
}

double c_nq(std::size_t n, const Exponent& q) {
  if (!q.is_infinite() && q.value() == 2.0) {
    if (n < 2) throw PreconditionError("C_{n,q}: n must be >= 2");
    const double nn = static_cast<double>(n);
    return nn * nn;
  }
  return c_nq_general(n, q);
}

Schedule schedule(std::size_t k, double L, double C) {
  const double kk = static_cast<double>(k);
  return Schedule{(kk + 2.0) / (2.0 * L * C), 2.0 / (kk + 2.0)};
}

Vector grad_step(std::span<const double> x, std::span<const double> e,
                 double dd, double L) {
  if (x.size() != e.size()) throw DimensionMismatchError("grad_step: x and e disagree");
  const double step = dd / L;
  Vector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - step * e[i];
  return y;
}

double theta(const ProxStructure& prox, std::span<const double> x0,
             std::span<const double> x_star) {
  return prox.bregman(x0, x_star);
}

double theoretical_bound(double theta, double L, double C, std::size_t N) {
  const double nn = static_cast<double>(N);
  return 4.0 * theta * L * C / (nn * nn);
}

double theoretical_bound_n1sq(double theta, double L, double C, std::size_t N) {
  const double nn = static_cast<double>(N) + 1.0;
  return 4.0 * theta * L * C / (nn * nn);
}

std::size_t iterations_for_eps(double theta, double L, double C, double eps) {
  if (!(theta > 0.0 && L > 0.0 && C > 0.0 && eps > 0.0)) {
    throw PreconditionError("iterations_for_eps: inputs must be positive");
  }
  auto n = static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(theta * L * C / eps)));
  if (n == 0) n = 1;
  // Guard the ceil against rounding on either side.
  while (theoretical_bound(theta, L, C, n) > eps) ++n;
  while (n > 1 && theoretical_bound(theta, L, C, n - 1) <= eps) --n;
  return n;
}

AcdsConfig AcdsConfig::make(std::size_t n, double p, double L, Stopping stopping,
                            std::uint64_t seed, std::optional<std::size_t> stride) {
  if (!stopping.max_iterations && !stopping.eps) {
    throw ConfigurationError("ACDS needs an iteration limit, a target gap, or both");
  }
  if (stopping.eps && !(*stopping.eps > 0.0)) {
    throw ConfigurationError("target gap eps must be > 0");
  }
  if (!(L > 0.0)) throw ConfigurationError("Lipschitz constant L must be > 0");
  if (stride && *stride == 0) throw ConfigurationError("checkpoint stride must be >= 1");
  AcdsConfig cfg;
  cfg.n = n;
  cfg.p = p;
  cfg.q = holder_conjugate(p);
  cfg.L = L;
  cfg.c_const = c_nq(n, cfg.q);
  cfg.stopping = stopping;
  cfg.seed = seed;
  cfg.checkpoint_stride = stride.value_or(n <= 100 ? 1 : 100);
  return cfg;
}

CachedQuadraticModel::CachedQuadraticModel(const QuadraticProblem& problem)
    : problem_(problem),
      bx_(problem.dim()),
      by_(problem.dim()),
      bz_(problem.dim()),
      be_(problem.dim()),
      scratch_(problem.dim()) {}

void CachedQuadraticModel::refresh(const Vector& point, Vector& product) {
  const Vector& x_star = problem_.x_star();
  for (std::size_t i = 0; i < point.dim(); ++i) scratch_[i] = point[i] - x_star[i];
  matvec(problem_.matrix(), scratch_, product.span());
}

void CachedQuadraticModel::reset(const AcdsState& s) {
  refresh(s.x, bx_);
  by_ = bx_;
  bz_ = bx_;
}

void CachedQuadraticModel::after_x(const AcdsState&, double tau) {
  for (std::size_t i = 0; i < bx_.dim(); ++i) {
    bx_[i] = tau * bz_[i] + (1.0 - tau) * by_[i];
  }
}

double CachedQuadraticModel::dir_deriv(const AcdsState&, std::span<const double> e) {
  return dot(bx_, e);
}

void CachedQuadraticModel::after_y(const AcdsState&, double step,
                                   std::span<const double> e) {
  matvec(problem_.matrix(), e, be_.span());
  for (std::size_t i = 0; i < by_.dim(); ++i) by_[i] = bx_[i] - step * be_[i];
}

void CachedQuadraticModel::after_z(const AcdsState& s,
                                   std::optional<double> linear_coeff,
                                   std::span<const double>) {
  if (linear_coeff) {
    axpy(-*linear_coeff, be_, bz_.span());
  } else {
    refresh(s.z, bz_);
  }
}

double CachedQuadraticModel::value_y(const AcdsState& s) {
  const Vector& x_star = problem_.x_star();
  double acc = 0.0;
  for (std::size_t i = 0; i < by_.dim(); ++i) acc += (s.y[i] - x_star[i]) * by_[i];
  return 0.5 * acc;
}

namespace {

template <class Model>
RunRecord drive(BasicStepper<Model>& stepper, const AcdsConfig& cfg,
                const std::optional<Optimum>& optimum,
                const DirectionSource& directions, const char* sampler_name) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  RunRecord record;
  record.config = cfg;
  record.sampler_algorithm = sampler_name;
  if (cfg.n < 8 && cfg.p != 2.0) {
    record.warnings.push_back(
        "n < 8: the sphere concentration bound behind C_{n,q} assumes n >= 8");
  }
  if (optimum) record.theta = theta(stepper.prox(), stepper.state().x, optimum->x);
  if (cfg.stopping.eps && !optimum) {
    throw ConfigurationError("stopping on a target gap needs a known optimum");
  }

  std::size_t value_calls = 0;
  auto checkpoint = [&]() -> bool {
    const double f_y = stepper.value_y();
    ++value_calls;
    if (!std::isfinite(f_y)) {
      throw DivergenceError("non-finite f(y) at iteration " +
                            std::to_string(stepper.state().k) +
                            " (last <grad f, e> = " +
                            std::to_string(stepper.state().last_dd) + ")");
    }
    TraceRow row;
    row.k = stepper.state().k;
    row.f_y = f_y;
    row.gap = optimum ? f_y - optimum->f : std::numeric_limits<double>::quiet_NaN();
    row.oracle_calls = row.k + value_calls;
    row.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    record.rows.push_back(row);
    return cfg.stopping.eps && row.gap <= *cfg.stopping.eps;
  };

  bool reached = checkpoint();
  Vector e(cfg.n);
  while (!reached) {
    const std::size_t k = stepper.state().k;
    if (cfg.stopping.max_iterations && k >= *cfg.stopping.max_iterations) break;
    directions(e.span());
    stepper.step(e);
    const std::size_t next = k + 1;
    const bool last = cfg.stopping.max_iterations && next == *cfg.stopping.max_iterations;
    if (next % cfg.checkpoint_stride == 0 || last) reached = checkpoint();
  }

  record.iterations = stepper.state().k;
  if (reached) record.iterations_to_eps = record.iterations;
  record.final_y = stepper.state().y;
  return record;
}

DirectionSource from_sampler(SphereSampler& sampler) {
  return [&sampler](std::span<double> out) { sampler.sample_into(out); };
}

void check_config(const AcdsConfig& cfg, const ProxStructure& prox, double L) {
  if (cfg.n != prox.dim()) {
    throw ConfigurationError("config dimension " + std::to_string(cfg.n) +
                             " does not match prox dimension " +
                             std::to_string(prox.dim()));
  }
  if (cfg.p != prox.p()) throw ConfigurationError("config p does not match prox p");
  if (cfg.L != L) throw ConfigurationError("config L does not match objective L");
}

}  // namespace

RunRecord run_acds(const Objective& obj, const ProxStructure& prox,
                   const AcdsConfig& cfg, const Vector& x0,
                   const DirectionSource& directions) {
  check_config(cfg, prox, obj.L);
  ObjectiveStepper stepper(prox, cfg.L, cfg.c_const, x0, ObjectiveModel(obj));
  return drive(stepper, cfg, obj.optimum, directions, "caller-supplied");
}

RunRecord run_acds(const Objective& obj, const ProxStructure& prox,
                   const AcdsConfig& cfg, const Vector& x0,
                   SphereSampler& sampler) {
  check_config(cfg, prox, obj.L);
  ObjectiveStepper stepper(prox, cfg.L, cfg.c_const, x0, ObjectiveModel(obj));
  return drive(stepper, cfg, obj.optimum, from_sampler(sampler),
               SphereSampler::kAlgorithm);
}

RunRecord run_acds(const QuadraticProblem& problem, const ProxStructure& prox,
                   const AcdsConfig& cfg, const DirectionSource& directions) {
  check_config(cfg, prox, problem.lipschitz());
  QuadraticStepper stepper(prox, cfg.L, cfg.c_const, problem.x0(),
                           CachedQuadraticModel(problem));
  return drive(stepper, cfg, Optimum{problem.x_star(), 0.0}, directions,
               "caller-supplied");
}

RunRecord run_acds(const QuadraticProblem& problem, const ProxStructure& prox,
                   const AcdsConfig& cfg, SphereSampler& sampler) {
  check_config(cfg, prox, problem.lipschitz());
  QuadraticStepper stepper(prox, cfg.L, cfg.c_const, problem.x0(),
                           CachedQuadraticModel(problem));
  return drive(stepper, cfg, Optimum{problem.x_star(), 0.0}, from_sampler(sampler),
               SphereSampler::kAlgorithm);
}

}  // namespace acds
