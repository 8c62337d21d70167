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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acds/error.hpp"
#include "acds/linalg.hpp"
#include "acds/oracle.hpp"
#include "acds/prox.hpp"
#include "acds/sphere.hpp"

namespace acds {

// ---------------------------------------------------------------------------
// Constants, schedule and bounds
// ---------------------------------------------------------------------------

/// C_{n,q}. For q = 2 this is the sharpened Euclidean constant n^2; otherwise
/// sqrt(3) * min{2q - 1, 32 ln n - 8} * n^{2/q + 1}. Throws for q < 2 or
/// n < 2.
double c_nq(std::size_t n, const Exponent& q);

/// The general formula evaluated even at q = 2 (diagnostics only).
double c_nq_general(std::size_t n, const Exponent& q);

struct Schedule {
  double alpha;  ///< alpha_{k+1} = (k+2) / (2 L C)
  double tau;    ///< tau_k = 2 / (k+2)
};

Schedule schedule(std::size_t k, double L, double C);

/// x - (dd / L) e.
Vector grad_step(std::span<const double> x, std::span<const double> e,
                 double dd, double L);

/// V_{x0}(x*).
double theta(const ProxStructure& prox, std::span<const double> x0,
             std::span<const double> x_star);

/// 4 theta L C / N^2.
double theoretical_bound(double theta, double L, double C, std::size_t N);
/// 4 theta L C / (N+1)^2, the slightly sharper form.
double theoretical_bound_n1sq(double theta, double L, double C, std::size_t N);

/// ceil(2 sqrt(theta L C / eps)): smallest N with 4 theta L C / N^2 <= eps.
std::size_t iterations_for_eps(double theta, double L, double C, double eps);

// ---------------------------------------------------------------------------
// Configuration and records
// ---------------------------------------------------------------------------

struct Stopping {
  std::optional<std::size_t> max_iterations;
  std::optional<double> eps;  ///< needs a known optimum
};

struct AcdsConfig {
  std::size_t n = 0;
  double p = 2.0;
  Exponent q = Exponent::finite(2.0);
  double L = 1.0;
  double c_const = 0.0;
  Stopping stopping;
  std::uint64_t seed = 0;
  std::size_t checkpoint_stride = 1;

  /// Derives q and C_{n,q}; stride defaults to 1 for n <= 100, else 100.
  static AcdsConfig make(std::size_t n, double p, double L, Stopping stopping,
                         std::uint64_t seed,
                         std::optional<std::size_t> stride = std::nullopt);
};

struct TraceRow {
  std::size_t k = 0;
  double f_y = 0.0;
  double gap = 0.0;  ///< NaN when the optimum is unknown
  std::size_t oracle_calls = 0;
  double elapsed_ms = 0.0;
};

struct RunRecord {
  AcdsConfig config;
  std::optional<double> theta;
  std::vector<TraceRow> rows;
  Vector final_y;
  std::size_t iterations = 0;
  std::optional<std::size_t> iterations_to_eps;
  std::vector<std::string> warnings;
  std::string sampler_algorithm;
};

struct AcdsState {
  std::size_t k = 0;
  Vector x, y, z;
  double alpha_next = 0.0;  ///< alpha_{k+1}
  double tau = 0.0;         ///< tau_k
  Vector last_direction;    ///< e_k
  double last_dd = 0.0;     ///< <grad f(x_k), e_k>
};

// ---------------------------------------------------------------------------
// Evaluation models: how the stepper obtains derivatives and values.
// ---------------------------------------------------------------------------

/// Calls the Objective directly at every request.
class ObjectiveModel {
 public:
  explicit ObjectiveModel(const Objective& obj) : obj_(&obj) {}

  void reset(const AcdsState&) {}
  void after_x(const AcdsState&, double) {}
  double dir_deriv(const AcdsState& s, std::span<const double> e) {
    return obj_->dir_deriv(s.x, e);
  }
  void after_y(const AcdsState&, double, std::span<const double>) {}
  void after_z(const AcdsState&, std::optional<double>, std::span<const double>) {}
  double value_y(const AcdsState& s) { return obj_->value(s.y); }

 private:
  const Objective* obj_;
};

/// Keeps B(x - x*), B(y - x*), B(z - x*) up to date. The x-update is a
/// convex combination of cached products, the y-update needs B e, and the
/// z-update needs one more matvec unless the mirror step was linear
/// (Euclidean prox). At most two matvecs per iteration.
class CachedQuadraticModel {
 public:
  explicit CachedQuadraticModel(const QuadraticProblem& problem);

  void reset(const AcdsState& s);
  void after_x(const AcdsState& s, double tau);
  double dir_deriv(const AcdsState& s, std::span<const double> e);
  void after_y(const AcdsState& s, double step, std::span<const double> e);
  void after_z(const AcdsState& s, std::optional<double> linear_coeff,
               std::span<const double> e);
  double value_y(const AcdsState& s);

 private:
  void refresh(const Vector& point, Vector& product);

  QuadraticProblem problem_;
  Vector bx_, by_, bz_, be_, scratch_;
};

/// One ACDS iteration at a time:
///   x_{k+1} = tau_k z_k + (1 - tau_k) y_k
///   y_{k+1} = x_{k+1} - (1/L) <grad f(x_{k+1}), e> e
///   z_{k+1} = argmin { alpha_{k+1} <n <grad f(x_{k+1}), e> e, y - z_k> + V_{z_k}(y) }
/// Copyable, so a state can be forked to resample the next direction.
template <class Model>
class BasicStepper {
 public:
  BasicStepper(ProxStructure prox, double L, double C, const Vector& x0,
               Model model)
      : prox_(std::move(prox)), L_(L), C_(C), model_(std::move(model)) {
    if (x0.dim() != prox_.dim()) {
      throw DimensionMismatchError("stepper: x0 dimension " +
                                   std::to_string(x0.dim()) + ", prox " +
                                   std::to_string(prox_.dim()));
    }
    state_.x = x0;
    state_.y = x0;
    state_.z = x0;
    state_.last_direction = Vector(x0.dim());
    const Schedule s = schedule(0, L_, C_);
    state_.alpha_next = s.alpha;
    state_.tau = s.tau;
    model_.reset(state_);
  }

  const AcdsState& state() const noexcept { return state_; }
  const ProxStructure& prox() const noexcept { return prox_; }
  double lipschitz() const noexcept { return L_; }
  double c_const() const noexcept { return C_; }

  void step(std::span<const double> e) {
    const std::size_t n = prox_.dim();
    if (e.size() != n) throw DimensionMismatchError("stepper: direction dimension");
    const double alpha = state_.alpha_next;
    const double tau = state_.tau;

    for (std::size_t i = 0; i < n; ++i) {
      state_.x[i] = tau * state_.z[i] + (1.0 - tau) * state_.y[i];
    }
    model_.after_x(state_, tau);

    const double dd = model_.dir_deriv(state_, e);
    if (!std::isfinite(dd)) {
      throw DivergenceError("non-finite directional derivative at iteration " +
                            std::to_string(state_.k + 1));
    }

    const double step = dd / L_;
    for (std::size_t i = 0; i < n; ++i) state_.y[i] = state_.x[i] - step * e[i];
    model_.after_y(state_, step, e);

    const double scaled = static_cast<double>(n) * dd;
    if (prox_.euclidean()) {
      for (std::size_t i = 0; i < n; ++i) {
        state_.z[i] = state_.z[i] - alpha * (scaled * e[i]);
      }
      model_.after_z(state_, alpha * scaled, e);
    } else {
      Vector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = scaled * e[i];
      state_.z = prox_.mirror_step(state_.z, v, alpha);
      model_.after_z(state_, std::nullopt, e);
    }

    std::copy(e.begin(), e.end(), state_.last_direction.begin());
    state_.last_dd = dd;
    ++state_.k;
    const Schedule next = schedule(state_.k, L_, C_);
    state_.alpha_next = next.alpha;
    state_.tau = next.tau;
  }

  double value_y() { return model_.value_y(state_); }

 private:
  ProxStructure prox_;
  double L_;
  double C_;
  Model model_;
  AcdsState state_;
};

using ObjectiveStepper = BasicStepper<ObjectiveModel>;
using QuadraticStepper = BasicStepper<CachedQuadraticModel>;

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

/// Fills its argument with the next unit direction.
using DirectionSource = std::function<void(std::span<double>)>;

/// Runs ACDS on a generic objective, evaluating f and its directional
/// derivative through the Objective at every request.
RunRecord run_acds(const Objective& obj, const ProxStructure& prox,
                   const AcdsConfig& cfg, const Vector& x0,
                   SphereSampler& sampler);
RunRecord run_acds(const Objective& obj, const ProxStructure& prox,
                   const AcdsConfig& cfg, const Vector& x0,
                   const DirectionSource& directions);

/// Runs ACDS on the benchmark quadratic from problem.x0() with cached
/// matrix-vector products.
RunRecord run_acds(const QuadraticProblem& problem, const ProxStructure& prox,
                   const AcdsConfig& cfg, SphereSampler& sampler);
RunRecord run_acds(const QuadraticProblem& problem, const ProxStructure& prox,
                   const AcdsConfig& cfg, const DirectionSource& directions);

}  // namespace acds
