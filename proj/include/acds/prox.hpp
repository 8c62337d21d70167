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

#include <cstddef>

#include "acds/linalg.hpp"

namespace acds {

/// Prox-function d(x) = ||x||_a^2 / (2(a-1)) associated with the p-norm,
/// p in [1, 2].
///
/// For p > 1 the smoothing exponent is a = p. For p = 1 the a-norm is a
/// stand-in for the 1-norm with a = 2 ln n / (2 ln n - 1); then the dual
/// exponent b = a/(a-1) equals 2 ln n and ||x||_a >= e^{-1/2} ||x||_1.
///
/// d is continuously differentiable and 1-strongly convex with respect to
/// ||.||_a. Its gradient (the mirror map) has the closed-form inverse
///   x_i = (a-1) ||g||_b^{2-b} |g_i|^{b-1} sign(g_i),
/// the gradient of the convex conjugate d*(g) = (a-1)/2 ||g||_b^2.
class ProxStructure {
 public:
  /// Throws InvalidExponentError for p outside [1, 2] and
  /// UnsupportedConfigurationError for p = 1 with n < 2.
  static ProxStructure make(double p, std::size_t n);

  double p() const noexcept { return p_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return n_; }
  /// 1 / (2(a-1)).
  double scale() const noexcept { return scale_; }
  /// Hölder conjugate of p; the norm in which the directional estimator is
  /// measured. Differs from b when p = 1.
  Exponent q() const { return holder_conjugate(p_); }
  bool euclidean() const noexcept { return a_ == 2.0; }

  double value(std::span<const double> x) const;
  /// Gradient of d; zero at the origin.
  Vector mirror_map(std::span<const double> x) const;
  Vector inverse_mirror_map(std::span<const double> g) const;
  /// V_z(y) = d(y) - d(z) - <grad d(z), y - z>, clamped at zero against
  /// cancellation.
  double bregman(std::span<const double> z, std::span<const double> y) const;
  /// argmin_y { alpha <v, y - z> + V_z(y) } over R^n, via the dual map.
  Vector mirror_step(std::span<const double> z, std::span<const double> v,
                     double alpha) const;

 private:
  ProxStructure(double p, double a, double b, std::size_t n)
      : p_(p), a_(a), b_(b), n_(n), scale_(1.0 / (2.0 * (a - 1.0))) {}

  void check_dim(std::size_t got, const char* what) const;

  double p_;
  double a_;
  double b_;
  std::size_t n_;
  double scale_;
};

inline ProxStructure make_prox(double p, std::size_t n) {
  return ProxStructure::make(p, n);
}

/// Solves the same argmin as ProxStructure::mirror_step without the conjugate
/// map. Stationarity grad d(y) = w, w = grad d(z) - alpha v, is reduced to a
/// scalar equation in T = ||y||_a: for fixed T each coordinate is explicit,
///   y_i(T) = sign(w_i) ((a-1) |w_i| T^{a-2})^{1/(a-1)},
/// and T is found by bisecting ||y(T)||_a - T = 0 (monotone in T) to a
/// relative width of tol/10. Throws SolverError if no bracket is found.
Vector mirror_step_bisection(const ProxStructure& prox,
                             std::span<const double> z,
                             std::span<const double> v, double alpha,
                             double tol = 1e-9);

}  // namespace acds
