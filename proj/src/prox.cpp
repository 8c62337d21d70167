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

#include "acds/prox.hpp"

#include <cmath>

#include "acds/error.hpp"

namespace acds {

namespace {

// g_i = c * ||x||_r * (|x_i| / ||x||_r)^{r-1} * sign(x_i). The power form
// ||x||^{2-r} |x_i|^{r-1} is rewritten so that large r cannot overflow.
Vector power_map(std::span<const double> x, double r, double c) {
  Vector g(x.size());
  const double norm = pnorm(x, Exponent::finite(r));
  if (norm == 0.0) return g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const double mag = norm * std::pow(std::abs(x[i]) / norm, r - 1.0);
    g[i] = c * std::copysign(mag, x[i]);
  }
  return g;
}

}  // namespace

ProxStructure ProxStructure::make(double p, std::size_t n) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw InvalidExponentError("prox exponent p must lie in [1, 2], got " +
                               std::to_string(p));
  }
  if (n == 0) throw UnsupportedConfigurationError("prox: dimension must be >= 1");
  if (p == 1.0) {
    if (n < 2) {
      throw UnsupportedConfigurationError(
          "prox: p = 1 needs n >= 2 (a = 2 ln n / (2 ln n - 1) is undefined "
          "at n = 1)");
    }
    const double two_log_n = 2.0 * std::log(static_cast<double>(n));
    return ProxStructure(p, two_log_n / (two_log_n - 1.0), two_log_n, n);
  }
  const double b = p == 2.0 ? 2.0 : p / (p - 1.0);
  return ProxStructure(p, p, b, n);
}

void ProxStructure::check_dim(std::size_t got, const char* what) const {
  if (got != n_) {
    throw DimensionMismatchError(std::string("prox ") + what + ": dimension " +
                                 std::to_string(got) + ", expected " +
                                 std::to_string(n_));
  }
}

double ProxStructure::value(std::span<const double> x) const {
  check_dim(x.size(), "value");
  const double norm = pnorm(x, Exponent::finite(a_));
  return scale_ * norm * norm;
}

Vector ProxStructure::mirror_map(std::span<const double> x) const {
  check_dim(x.size(), "mirror_map");
  if (euclidean()) return Vector(std::vector<double>(x.begin(), x.end()));
  return power_map(x, a_, 1.0 / (a_ - 1.0));
}

Vector ProxStructure::inverse_mirror_map(std::span<const double> g) const {
  check_dim(g.size(), "inverse_mirror_map");
  if (euclidean()) return Vector(std::vector<double>(g.begin(), g.end()));
  return power_map(g, b_, a_ - 1.0);
}

double ProxStructure::bregman(std::span<const double> z,
                              std::span<const double> y) const {
  check_dim(z.size(), "bregman");
  check_dim(y.size(), "bregman");
  const Vector grad = mirror_map(z);
  double linear = 0.0;
  for (std::size_t i = 0; i < n_; ++i) linear += grad[i] * (y[i] - z[i]);
  const double v = value(y) - value(z) - linear;
  return v > 0.0 ? v : 0.0;
}

Vector ProxStructure::mirror_step(std::span<const double> z,
                                  std::span<const double> v,
                                  double alpha) const {
  check_dim(z.size(), "mirror_step");
  check_dim(v.size(), "mirror_step");
  if (alpha == 0.0) return Vector(std::vector<double>(z.begin(), z.end()));
  if (euclidean()) {
    Vector out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = z[i] - alpha * v[i];
    return out;
  }
  Vector dual = mirror_map(z);
  axpy(-alpha, v, dual.span());
  return inverse_mirror_map(dual);
}

Vector mirror_step_bisection(const ProxStructure& prox,
                             std::span<const double> z,
                             std::span<const double> v, double alpha,
                             double tol) {
  if (!(tol > 0.0)) throw PreconditionError("mirror_step_bisection: tol <= 0");
  const std::size_t n = prox.dim();
  if (z.size() != n || v.size() != n) {
    throw DimensionMismatchError("mirror_step_bisection: dimension mismatch");
  }
  if (alpha == 0.0) return Vector(std::vector<double>(z.begin(), z.end()));

  Vector w = prox.mirror_map(z);
  axpy(-alpha, v, w.span());
  if (pnorm(w, Exponent::infinity()) == 0.0) return Vector(n);

  const double a = prox.a();
  const Exponent a_norm = Exponent::finite(a);
  Vector y(n);
  auto fill = [&](double t) {
    const double t_pow = std::pow(t, a - 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::pow((a - 1.0) * std::abs(w[i]) * t_pow, 1.0 / (a - 1.0));
      y[i] = std::copysign(mag, w[i]);
    }
  };
  // ||y(T)||_a - T is strictly decreasing in T.
  auto residual = [&](double t) {
    fill(t);
    return pnorm(y, a_norm) - t;
  };

  double lo = 1.0, hi = 1.0;
  int expansions = 0;
  constexpr int kMaxExpansions = 2000;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (++expansions > kMaxExpansions || !std::isfinite(hi)) {
      throw SolverError("mirror_step_bisection: no upper bracket (hi=" +
                        std::to_string(hi) + ", |w|_inf=" +
                        std::to_string(pnorm(w, Exponent::infinity())) + ")");
    }
  }
  while (residual(lo) < 0.0) {
    lo *= 0.5;
    if (++expansions > kMaxExpansions || lo == 0.0) {
      throw SolverError("mirror_step_bisection: no lower bracket (lo=" +
                        std::to_string(lo) + ", |w|_inf=" +
                        std::to_string(pnorm(w, Exponent::infinity())) + ")");
    }
  }

  const double target = tol / 10.0;
  for (int it = 0; it < 4000 && hi - lo > target * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  fill(std::sqrt(lo * hi));
  return y;
}

}  // namespace acds
