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

#include "acds/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "acds/error.hpp"
#include "acds/sphere.hpp"

namespace acds {

namespace {

Vector difference(std::span<const double> x, const Vector& c) {
  if (x.size() != c.dim()) {
    throw DimensionMismatchError("objective: point has dimension " +
                                 std::to_string(x.size()) + ", expected " +
                                 std::to_string(c.dim()));
  }
  Vector d(c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i) d[i] = x[i] - c[i];
  return d;
}

}  // namespace

QuadraticProblem::QuadraticProblem(Matrix b, Vector x_star, Vector x0, double L)
    : b_(std::make_shared<const Matrix>(std::move(b))),
      x_star_(std::move(x_star)),
      x0_(std::move(x0)),
      L_(L) {
  if (x_star_.dim() != b_->dim() || x0_.dim() != b_->dim()) {
    throw DimensionMismatchError("QuadraticProblem: x*, x0 and B disagree");
  }
  if (!(L_ > 0.0)) throw PreconditionError("QuadraticProblem: L must be > 0");
  if (!b_->all_finite()) throw PreconditionError("QuadraticProblem: B not finite");
}

double QuadraticProblem::value(std::span<const double> x) const {
  const Vector d = difference(x, x_star_);
  const Vector bd = matvec(*b_, d);
  return 0.5 * dot(d, bd);
}

double QuadraticProblem::dir_deriv(std::span<const double> x,
                                   std::span<const double> e) const {
  return dot(gradient(x), e);
}

Vector QuadraticProblem::gradient(std::span<const double> x) const {
  return matvec(*b_, difference(x, x_star_));
}

Objective QuadraticProblem::objective() const {
  auto self = std::make_shared<const QuadraticProblem>(*this);
  Objective obj;
  obj.value = [self](std::span<const double> x) { return self->value(x); };
  obj.dir_deriv = [self](std::span<const double> x, std::span<const double> e) {
    return self->dir_deriv(x, e);
  };
  obj.L = L_;
  obj.optimum = Optimum{x_star_, 0.0};
  return obj;
}

QuadraticProblem quadratic_problem(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("quadratic_problem: n must be >= 2");
  Xoshiro256 rng(seed);
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform();

  Matrix b = gram(a);
  const double lambda = dominant_eigenvalue(b);
  for (std::size_t i = 0; i < n; ++i)
    for (double& x : b.row(i)) x /= lambda;

  Vector x_star(n), x0(n);
  x_star[0] = 1.0;
  x0[n - 1] = 1.0;
  QuadraticProblem problem(std::move(b), std::move(x_star), std::move(x0), 1.0);
  problem.seed_ = seed;
  return problem;
}

Objective model_quadratic(const Vector& x_c, const Vector& g_c, double f_c,
                          double L) {
  if (!(L > 0.0)) throw PreconditionError("model_quadratic: L must be > 0");
  if (x_c.dim() != g_c.dim()) {
    throw DimensionMismatchError("model_quadratic: x_c and g_c disagree");
  }
  Objective obj;
  obj.value = [x_c, g_c, f_c, L](std::span<const double> y) {
    const Vector d = difference(y, x_c);
    return f_c + dot(g_c, d) + 0.5 * L * dot(d, d);
  };
  obj.dir_deriv = [x_c, g_c, L](std::span<const double> y,
                                std::span<const double> e) {
    const Vector d = difference(y, x_c);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.dim(); ++i) acc += (g_c[i] + L * d[i]) * e[i];
    return acc;
  };
  obj.L = L;
  Vector x_min(x_c.dim());
  for (std::size_t i = 0; i < x_c.dim(); ++i) x_min[i] = x_c[i] - g_c[i] / L;
  obj.optimum = Optimum{x_min, f_c - dot(g_c, g_c) / (2.0 * L)};
  return obj;
}

double fd_check(const Objective& obj, std::span<const double> x,
                std::span<const double> e, double h) {
  if (x.size() != e.size()) throw DimensionMismatchError("fd_check: x and e disagree");
  if (!(h > 0.0)) throw PreconditionError("fd_check: h must be > 0");
  Vector plus(x.size()), minus(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] = x[i] + h * e[i];
    minus[i] = x[i] - h * e[i];
  }
  const double central = (obj.value(plus) - obj.value(minus)) / (2.0 * h);
  const double exact = obj.dir_deriv(x, e);
  return std::abs(exact - central) / std::max(1.0, std::abs(exact));
}

}  // namespace acds
