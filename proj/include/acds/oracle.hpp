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
#include <functional>
#include <memory>
#include <optional>

#include "acds/linalg.hpp"

namespace acds {

struct Optimum {
  Vector x;
  double f = 0.0;
};

/// Value plus directional-derivative oracle. `dir_deriv(x, e)` returns
/// <grad f(x), e>; L is the Lipschitz constant of grad f in the 2-norm.
struct Objective {
  std::function<double(std::span<const double>)> value;
  std::function<double(std::span<const double>, std::span<const double>)>
      dir_deriv;
  double L = 1.0;
  std::optional<Optimum> optimum;
};

/// f(x) = 1/2 <x - x*, B (x - x*)> with B symmetric PSD.
class QuadraticProblem {
 public:
  /// Takes B as given (no normalization); used for test doubles.
  QuadraticProblem(Matrix b, Vector x_star, Vector x0, double L);

  const Matrix& matrix() const noexcept { return *b_; }
  const Vector& x_star() const noexcept { return x_star_; }
  const Vector& x0() const noexcept { return x0_; }
  double lipschitz() const noexcept { return L_; }
  std::size_t dim() const noexcept { return b_->dim(); }
  /// Seed that generated A, when built by quadratic_problem().
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  double value(std::span<const double> x) const;
  /// <B(x - x*), e>, one matvec.
  double dir_deriv(std::span<const double> x, std::span<const double> e) const;
  Vector gradient(std::span<const double> x) const;

  /// Objective view sharing this problem's storage.
  Objective objective() const;

 private:
  friend QuadraticProblem quadratic_problem(std::size_t, std::uint64_t);

  // Shared so that copies and Objective views do not duplicate an n x n
  // matrix; the matrix is never mutated after construction.
  std::shared_ptr<const Matrix> b_;
  Vector x_star_;
  Vector x0_;
  double L_;
  std::optional<std::uint64_t> seed_;
};

/// Benchmark instance: A with i.i.d. Uniform[0,1] entries (row-major fill
/// from Xoshiro256(seed)), B = A^T A / lambda_max(A^T A), x* = (1,0,...,0),
/// x0 = (0,...,0,1), L = 1. Requires n >= 2.
QuadraticProblem quadratic_problem(std::size_t n, std::uint64_t seed);

/// f(y) = f_c + <g_c, y - x_c> + (L/2) ||y - x_c||_2^2; its minimizer is
/// x_c - g_c / L, which is recorded as the optimum.
Objective model_quadratic(const Vector& x_c, const Vector& g_c, double f_c,
                          double L);

/// |dir_deriv(x,e) - (f(x+he) - f(x-he))/(2h)| / max(1, |dir_deriv(x,e)|).
double fd_check(const Objective& obj, std::span<const double> x,
                std::span<const double> e, double h = 1e-6);

}  // namespace acds
