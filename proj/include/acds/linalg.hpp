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
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acds {

/// Dense real vector. Thin value wrapper over contiguous storage.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  operator std::span<const double>() const noexcept { return data_; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  const std::vector<double>& values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

/// Square dense matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), data_(dim * dim, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return dim_; }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * dim_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * dim_ + c];
  }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * dim_, dim_};
  }
  std::span<double> row(std::size_t r) noexcept {
    return {data_.data() + r * dim_, dim_};
  }

  std::span<const double> storage() const noexcept { return data_; }

  bool all_finite() const noexcept;
  double max_asymmetry() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Norm exponent in [1, inf]. Infinity is a distinguished state, never a
/// large float.
class Exponent {
 public:
  /// Throws InvalidExponentError for r < 1 or non-finite r.
  static Exponent finite(double r);
  static Exponent infinity() noexcept { return Exponent(); }
  /// Accepts "inf" (case-insensitive) or a decimal/scientific number.
  static Exponent parse(const std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful for finite exponents.
  double value() const noexcept { return value_; }
  /// 1/r, with 1/inf = 0.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  explicit Exponent(double r) : infinite_(false), value_(r) {}

  bool infinite_ = true;
  double value_ = 0.0;
};

double dot(std::span<const double> u, std::span<const double> v);

/// (sum |v_i|^r)^(1/r), or max |v_i| for r = inf. Computed with max-abs
/// scaling so that large exponents neither overflow nor underflow.
double pnorm(std::span<const double> v, const Exponent& r);
double pnorm(std::span<const double> v, double r);

/// q with 1/p + 1/q = 1 for p in [1, 2]; p = 1 maps to infinity.
Exponent holder_conjugate(double p);

/// out = M * v. Rows are distributed over OpenMP threads; each row is
/// accumulated serially so the result is bitwise identical to
/// reference::matvec.
void matvec(const Matrix& m, std::span<const double> v, std::span<double> out);
Vector matvec(const Matrix& m, std::span<const double> v);

/// M^T M for a square M, parallel over output rows.
Matrix gram(const Matrix& m);

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iterations = 10000;
};

/// Largest eigenvalue of a symmetric PSD matrix by power iteration from the
/// all-ones vector. Converged when ||Mv - lambda v||_2 <= tol * lambda.
/// Throws ConvergenceError after max_iterations.
double dominant_eigenvalue(const Matrix& m, PowerIterationOptions opts = {});
double dominant_eigenvalue(const Matrix& m, double tol);

// Vector helpers used throughout the solver.
Vector operator-(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& v);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Single-threaded kernels kept as the correctness reference for the
/// OpenMP versions above.
namespace reference {
void matvec(const Matrix& m, std::span<const double> v, std::span<double> out);
Matrix gram(const Matrix& m);
}  // namespace reference

}  // namespace acds
