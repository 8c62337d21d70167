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

#include "acds/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "acds/error.hpp"

namespace acds {

namespace {

// Below this dimension the OpenMP fork/join costs more than the row loop.
constexpr std::size_t kParallelMinDim = 256;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatchError(std::string(what) + ": " + std::to_string(a) +
                                 " vs " + std::to_string(b));
  }
}

double row_dot(const double* row, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
  return acc;
}

}  // namespace

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& r : rows) {
    require_same_dim(r.size(), dim_, "Matrix: row length");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

double Matrix::max_asymmetry() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

Exponent Exponent::finite(double r) {
  if (!std::isfinite(r) || r < 1.0) {
    throw InvalidExponentError("norm exponent must lie in [1, inf], got " +
                               std::to_string(r));
  }
  return Exponent(r);
}

Exponent Exponent::parse(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return infinity();
  double value = 0.0;
  const char* first = lower.data();
  const char* last = first + lower.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidExponentError("cannot parse exponent '" + std::string(text) +
                               "'");
  }
  return finite(value);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

double dot(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u.size(), v.size(), "dot");
  return row_dot(u.data(), v.data(), u.size());
}

double pnorm(std::span<const double> v, const Exponent& r) {
  double max_abs = 0.0;
  for (double x : v) max_abs = std::max(max_abs, std::abs(x));
  if (r.is_infinite() || max_abs == 0.0) return max_abs;

  const double e = r.value();
  if (e == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double s = 0.0;
  if (e == 2.0) {
    for (double x : v) {
      const double t = x / max_abs;
      s += t * t;
    }
    return max_abs * std::sqrt(s);
  }
  for (double x : v) s += std::pow(std::abs(x) / max_abs, e);
  return max_abs * std::pow(s, 1.0 / e);
}

double pnorm(std::span<const double> v, double r) {
  return pnorm(v, Exponent::finite(r));
}

Exponent holder_conjugate(double p) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw InvalidExponentError("primal exponent p must lie in [1, 2], got " +
                               std::to_string(p));
  }
  if (p == 1.0) return Exponent::infinity();
  return Exponent::finite(p / (p - 1.0));
}

void matvec(const Matrix& m, std::span<const double> v, std::span<double> out) {
  const std::size_t n = m.dim();
  require_same_dim(v.size(), n, "matvec: vector");
  require_same_dim(out.size(), n, "matvec: output");
  const double* a = m.storage().data();
  const double* x = v.data();
  double* y = out.data();
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n >= kParallelMinDim)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    y[i] = row_dot(a + static_cast<std::size_t>(i) * n, x, n);
  }
}

Vector matvec(const Matrix& m, std::span<const double> v) {
  Vector out(m.dim());
  matvec(m, v, out.span());
  return out;
}

Matrix gram(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix g(n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
  // (M^T M)_{ij} = sum_k M_{ki} M_{kj}; accumulate over k in a fixed order
  // so every entry matches the reference kernel bit for bit.
#pragma omp parallel for schedule(dynamic, 8) if (n >= kParallelMinDim / 4)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto out = g.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double mki = m(k, i);
      const auto mk = m.row(k);
      for (std::size_t j = 0; j < n; ++j) out[j] += mki * mk[j];
    }
  }
  return g;
}

double dominant_eigenvalue(const Matrix& m, PowerIterationOptions opts) {
  const std::size_t n = m.dim();
  if (n == 0) throw DimensionMismatchError("dominant_eigenvalue: empty matrix");
  Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector mv(n);
  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    matvec(m, v, mv.span());
    lambda = dot(v, mv);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = mv[i] - lambda * v[i];
      r2 += d * d;
    }
    residual = std::sqrt(r2);
    if (lambda > 0.0 && residual <= opts.tol * lambda) return lambda;
    const double norm = pnorm(mv, 2.0);
    if (norm == 0.0) {
      throw ConvergenceError("dominant_eigenvalue: iterate collapsed to zero");
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = mv[i] / norm;
  }
  throw ConvergenceError("dominant_eigenvalue: no convergence after " +
                         std::to_string(opts.max_iterations) +
                         " iterations (lambda=" + std::to_string(lambda) +
                         ", residual=" + std::to_string(residual) + ")");
}

double dominant_eigenvalue(const Matrix& m, double tol) {
  return dominant_eigenvalue(m, PowerIterationOptions{tol, 10000});
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "vector subtraction");
  Vector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a.dim(), b.dim(), "vector addition");
  Vector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector operator*(double s, const Vector& v) {
  Vector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = s * v[i];
  return out;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_dim(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

namespace reference {

void matvec(const Matrix& m, std::span<const double> v, std::span<double> out) {
  const std::size_t n = m.dim();
  require_same_dim(v.size(), n, "reference::matvec: vector");
  require_same_dim(out.size(), n, "reference::matvec: output");
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
}

Matrix gram(const Matrix& m) {
  const std::size_t n = m.dim();
  Matrix g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) g(i, j) += m(k, i) * m(k, j);
  return g;
}

}  // namespace reference

}  // namespace acds
