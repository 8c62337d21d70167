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

#include <cmath>
#include <limits>

#include "doctest.h"

#include "acds/error.hpp"
#include "acds/linalg.hpp"
#include "acds/sphere.hpp"

using namespace acds;

namespace {

// Unscaled textbook formula; only used on well-conditioned inputs.
double naive_pnorm(const Vector& v, double r) {
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), r);
  return std::pow(acc, 1.0 / r);
}

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Matrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.uniform() - 0.5;
  return m;
}

}  // namespace

TEST_CASE("pnorm hand values") {
  CHECK(pnorm(Vector{3, 4}, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(pnorm(Vector{1, -1, 1}, 1.0) == 3.0);
  CHECK(pnorm(Vector{1, -2}, Exponent::infinity()) == 2.0);
  CHECK(pnorm(Vector{0, 0, 0}, 3.0) == 0.0);
  CHECK(pnorm(Vector{}, 2.0) == 0.0);
}

TEST_CASE("pnorm matches the textbook formula") {
  NormalGenerator g(11);
  for (double r : {1.0, 1.277, 1.5, 2.0, 2.25, 4.0, 7.5}) {
    Vector v(17);
    for (auto& x : v) x = g();
    CHECK(pnorm(v, r) == doctest::Approx(naive_pnorm(v, r)).epsilon(1e-13));
  }
}

TEST_CASE("pnorm survives extreme magnitudes") {
  const Vector big{1e300, 1e300};
  CHECK(pnorm(big, 2.0) == doctest::Approx(std::sqrt(2.0) * 1e300).epsilon(1e-14));
  const Vector tiny{1e-300, 1e-300};
  CHECK(pnorm(tiny, 4.0) == doctest::Approx(std::pow(2.0, 0.25) * 1e-300).epsilon(1e-14));
  // Large exponent tends to the max norm.
  CHECK(pnorm(Vector{1.0, 0.5}, 400.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pnorm rejects exponents below one") {
  CHECK_THROWS_AS(pnorm(Vector{1, 2}, 0.5), InvalidExponentError);
  CHECK_THROWS_AS(Exponent::finite(0.99), InvalidExponentError);
  CHECK_THROWS_AS(Exponent::finite(std::nan("")), InvalidExponentError);
}

TEST_CASE("Exponent parsing") {
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("INF").is_infinite());
  CHECK(Exponent::parse("2.5").value() == 2.5);
  CHECK(Exponent::parse("1e1").value() == 10.0);
  CHECK_THROWS_AS(Exponent::parse("abc"), InvalidExponentError);
  CHECK_THROWS_AS(Exponent::parse("2x"), InvalidExponentError);
  CHECK(Exponent::infinity().reciprocal() == 0.0);
  CHECK(Exponent::parse("inf").to_string() == "inf");
}

TEST_CASE("holder_conjugate") {
  CHECK(holder_conjugate(2.0).value() == 2.0);
  CHECK(holder_conjugate(1.0).is_infinite());
  CHECK(holder_conjugate(1.8).value() == doctest::Approx(2.25).epsilon(1e-15));
  for (double p : {1.1, 1.3, 1.5, 1.9}) {
    const double q = holder_conjugate(p).value();
    CHECK(1.0 / p + 1.0 / q == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(holder_conjugate(0.5), InvalidExponentError);
  CHECK_THROWS_AS(holder_conjugate(2.5), InvalidExponentError);
}

TEST_CASE("matvec hand values") {
  CHECK(matvec(Matrix::identity(2), Vector{5, 7}) == Vector{5, 7});
  CHECK(matvec(Matrix(3), Vector{1, 2, 3}) == Vector{0, 0, 0});
  CHECK(matvec(Matrix{{2, 1}, {1, 2}}, Vector{1, 1}) == Vector{3, 3});
  CHECK_THROWS_AS(matvec(Matrix(3), Vector{1, 2}), DimensionMismatchError);
}

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
  for (std::size_t n : {3u, 64u, 300u}) {
    const Matrix m = random_matrix(n, 5 + n);
    Vector v(n);
    NormalGenerator g(n);
    for (auto& x : v) x = g();
    Vector par(n), ser(n);
    matvec(m, v, par.span());
    reference::matvec(m, v, ser.span());
    CHECK(par == ser);
    CHECK(gram(m) == reference::gram(m));
  }
}

TEST_CASE("gram against a triple loop") {
  const Matrix m = random_matrix(9, 3);
  const Matrix g = gram(m);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 9; ++k) acc += m(k, i) * m(k, j);
      CHECK(g(i, j) == doctest::Approx(acc).epsilon(1e-14));
    }
  }
  CHECK(g.max_asymmetry() == 0.0);
}

TEST_CASE("dominant_eigenvalue") {
  const Vector d{1, 2};
  CHECK(dominant_eigenvalue(Matrix::diagonal(d)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(dominant_eigenvalue(Matrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dominant_eigenvalue(Matrix{{2, 1}, {1, 2}}) == doctest::Approx(3.0).epsilon(1e-12));
  // Closed form for a symmetric 2x2: (a+c)/2 + sqrt(((a-c)/2)^2 + b^2).
  const Matrix s{{4, 1.5}, {1.5, 1}};
  const double lam = 2.5 + std::sqrt(1.5 * 1.5 + 1.5 * 1.5);
  CHECK(dominant_eigenvalue(s) == doctest::Approx(lam).epsilon(1e-9));
}

TEST_CASE("dominant_eigenvalue reports non-convergence") {
  // Two eigenvalues of equal modulus and opposite sign never settle.
  const Matrix flip{{1, 0}, {0, -1}};
  PowerIterationOptions opts;
  opts.max_iterations = 50;
  CHECK_THROWS_AS(dominant_eigenvalue(flip, opts), ConvergenceError);
}

TEST_CASE("vector helpers") {
  const Vector a{1, 2}, b{3, 5};
  CHECK(a + b == Vector{4, 7});
  CHECK(b - a == Vector{2, 3});
  CHECK(2.0 * a == Vector{2, 4});
  CHECK(dot(a, b) == 13.0);
  Vector y{1, 1};
  axpy(2.0, a, y.span());
  CHECK(y == Vector{3, 5});
  CHECK_THROWS_AS(dot(a, Vector{1}), DimensionMismatchError);
  CHECK_FALSE(Vector{1.0, std::numeric_limits<double>::infinity()}.all_finite());
}
