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
#include <string>
#include <vector>

#include "acds/linalg.hpp"
#include "acds/oracle.hpp"
#include "acds/prox.hpp"
#include "acds/solver.hpp"
#include "acds/sphere.hpp"

namespace acds {

// ---------------------------------------------------------------------------
// Monte-Carlo estimates
// ---------------------------------------------------------------------------

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(samples)
  std::size_t samples = 0;
};

/// Welford running mean/variance.
class McAccumulator {
 public:
  void add(double x) noexcept;
  McEstimate estimate() const noexcept;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Result of one statistical check. For bounds the rule is one-sided
/// (mean - 3 se <= bound); for exact identities it is two-sided
/// (|mean - target| <= 3 se).
struct BoundCheck {
  std::string check;
  std::size_t n = 0;
  Exponent q = Exponent::finite(2.0);
  McEstimate estimate;
  double bound_or_target = 0.0;
  bool pass = false;
};

/// min{q - 1, 16 ln n - 8} n^{2/q - 1}.
double norm_moment_bound(std::size_t n, const Exponent& q);
/// sqrt(3) ||s||_2^2 min{2q - 1, 32 ln n - 8} n^{2/q - 2}.
double weighted_moment_bound(std::size_t n, const Exponent& q, double s_norm2_sq);
/// sqrt(3) min{2q - 1, 32 ln n - 8} n^{2/q} ||grad||_2^2.
double estimator_moment_bound(std::size_t n, const Exponent& q, double grad_norm2_sq);

// Per-sample statistics.
double norm_statistic(std::span<const double> e, const Exponent& q);
double weighted_statistic(std::span<const double> s, std::span<const double> e,
                          const Exponent& q);
/// ||n <grad, e> e||_q^2, formed from the estimator vector itself.
double estimator_statistic(std::span<const double> grad, std::span<const double> e,
                           const Exponent& q);
double projection_statistic(std::span<const double> s, std::span<const double> e);

/// E ||e||_q^2 against its bound. Requires n >= 8.
BoundCheck check_lemma1_norm(std::size_t n, const Exponent& q, std::size_t m,
                             SphereSampler& sampler);
/// E <s,e>^2 ||e||_q^2 against its bound. Requires n >= 8.
BoundCheck check_lemma1_weighted(std::size_t n, const Exponent& q,
                                 std::span<const double> s, std::size_t m,
                                 SphereSampler& sampler);
/// E ||n <grad,e> e||_q^2 against its bound. Requires n >= 8.
BoundCheck check_statement(std::size_t n, const Exponent& q,
                           std::span<const double> grad, std::size_t m,
                           SphereSampler& sampler);
/// E <s,e>^2 against the exact value ||s||_2^2 / n. Requires s != 0.
BoundCheck check_lemma_p1(std::size_t n, std::span<const double> s, std::size_t m,
                          SphereSampler& sampler);

/// (1/n) sum_u <s,u>^2 over the given basis; equals ||s||_2^2 / n for any
/// orthonormal basis.
double basis_average(std::span<const double> s, const std::vector<Vector>& basis);
/// Modified Gram-Schmidt (two passes) on Gaussian vectors.
std::vector<Vector> random_orthonormal_basis(std::size_t n, SphereSampler& sampler);

/// Expected one-step inequality of the accelerated scheme with u = x*:
///   alpha^2 L C E f(y_{k+1}) - (alpha^2 L C - alpha) f(y_k)
///     + E V_{z_{k+1}}(x*) - V_{z_k}(x*) - alpha f(x*)  <= 0,
/// estimated by resampling the next direction m times from the state
/// reached after `warmup` iterations. pass iff mean - 3 se <= 0.
BoundCheck check_one_step_inequality(const QuadraticProblem& problem,
                                     const ProxStructure& prox, double C,
                                     std::size_t warmup, std::size_t m,
                                     SphereSampler& sampler);

// ---------------------------------------------------------------------------
// Constrained-step machinery
// ---------------------------------------------------------------------------

/// Axis-aligned box; bounds may be infinite.
class BoxRegion {
 public:
  BoxRegion(Vector lower, Vector upper);
  static BoxRegion unbounded(std::size_t n);

  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  std::size_t dim() const noexcept { return lower_.dim(); }
  bool contains(std::span<const double> x) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// Componentwise clip into the box.
Vector project_box(const BoxRegion& box, std::span<const double> x);

/// Prog_s(x) = -min_{y in Q} { <s, y - x> + (L/2) ||y - x||_2^2 }
///           = ||s||^2 / (2L) - (L/2) ||proj(x - s/L) - (x - s/L)||^2.
/// Throws PreconditionError if x is outside Q.
double prog(std::span<const double> s, std::span<const double> x,
            const BoxRegion& box, double L);

struct CounterexampleReport {
  std::size_t n = 0;
  McEstimate lhs;       ///< E Prog_{n s}(x)
  McEstimate rhs;       ///< n^2 (f(x) - E f(y))
  McEstimate residual;  ///< E <r, s - grad f(x)>
  double identity_max_abs = 0.0;   ///< per-sample |(one-step identity) residual|
  double scaling_max_abs = 0.0;    ///< per-sample |Prog_{ns} - n^2 Prog_s|
  double residual_scaling_max_abs = 0.0;  ///< per-sample | ||r~||^2 - n^2 ||r||^2 |

  /// lhs.mean - rhs.mean and sqrt(se_lhs^2 + se_rhs^2).
  double separation() const noexcept { return lhs.mean - rhs.mean; }
  double combined_std_error() const noexcept;
};

/// Samples the constrained one-step quantities at x for the quadratic model
/// f(y) = <grad, y - x> + (L/2)||y - x||^2 on the given box. For each
/// direction e: s = <grad,e> e, y = proj(x - s/L), y~ = proj(x - n s/L),
/// r = y - x + s/L, r~ = y~ - x + n s/L.
CounterexampleReport counterexample_on_box(const BoxRegion& box,
                                           std::span<const double> x,
                                           std::span<const double> grad, double L,
                                           std::size_t m, SphereSampler& sampler);

/// Face geometry: x = 0 sits at the centre of the facet {y_n = 0} of
/// Q = [-w, w]^{n-1} x [0, 2w]. Throws ConfigurationError if grad has no
/// component normal to the facet, or if any constraint other than the facet
/// binds for some sampled direction (w too small).
CounterexampleReport counterexample_experiment(std::size_t n,
                                               std::span<const double> grad,
                                               double half_width, double L,
                                               std::size_t m,
                                               SphereSampler& sampler);

}  // namespace acds
