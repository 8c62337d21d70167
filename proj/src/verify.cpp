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

#include "acds/verify.hpp"

#include <algorithm>
#include <cmath>

#include "acds/error.hpp"

namespace acds {

void McAccumulator::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

McEstimate McAccumulator::estimate() const noexcept {
  McEstimate est;
  est.samples = count_;
  est.mean = mean_;
  if (count_ > 1) {
    const double var = std::max(0.0, m2_ / static_cast<double>(count_ - 1));
    est.std_error = std::sqrt(var / static_cast<double>(count_));
  }
  return est;
}

namespace {

void require_lemma_dim(std::size_t n, const char* what) {
  if (n < 8) {
    throw PreconditionError(std::string(what) +
                            ": the concentration bounds are stated for n >= 8, got n = " +
                            std::to_string(n));
  }
}

void require_q(const Exponent& q) {
  if (!q.is_infinite() && q.value() < 2.0) {
    throw InvalidExponentError("q must lie in [2, inf], got " + q.to_string());
  }
}

// min{c1 q - c0, log_coeff ln n - 8}; q = inf always selects the log term.
double min_factor(std::size_t n, const Exponent& q, double c1, double c0,
                  double log_coeff) {
  const double log_term = log_coeff * std::log(static_cast<double>(n)) - 8.0;
  if (q.is_infinite()) return log_term;
  return std::min(c1 * q.value() - c0, log_term);
}

double n_pow(std::size_t n, double e) { return std::pow(static_cast<double>(n), e); }

bool one_sided(const McEstimate& est, double bound) {
  return est.mean - 3.0 * est.std_error <= bound;
}

}  // namespace

double norm_moment_bound(std::size_t n, const Exponent& q) {
  require_q(q);
  return min_factor(n, q, 1.0, 1.0, 16.0) * n_pow(n, 2.0 * q.reciprocal() - 1.0);
}

double weighted_moment_bound(std::size_t n, const Exponent& q, double s_norm2_sq) {
  require_q(q);
  return std::sqrt(3.0) * s_norm2_sq * min_factor(n, q, 2.0, 1.0, 32.0) *
         n_pow(n, 2.0 * q.reciprocal() - 2.0);
}

double estimator_moment_bound(std::size_t n, const Exponent& q, double grad_norm2_sq) {
  require_q(q);
  return std::sqrt(3.0) * min_factor(n, q, 2.0, 1.0, 32.0) *
         n_pow(n, 2.0 * q.reciprocal()) * grad_norm2_sq;
}

double norm_statistic(std::span<const double> e, const Exponent& q) {
  const double norm = pnorm(e, q);
  return norm * norm;
}

double weighted_statistic(std::span<const double> s, std::span<const double> e,
                          const Exponent& q) {
  const double proj = dot(s, e);
  return proj * proj * norm_statistic(e, q);
}

double estimator_statistic(std::span<const double> grad, std::span<const double> e,
                           const Exponent& q) {
  const double coeff = static_cast<double>(e.size()) * dot(grad, e);
  Vector g(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) g[i] = coeff * e[i];
  return norm_statistic(g, q);
}

double projection_statistic(std::span<const double> s, std::span<const double> e) {
  const double proj = dot(s, e);
  return proj * proj;
}

BoundCheck check_lemma1_norm(std::size_t n, const Exponent& q, std::size_t m,
                             SphereSampler& sampler) {
  require_lemma_dim(n, "check_lemma1_norm");
  BoundCheck out{"lemma1_norm", n, q, {}, norm_moment_bound(n, q), false};
  McAccumulator acc;
  Vector e(n);
  for (std::size_t i = 0; i < m; ++i) {
    sampler.sample_into(e.span());
    acc.add(norm_statistic(e, q));
  }
  out.estimate = acc.estimate();
  out.pass = one_sided(out.estimate, out.bound_or_target);
  return out;
}

BoundCheck check_lemma1_weighted(std::size_t n, const Exponent& q,
                                 std::span<const double> s, std::size_t m,
                                 SphereSampler& sampler) {
  require_lemma_dim(n, "check_lemma1_weighted");
  if (s.size() != n) throw DimensionMismatchError("check_lemma1_weighted: s");
  BoundCheck out{"lemma1_weighted", n, q, {}, weighted_moment_bound(n, q, dot(s, s)),
                 false};
  McAccumulator acc;
  Vector e(n);
  for (std::size_t i = 0; i < m; ++i) {
    sampler.sample_into(e.span());
    acc.add(weighted_statistic(s, e, q));
  }
  out.estimate = acc.estimate();
  out.pass = one_sided(out.estimate, out.bound_or_target);
  return out;
}

BoundCheck check_statement(std::size_t n, const Exponent& q,
                           std::span<const double> grad, std::size_t m,
                           SphereSampler& sampler) {
  require_lemma_dim(n, "check_statement");
  if (grad.size() != n) throw DimensionMismatchError("check_statement: gradient");
  BoundCheck out{"estimator_norm", n, q, {},
                 estimator_moment_bound(n, q, dot(grad, grad)), false};
  McAccumulator acc;
  Vector e(n);
  for (std::size_t i = 0; i < m; ++i) {
    sampler.sample_into(e.span());
    acc.add(estimator_statistic(grad, e, q));
  }
  out.estimate = acc.estimate();
  out.pass = one_sided(out.estimate, out.bound_or_target);
  return out;
}

BoundCheck check_lemma_p1(std::size_t n, std::span<const double> s, std::size_t m,
                          SphereSampler& sampler) {
  if (s.size() != n) throw DimensionMismatchError("check_lemma_p1: s");
  const double s2 = dot(s, s);
  if (s2 == 0.0) throw PreconditionError("check_lemma_p1: s must be nonzero");
  BoundCheck out{"projection_second_moment", n, Exponent::finite(2.0), {},
                 s2 / static_cast<double>(n), false};
  McAccumulator acc;
  Vector e(n);
  for (std::size_t i = 0; i < m; ++i) {
    sampler.sample_into(e.span());
    acc.add(projection_statistic(s, e));
  }
  out.estimate = acc.estimate();
  out.pass = std::abs(out.estimate.mean - out.bound_or_target) <=
             3.0 * out.estimate.std_error;
  return out;
}

double basis_average(std::span<const double> s, const std::vector<Vector>& basis) {
  double acc = 0.0;
  for (const auto& u : basis) acc += projection_statistic(s, u);
  return acc / static_cast<double>(basis.size());
}

std::vector<Vector> random_orthonormal_basis(std::size_t n, SphereSampler& sampler) {
  std::vector<Vector> basis;
  basis.reserve(n);
  while (basis.size() < n) {
    Vector v = sampler.gaussian();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) axpy(-dot(u, v), u, v.span());
    }
    const double norm = pnorm(v, 2.0);
    if (norm < 1e-8) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

BoundCheck check_one_step_inequality(const QuadraticProblem& problem,
                                     const ProxStructure& prox, double C,
                                     std::size_t warmup, std::size_t m,
                                     SphereSampler& sampler) {
  const double L = problem.lipschitz();
  QuadraticStepper base(prox, L, C, problem.x0(), CachedQuadraticModel(problem));
  Vector e(problem.dim());
  for (std::size_t k = 0; k < warmup; ++k) {
    sampler.sample_into(e.span());
    base.step(e);
  }
  const Vector& u = problem.x_star();
  const double alpha = base.state().alpha_next;
  const double f_y = problem.value(base.state().y);
  const double f_u = problem.value(u);
  const double v_before = prox.bregman(base.state().z, u);
  const double weight = alpha * alpha * L * C;

  McAccumulator acc;
  for (std::size_t i = 0; i < m; ++i) {
    sampler.sample_into(e.span());
    QuadraticStepper trial = base;
    trial.step(e);
    const double f_next = problem.value(trial.state().y);
    const double v_after = prox.bregman(trial.state().z, u);
    acc.add(weight * f_next - (weight - alpha) * f_y + v_after - v_before - alpha * f_u);
  }
  BoundCheck out{"one_step_inequality", problem.dim(), prox.q(), acc.estimate(), 0.0,
                 false};
  out.pass = one_sided(out.estimate, 0.0);
  return out;
}

BoxRegion::BoxRegion(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.dim() != upper_.dim()) {
    throw DimensionMismatchError("BoxRegion: lower and upper disagree");
  }
  for (std::size_t i = 0; i < lower_.dim(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
      throw PreconditionError("BoxRegion: empty in coordinate " + std::to_string(i));
    }
  }
}

BoxRegion BoxRegion::unbounded(std::size_t n) {
  return BoxRegion(Vector(n, -INFINITY), Vector(n, INFINITY));
}

bool BoxRegion::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

Vector project_box(const BoxRegion& box, std::span<const double> x) {
  if (x.size() != box.dim()) throw DimensionMismatchError("project_box");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::clamp(x[i], box.lower()[i], box.upper()[i]);
  }
  return out;
}

double prog(std::span<const double> s, std::span<const double> x,
            const BoxRegion& box, double L) {
  if (s.size() != x.size()) throw DimensionMismatchError("prog: s and x disagree");
  if (!box.contains(x)) throw PreconditionError("prog: x must lie in Q");
  Vector target(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) target[i] = x[i] - s[i] / L;
  const Vector y_hat = project_box(box, target);
  double gap2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y_hat[i] - target[i];
    gap2 += d * d;
  }
  const double value = dot(s, s) / (2.0 * L) - 0.5 * L * gap2;
  return value > 0.0 ? value : 0.0;
}

double CounterexampleReport::combined_std_error() const noexcept {
  return std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
}

namespace {

// Shared sampler loop. `on_sample` sees the projected points for geometry
// checks before they are accumulated.
template <class Hook>
CounterexampleReport sample_counterexample(const BoxRegion& box,
                                           std::span<const double> x,
                                           std::span<const double> grad, double L,
                                           std::size_t m, SphereSampler& sampler,
                                           Hook&& on_sample) {
  const std::size_t n = x.size();
  if (grad.size() != n || box.dim() != n) {
    throw DimensionMismatchError("counterexample: dimensions disagree");
  }
  if (!(L > 0.0)) throw PreconditionError("counterexample: L must be > 0");
  if (!box.contains(x)) throw PreconditionError("counterexample: x must lie in Q");
  const Vector x_c(std::vector<double>(x.begin(), x.end()));
  const Vector g_c(std::vector<double>(grad.begin(), grad.end()));
  const Objective model = model_quadratic(x_c, g_c, 0.0, L);
  const double nn = static_cast<double>(n);
  const double f_x = 0.0;

  CounterexampleReport report;
  report.n = n;
  McAccumulator lhs, rhs, residual;
  Vector e(n), s(n), ns(n), step(n), step_n(n);
  for (std::size_t it = 0; it < m; ++it) {
    sampler.sample_into(e.span());
    const double d = dot(grad, e);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = d * e[i];
      ns[i] = nn * s[i];
      step[i] = x[i] - s[i] / L;
      step_n[i] = x[i] - ns[i] / L;
    }
    const Vector y = project_box(box, step);
    const Vector y_tilde = project_box(box, step_n);
    on_sample(step, y, step_n, y_tilde);

    Vector r(n), r_tilde(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = y[i] - step[i];
      r_tilde[i] = y_tilde[i] - step_n[i];
    }
    const double f_y = model.value(y);
    const double prog_s = prog(s, x, box, L);
    const double prog_ns = prog(ns, x, box, L);
    double inner = 0.0;
    for (std::size_t i = 0; i < n; ++i) inner += r[i] * (s[i] - grad[i]);
    const double r2 = dot(r, r);
    const double rt2 = dot(r_tilde, r_tilde);

    lhs.add(prog_ns);
    rhs.add(nn * nn * (f_x - f_y));
    residual.add(inner);

    const double identity = d * d / (2.0 * L) - 0.5 * L * r2 + inner - (f_x - f_y);
    report.identity_max_abs = std::max(report.identity_max_abs, std::abs(identity));
    report.scaling_max_abs =
        std::max(report.scaling_max_abs, std::abs(prog_ns - nn * nn * prog_s));
    report.residual_scaling_max_abs =
        std::max(report.residual_scaling_max_abs, std::abs(rt2 - nn * nn * r2));
  }
  report.lhs = lhs.estimate();
  report.rhs = rhs.estimate();
  report.residual = residual.estimate();
  return report;
}

}  // namespace

CounterexampleReport counterexample_on_box(const BoxRegion& box,
                                           std::span<const double> x,
                                           std::span<const double> grad, double L,
                                           std::size_t m, SphereSampler& sampler) {
  return sample_counterexample(box, x, grad, L, m, sampler,
                               [](const Vector&, const Vector&, const Vector&,
                                  const Vector&) {});
}

CounterexampleReport counterexample_experiment(std::size_t n,
                                               std::span<const double> grad,
                                               double half_width, double L,
                                               std::size_t m,
                                               SphereSampler& sampler) {
  if (n < 2) throw ConfigurationError("counterexample: n must be >= 2");
  if (grad.size() != n) throw DimensionMismatchError("counterexample: gradient");
  if (!(half_width > 0.0)) throw ConfigurationError("counterexample: half_width <= 0");
  if (grad[n - 1] == 0.0) {
    throw ConfigurationError(
        "counterexample: gradient needs a nonzero component normal to the facet");
  }
  Vector lower(n, -half_width), upper(n, half_width);
  lower[n - 1] = 0.0;
  upper[n - 1] = 2.0 * half_width;
  const BoxRegion box(std::move(lower), std::move(upper));
  const Vector x(n);

  auto only_facet_binds = [&](const Vector& target, const Vector& projected) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (target[i] != projected[i]) {
        throw ConfigurationError(
            "counterexample: constraint on coordinate " + std::to_string(i) +
            " binds; increase half_width (" + std::to_string(half_width) + ")");
      }
    }
    if (target[n - 1] > box.upper()[n - 1]) {
      throw ConfigurationError("counterexample: opposite facet binds; increase half_width");
    }
  };
  return sample_counterexample(
      box, x, grad, L, m, sampler,
      [&](const Vector& step, const Vector& y, const Vector& step_n,
          const Vector& y_tilde) {
        only_facet_binds(step, y);
        only_facet_binds(step_n, y_tilde);
      });
}

}  // namespace acds
