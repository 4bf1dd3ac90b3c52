#pragma once

#include "bounds.hpp"
#include "estimators.hpp"
#include "polynomial.hpp"
#include "projections.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace simplexd {

/// A smooth objective with an analytic Hessian. Polynomials also carry their
/// exact representation so Lipschitz constants can be computed.
struct TestFunction {
  std::string name;
  Index n = 1;
  std::function<double(const Vector&)> f;
  std::function<Matrix(const Vector&)> hessian;
  std::optional<PolynomialFunction> polynomial;
  Vector default_x0;
};

inline TestFunction from_polynomial(std::string name, const PolynomialFunction& p, Vector x0) {
  return TestFunction{std::move(name), p.dim(), [p](const Vector& x) { return p(x); },
                      [p](const Vector& x) { return p.hessian(x); }, p, std::move(x0)};
}

/// exp(x1) + sin(x2) + x1 x2^2 in three variables (x3 unused).
inline TestFunction expsin() {
  TestFunction t;
  t.name = "expsin";
  t.n = 3;
  t.f = [](const Vector& x) { return std::exp(x(0)) + std::sin(x(1)) + x(0) * x(1) * x(1); };
  t.hessian = [](const Vector& x) {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = std::exp(x(0));
    h(0, 1) = h(1, 0) = 2.0 * x(1);
    h(1, 1) = -std::sin(x(1)) + 2.0 * x(0);
    return h;
  };
  t.default_x0 = Vector{{0.5, 1.0, -0.3}};
  return t;
}

inline PolynomialFunction rosenbrock_polynomial() {
  // 100 (x2 - x1^2)^2 + (1 - x1)^2
  PolynomialFunction p(2);
  p.add({4, 0}, 100.0).add({2, 1}, -200.0).add({0, 2}, 100.0).add({2, 0}, 1.0).add({1, 0}, -2.0).add({0, 0}, 1.0);
  return p;
}

inline std::vector<TestFunction> function_registry() {
  return {
      from_polynomial("quartic3", quartic3(), Vector{{2.0, -2.0, 5.0}}),
      expsin(),
      from_polynomial("rosenbrock", rosenbrock_polynomial(), Vector{{-1.2, 1.0}}),
  };
}

inline std::optional<TestFunction> find_function(const std::string& name) {
  for (auto& t : function_registry())
    if (t.name == name) return t;
  return std::nullopt;
}

/// Frobenius norm of a tensor, an upper bound on its induced norm.
inline double frobenius(const DerivTensor& t) {
  double s = 0.0;
  for (double x : t.data()) s += x * x;
  return std::sqrt(s);
}

/// Lipschitz constant of the order-`order` derivative of p on the closed
/// ball B(x0; radius): the largest Frobenius norm of the next derivative
/// tensor over the centre and a fixed set of boundary points, inflated by
/// 1.05.
inline double lipschitz_constant(const PolynomialFunction& p, const Vector& x0, double radius, Index order) {
  require(radius >= 0.0, "ball radius must be nonnegative");
  if (p.degree() <= order) return 0.0;
  const Index n = p.dim();
  double best = frobenius(p.derivative(x0, order + 1));
  if (p.degree() == order + 1) return 1.05 * best;  // constant tensor
  std::vector<Vector> dirs;
  for (Index i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 64 * static_cast<int>(n); ++s) {
    Vector d(n);
    for (Index i = 0; i < n; ++i) d(i) = normal(rng);
    dirs.push_back(d.normalized());
  }
  for (const auto& d : dirs) best = std::max(best, frobenius(p.derivative(x0 + radius * d, order + 1)));
  return 1.05 * best;
}

/// Matrices: spectral norm; vectors: Euclidean; higher order: spectral norm
/// of the mode-1 unfolding.
inline double error_norm(const DerivTensor& diff) {
  if (diff.order() == 1) return diff.to_vector().norm();
  if (diff.order() == 2) return spectral_norm(diff.to_matrix());
  return spectral_norm(diff.unfold());
}

/// The part of the true Hessian a scheme can see: Proj_{S,T} H for Hessian
/// schemes, P_S (H v) for HVP schemes and the projected diagonal for CSHD.
inline DerivTensor projected_truth(const SchemeSpec& spec, const Directions& d, const Matrix& hess) {
  switch (spec.kind) {
    case SchemeKind::hvp_gsh:
    case SchemeKind::hvp_gcsh: return DerivTensor::from_vector(proj_vec(hess * spec.v, d.outer));
    case SchemeKind::cshd: return DerivTensor::from_vector(proj_st(hess, d.outer, d.inner).diagonal());
    default: return DerivTensor::from_matrix(proj_st(hess, d.outer, d.inner));
  }
}

/// Radius of the ball the bound's Lipschitz constants must hold on.
inline double bound_ball_radius(const SchemeSpec& spec, const Directions& d) {
  const Radii r = radii(d.outer, d.inner);
  if (spec.kind == SchemeKind::diag || spec.kind == SchemeKind::cshd) return r.delta_s;
  return r.delta_s + r.delta_t;
}

/// Right-hand side of the error bound matching the scheme.
inline double scheme_bound(const SchemeSpec& spec, const Directions& d, double l_hessian, double l_third) {
  BoundInputs in = bound_inputs(d.outer, d.inner, l_hessian, l_third);
  const BoundVariant variant = d.inner.all_equal() ? BoundVariant::common_t : BoundVariant::general;
  switch (spec.kind) {
    case SchemeKind::full_gsh_minimal: return gsh_bound(in, variant);
    case SchemeKind::full_gcsh_minimal: return gcsh_bound(in, variant);
    case SchemeKind::diag:
    case SchemeKind::cshd: return diag_bound(l_third, in.delta_s);
    case SchemeKind::off_diag: return offdiag_bound(in, spec.centered);
    case SchemeKind::row: return row_bound(in, spec.centered);
    case SchemeKind::hvp_gsh:
    case SchemeKind::hvp_gcsh: in.v_norm = spec.v.norm(); return hvp_bound(in, spec.kind == SchemeKind::hvp_gcsh);
    case SchemeKind::custom: break;
  }
  return is_centered(spec) ? gcsh_bound(in, variant) : gsh_bound(in, variant);
}

/// h0, h0 r, h0 r^2, ...
inline std::vector<double> geometric_radii(double h0 = 1e-1, double ratio = 0.5, int count = 8) {
  require(h0 > 0.0 && ratio > 0.0 && ratio < 1.0 && count >= 1, "invalid radius sweep");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(h0 * std::pow(ratio, i));
  return out;
}

struct SweepRow {
  double h = 0.0;
  double delta_u = 0.0;
  double error = 0.0;
  std::optional<double> bound;
  std::size_t evaluations = 0;
  bool pass = true;  // error <= bound (+ slack) when a bound is known
};

struct SweepReport {
  std::string scheme;
  std::string function;
  std::vector<SweepRow> rows;
  std::optional<double> slope;
  bool exact = false;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

inline constexpr double kBoundSlack = 1e-8;

/// Least-squares slope of log(error) against log(delta_u).
inline std::optional<double> fit_slope(const std::vector<double>& delta, const std::vector<double>& error) {
  if (delta.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  const double k = static_cast<double>(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    mx += std::log(delta[i]);
    my += std::log(error[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double dx = std::log(delta[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

inline Radii radii_of(const Directions& d) { return radii(d.outer, d.inner); }

namespace detail {

inline void check_sweep(const std::vector<double>& radii, std::size_t min_count) {
  require(radii.size() >= min_count, "radius sweep needs at least " + std::to_string(min_count) + " radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0, "radii must be positive");
    if (i) require(radii[i] < radii[i - 1], "radii must be strictly decreasing");
  }
}

inline SweepReport sweep(SchemeSpec spec, const TestFunction& fn, const Vector& x0, const std::vector<double>& radii) {
  require(x0.size() == fn.n && spec.n == fn.n, "x0 and scheme dimension must match the function");
  if ((spec.kind == SchemeKind::diag || spec.kind == SchemeKind::cshd) && spec.subset.empty())
    for (Index i = 0; i < spec.n; ++i) spec.subset.push_back(i);
  SweepReport report;
  report.scheme = scheme_name(spec);
  report.function = fn.name;
  const Matrix hess = fn.hessian(x0);
  for (double h : radii) {
    spec.h = h;
    const Directions d = build(spec);
    EvalCache cache;
    const EstimatorResult est = approximate(fn.f, x0, spec, cache);
    SweepRow row;
    row.h = h;
    row.delta_u = radii_of(d).delta_u;
    row.error = error_norm(est.value - projected_truth(spec, d, hess));
    row.evaluations = est.evaluations;
    if (fn.polynomial) {
      const double ball = bound_ball_radius(spec, d);
      const double l2 = lipschitz_constant(*fn.polynomial, x0, ball, 2);
      const double l3 = lipschitz_constant(*fn.polynomial, x0, ball, 3);
      row.bound = scheme_bound(spec, d, l2, l3);
      row.pass = row.error <= *row.bound + kBoundSlack;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace detail

/// Runs the scheme over a geometric radius sweep and fits the empirical order.
/// Radii whose error falls under 1e3 * eps * scale are left out of the fit;
/// if none remain the report is flagged exact.
inline SweepReport convergence_order(const SchemeSpec& spec, const TestFunction& fn, const Vector& x0,
                                     const std::vector<double>& radii) {
  detail::check_sweep(radii, 4);
  for (std::size_t i = 2; i < radii.size(); ++i) {
    const double r0 = radii[1] / radii[0], r1 = radii[i] / radii[i - 1];
    require(std::abs(r1 - r0) <= 1e-9 * r0, "radii must form a geometric sequence");
  }
  SweepReport report = detail::sweep(spec, fn, x0, radii);
  const double scale = std::max(1.0, spectral_norm(fn.hessian(x0)));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
  std::vector<double> xs, ys;
  for (const auto& r : report.rows) {
    if (r.error < floor) continue;
    xs.push_back(r.delta_u);
    ys.push_back(r.error);
  }
  report.exact = xs.empty();
  if (xs.size() >= 2) report.slope = fit_slope(xs, ys);
  return report;
}

/// Measured error against the scheme's bound at every radius.
inline SweepReport verify_bound(const SchemeSpec& spec, const TestFunction& fn, const Vector& x0,
                                const std::vector<double>& radii) {
  require(fn.polynomial.has_value(), "bound verification needs a polynomial with analytic Lipschitz constants");
  detail::check_sweep(radii, 1);
  return detail::sweep(spec, fn, x0, radii);
}

}  // namespace simplexd
