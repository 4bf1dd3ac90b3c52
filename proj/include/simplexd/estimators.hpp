#pragma once

#include "directions.hpp"
#include "sampling.hpp"
#include "tensor.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplexd {

class UnsupportedConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline Terms with(Terms base, const DirectionMatrix& m, Index j) {
  base.push_back(Term{m.column_label(j), m.column(j)});
  return base;
}

inline void require_dim(const PointValues& values, const DirectionMatrix& m) {
  require(m.dim() == values.dim(), "direction matrix rows must equal the dimension of x0");
}

}  // namespace detail

/// Forward differences f(base + s_j) - f(base), base = x0 + sum(base terms).
inline Vector delta_s(const PointValues& values, const Terms& base, const DirectionMatrix& s) {
  detail::require_dim(values, s);
  const double f0 = values.value(base);
  Vector d(s.cols());
  for (Index j = 0; j < s.cols(); ++j) d(j) = values.value(detail::with(base, s, j)) - f0;
  return d;
}

inline Vector delta_s(const PointValues& values, const DirectionMatrix& s) { return delta_s(values, {}, s); }

/// Generalized simplex gradient pinv(S^T) delta_s at base.
inline Vector gsg_at(const PointValues& values, const Terms& base, const DirectionMatrix& s) {
  return pinv(s.matrix().transpose()) * delta_s(values, base, s);
}

inline Vector gsg(const PointValues& values, const DirectionMatrix& s) { return gsg_at(values, {}, s); }

/// Generalized simplex Hessian at base. Row j of the difference matrix is
/// (gsg(base + s_j; T_j) - gsg(base; T_j))^T.
inline Matrix gsh_at(const PointValues& values, const Terms& base, const DirectionMatrix& s,
                     const DirectionFamily& t) {
  validate_pair(s, t);
  detail::require_dim(values, s);
  const Index n = s.dim();
  Matrix delta(s.cols(), n);
  for (Index j = 0; j < s.cols(); ++j) {
    const Vector shifted = gsg_at(values, detail::with(base, s, j), t[j]);
    const Vector here = gsg_at(values, base, t[j]);
    delta.row(j) = (shifted - here).transpose();
  }
  return pinv(s.matrix().transpose()) * delta;
}

inline Matrix gsh(const PointValues& values, const DirectionMatrix& s, const DirectionFamily& t) {
  return gsh_at(values, {}, s, t);
}

/// Centered simplex Hessian: mean of the GSH over (S, T) and (-S, -T).
inline Matrix gcsh(const PointValues& values, const DirectionMatrix& s, const DirectionFamily& t) {
  const Matrix plus = gsh(values, s, t);
  const Matrix minus = gsh(values, s.negated(), t.negated());
  return 0.5 * (plus + minus);
}

/// Centered simplex Hessian diagonal pinv(W^T) eps, W_j = s_j (.) s_j.
inline Vector cshd(const PointValues& values, const DirectionMatrix& s) {
  detail::require_dim(values, s);
  const Matrix w = hadamard(s.matrix(), s.matrix());
  const DirectionMatrix neg = s.negated();
  const double f0 = values.value({});
  Vector eps(s.cols());
  for (Index j = 0; j < s.cols(); ++j)
    eps(j) = values.value(detail::with({}, s, j)) + values.value(detail::with({}, neg, j)) - 2.0 * f0;
  return pinv(w.transpose()) * eps;
}

/// Hessian-vector product estimate: GSH (or GCSH) over S and T-bar = h v,
/// applied to v.
inline Vector hvp(const PointValues& values, const DirectionMatrix& s, const Vector& v, double h, bool centered) {
  require(v.size() == values.dim(), "v must have the dimension of x0");
  require(v.allFinite() && v.cwiseAbs().maxCoeff() > 0.0, "v must be nonzero");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  const DirectionFamily t = DirectionFamily::common(DirectionMatrix(Matrix(h * v), "Tbar"), s.cols());
  const Matrix hess = centered ? gcsh(values, s, t) : gsh(values, s, t);
  return hess * v;
}

/// HVP estimate on the default square S (first column -h v).
inline Vector hvp(const PointValues& values, const Vector& v, double h, bool centered) {
  const Directions d = build_hvp(values.dim(), v, h);
  return hvp(values, d.outer, v, h, centered);
}

namespace detail {

inline DerivTensor derivative_at(const PointValues& values, const Terms& base,
                                 const std::vector<DirectionMatrix>& levels, std::size_t level) {
  const DirectionMatrix& s = levels[level];
  if (level + 1 == levels.size()) return DerivTensor::from_vector(gsg_at(values, base, s));
  const DerivTensor here = derivative_at(values, base, levels, level + 1);
  Matrix delta;
  std::vector<Index> dims;
  for (Index j = 0; j < s.cols(); ++j) {
    const DerivTensor diff = (derivative_at(values, with(base, s, j), levels, level + 1) - here).transposed();
    if (j == 0) {
      dims = diff.dims();
      dims.insert(dims.begin(), s.cols());
      delta.resize(s.cols(), diff.size());
    }
    delta.row(j) = Eigen::Map<const Eigen::RowVectorXd>(diff.data().data(), diff.size());
  }
  return tensor_mul(pinv(s.matrix().transpose()), DerivTensor::fold(delta, std::move(dims)));
}

}  // namespace detail

inline constexpr Index kDefaultMaxOrder = 4;

/// Order-P simplex derivative tensor over S_1 and the shared matrices
/// S_2..S_P (P = 1 + inner.size()). P = 1 is the GSG and P = 2 the GSH with a
/// common T-bar.
inline DerivTensor simplex_derivative_tensor(const PointValues& values, const DirectionMatrix& s1,
                                             const std::vector<DirectionMatrix>& inner,
                                             Index max_order = kDefaultMaxOrder) {
  const Index order = 1 + static_cast<Index>(inner.size());
  require(order <= max_order, "requested derivative order " + std::to_string(order) + " exceeds the maximum " +
                                  std::to_string(max_order));
  std::vector<DirectionMatrix> levels{s1};
  levels.insert(levels.end(), inner.begin(), inner.end());
  for (const auto& m : levels) detail::require_dim(values, m);
  return detail::derivative_at(values, {}, levels, 0);
}

/// Same, with one family per inner level; only all-equal families are
/// supported.
inline DerivTensor simplex_derivative_tensor(const PointValues& values, const DirectionMatrix& s1,
                                             const std::vector<DirectionFamily>& inner,
                                             Index max_order = kDefaultMaxOrder) {
  std::vector<DirectionMatrix> levels;
  for (const auto& fam : inner) {
    if (!fam.all_equal())
      throw UnsupportedConfiguration("order-P simplex derivatives need identical matrices within each level");
    levels.push_back(fam[0]);
  }
  return simplex_derivative_tensor(values, s1, levels, max_order);
}

/// Generalized simplex Tressian: floor j of the difference tensor is
/// (GSH(x0 + s_j; T, U) - GSH(x0; T, U))^T.
inline DerivTensor gst(const PointValues& values, const DirectionMatrix& s, const DirectionMatrix& tbar,
                       const DirectionMatrix& ubar) {
  detail::require_dim(values, s);
  const Index n = s.dim();
  const DirectionFamily u = DirectionFamily::common(ubar, tbar.cols());
  const Matrix here = gsh(values, tbar, u);
  DerivTensor delta({s.cols(), n, n});
  for (Index j = 0; j < s.cols(); ++j) {
    const Matrix shifted = gsh_at(values, detail::with({}, s, j), tbar, u);
    delta.floor(j) = (shifted - here).transpose();
  }
  return tensor_mul(pinv(s.matrix().transpose()), delta);
}

/// Result of running a named scheme end to end.
struct EstimatorResult {
  DerivTensor value;
  SamplePlan plan;
  std::size_t evaluations = 0;
};

inline std::string scheme_name(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::full_gsh_minimal: return "gsh-minimal";
    case SchemeKind::full_gcsh_minimal: return "gcsh-minimal";
    case SchemeKind::diag: return "diag";
    case SchemeKind::off_diag: return spec.centered ? "offdiag-gcsh" : "offdiag-gsh";
    case SchemeKind::row: return spec.centered ? "row-gcsh" : "row-gsh";
    case SchemeKind::hvp_gsh: return "hvp-gsh";
    case SchemeKind::hvp_gcsh: return "hvp-gcsh";
    case SchemeKind::cshd: return "cshd";
    case SchemeKind::custom: return "custom";
  }
  return "custom";
}

/// The estimator a scheme runs: a Hessian (order 2) or, for HVP kinds, a
/// vector (order 1).
inline DerivTensor run_estimator(const PointValues& values, const SchemeSpec& spec, const Directions& d) {
  const bool centered = is_centered(spec);
  if (spec.kind == SchemeKind::cshd) return DerivTensor::from_vector(cshd(values, d.outer));
  if (spec.kind == SchemeKind::hvp_gsh || spec.kind == SchemeKind::hvp_gcsh)
    return DerivTensor::from_vector(hvp(values, d.outer, spec.v, spec.h, centered));
  return DerivTensor::from_matrix(centered ? gcsh(values, d.outer, d.inner) : gsh(values, d.outer, d.inner));
}

/// Deduplicated points the scheme's estimator reads at x0.
inline SamplePlan enumerate(const SchemeSpec& spec, const Vector& x0, const Directions& d) {
  RecordingValues rec(x0);
  run_estimator(rec, spec, d);
  return rec.plan(scheme_name(spec));
}

inline SamplePlan enumerate(const SchemeSpec& spec, const Vector& x0) {
  require(x0.size() == spec.n, "x0 must have length n");
  return enumerate(spec, x0, build(spec));
}

/// Plan of an arbitrary estimator call.
inline SamplePlan enumerate(const Vector& x0, const std::function<void(const PointValues&)>& estimator,
                            std::string name = "custom") {
  RecordingValues rec(x0);
  estimator(rec);
  return rec.plan(std::move(name));
}

/// Builds directions, evaluates f on the plan through the cache, then runs
/// the estimator against the populated cache.
template <typename F>
EstimatorResult approximate(F&& f, const Vector& x0, const SchemeSpec& spec, EvalCache& cache,
                            unsigned threads = 1) {
  require(x0.size() == spec.n, "x0 must have length n");
  const Directions d = build(spec);
  EstimatorResult out;
  out.plan = enumerate(spec, x0, d);
  evaluate(f, out.plan, cache, threads);
  out.evaluations = out.plan.count();
  out.value = run_estimator(CachedValues(x0, cache), spec, d);
  return out;
}

template <typename F>
EstimatorResult approximate(F&& f, const Vector& x0, const SchemeSpec& spec) {
  EvalCache cache;
  return approximate(std::forward<F>(f), x0, spec, cache);
}

}  // namespace simplexd
