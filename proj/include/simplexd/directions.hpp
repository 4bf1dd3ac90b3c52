#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace simplexd {

/// An n x m matrix whose columns are sampling directions, together with its
/// radius (largest column norm). The name labels columns in point provenance.
class DirectionMatrix {
 public:
  DirectionMatrix(Matrix base, std::string name = "S") : base_(std::move(base)), name_(std::move(name)) {
    require_finite(base_, "direction matrix");
    radius_ = base_.colwise().norm().maxCoeff();
    require(radius_ > 0.0, "direction matrix must have non-null rank");
  }

  const Matrix& matrix() const { return base_; }
  const std::string& name() const { return name_; }
  Index dim() const { return base_.rows(); }
  Index cols() const { return base_.cols(); }
  auto column(Index j) const { return base_.col(j); }
  double radius() const { return radius_; }
  Matrix normalized() const { return base_ / radius_; }

  std::string column_label(Index j) const { return name_ + "[" + std::to_string(j + 1) + "]"; }

  DirectionMatrix negated() const {
    const std::string neg = name_.starts_with("-") ? name_.substr(1) : "-" + name_;
    return DirectionMatrix(-base_, neg);
  }

  friend bool operator==(const DirectionMatrix& a, const DirectionMatrix& b) {
    return a.base_.rows() == b.base_.rows() && a.base_.cols() == b.base_.cols() && a.base_ == b.base_;
  }

 private:
  Matrix base_;
  std::string name_;
  double radius_ = 0.0;
};

/// The inner directions T_1..T_m paired with the columns of S.
class DirectionFamily {
 public:
  explicit DirectionFamily(std::vector<DirectionMatrix> members) : members_(std::move(members)) {
    require(!members_.empty(), "direction family must be nonempty");
    const Index n = members_.front().dim();
    all_equal_ = true;
    for (const auto& t : members_) {
      require(t.dim() == n, "direction family members must share the row dimension");
      all_equal_ = all_equal_ && t == members_.front();
    }
  }

  /// m copies of one matrix (the T-bar case).
  static DirectionFamily common(const DirectionMatrix& t, Index m) {
    require(m >= 1, "direction family must be nonempty");
    return DirectionFamily(std::vector<DirectionMatrix>(static_cast<std::size_t>(m), t));
  }

  Index size() const { return static_cast<Index>(members_.size()); }
  const DirectionMatrix& operator[](Index j) const { return members_[static_cast<std::size_t>(j)]; }
  const std::vector<DirectionMatrix>& members() const { return members_; }
  bool all_equal() const { return all_equal_; }

  DirectionFamily negated() const {
    std::vector<DirectionMatrix> out;
    out.reserve(members_.size());
    for (const auto& t : members_) out.push_back(t.negated());
    return DirectionFamily(std::move(out));
  }

 private:
  std::vector<DirectionMatrix> members_;
  bool all_equal_ = false;
};

/// Outer directions S with their inner family T_{1:m}.
struct Directions {
  DirectionMatrix outer;
  DirectionFamily inner;
};

inline void validate_pair(const DirectionMatrix& s, const DirectionFamily& t) {
  require(t.size() == s.cols(), "direction family size must equal the number of columns of S");
  require(t[0].dim() == s.dim(), "S and T_j must share the row dimension");
}

/// Radii and normalized pseudoinverse norms that feed the error bounds.
struct Radii {
  double delta_s = 0.0;
  double delta_t = 0.0;
  double delta_u = 0.0;
  double delta_l = 0.0;
  Index k = 0;
  Index widest_t = 0;             // argmax_j ||pinv(T_hat_j)||
  double s_hat_pinv_norm = 0.0;   // ||pinv(S_hat^T)||
  double t_hat_pinv_norm = 0.0;   // ||pinv(T_hat)||, maximal over j
};

inline Radii radii(const DirectionMatrix& s, const DirectionFamily& t) {
  validate_pair(s, t);
  Radii r;
  r.delta_s = s.radius();
  r.delta_u = r.delta_s;
  r.delta_l = r.delta_s;
  r.s_hat_pinv_norm = spectral_norm(pinv(s.normalized().transpose()));
  r.t_hat_pinv_norm = -1.0;
  for (Index j = 0; j < t.size(); ++j) {
    const double dt = t[j].radius();
    r.delta_t = std::max(r.delta_t, dt);
    r.delta_u = std::max(r.delta_u, dt);
    r.delta_l = std::min(r.delta_l, dt);
    r.k = std::max(r.k, t[j].cols());
    const double norm = spectral_norm(pinv(t[j].normalized()));
    if (norm > r.t_hat_pinv_norm) {
      r.t_hat_pinv_norm = norm;
      r.widest_t = j;
    }
  }
  return r;
}

enum class SchemeKind {
  full_gsh_minimal,
  full_gcsh_minimal,
  diag,
  off_diag,
  row,
  hvp_gsh,
  hvp_gcsh,
  cshd,  // diagonal-only estimate over the diag directions
  custom,
};

struct SchemeSpec {
  SchemeKind kind = SchemeKind::full_gsh_minimal;
  Index n = 1;
  double h = 1e-3;
  bool centered = false;       // GCSH instead of GSH where the kind allows both
  Index row = 0;               // 0-based, row kind only
  Vector v;                    // HVP kinds only
  std::vector<Index> subset;   // 0-based, diag kind only
};

/// Step used when the caller gives none.
inline double default_step(const Vector& x0) { return 1e-3 * std::max(1.0, x0.norm()); }

inline Directions build_full_gsh_minimal(Index n, double h) {
  require(n >= 1, "n must be at least 1");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  const Matrix s = h * Matrix::Identity(n, n);
  std::vector<DirectionMatrix> ts;
  for (Index j = 0; j < n; ++j)
    ts.emplace_back(Matrix(s.rightCols(n - j)), "T" + std::to_string(j + 1));
  return {DirectionMatrix(s, "S"), DirectionFamily(std::move(ts))};
}

inline Directions build_full_gcsh_minimal(Index n, double h) {
  require(n >= 1, "n must be at least 1");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  DirectionMatrix s(h * Matrix::Identity(n, n), "S");
  DirectionMatrix tbar(-s.matrix(), "Tbar");
  return {s, DirectionFamily::common(tbar, n)};
}

/// Columns h e_i for i in the subset, T_j = -s_j.
inline Directions build_diag(Index n, double h, const std::vector<Index>& subset) {
  require(n >= 1, "n must be at least 1");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  require(!subset.empty(), "diag subset must be nonempty");
  std::vector<Index> seen;
  Matrix s = Matrix::Zero(n, static_cast<Index>(subset.size()));
  std::vector<DirectionMatrix> ts;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const Index i = subset[j];
    require(i >= 0 && i < n, "diag subset index out of range");
    require(std::find(seen.begin(), seen.end(), i) == seen.end(), "diag subset indices must be distinct");
    seen.push_back(i);
    s(i, static_cast<Index>(j)) = h;
    ts.emplace_back(Matrix(-s.col(static_cast<Index>(j))), "T" + std::to_string(j + 1));
  }
  return {DirectionMatrix(s, "S"), DirectionFamily(std::move(ts))};
}

/// S = h[e_1 .. e_{n-1}], T_j = h[e_{j+1} .. e_n].
inline Directions build_off_diag(Index n, double h) {
  require(n >= 2, "off-diagonal scheme needs n >= 2");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  const Matrix eye = h * Matrix::Identity(n, n);
  std::vector<DirectionMatrix> ts;
  for (Index j = 0; j < n - 1; ++j)
    ts.emplace_back(Matrix(eye.rightCols(n - 1 - j)), "T" + std::to_string(j + 1));
  return {DirectionMatrix(Matrix(eye.leftCols(n - 1)), "S"), DirectionFamily(std::move(ts))};
}

/// S = h e_i, T-bar = h Id.
inline Directions build_row(Index n, Index i, double h) {
  require(n >= 1, "n must be at least 1");
  require(i >= 0 && i < n, "row index out of range");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  const Matrix eye = h * Matrix::Identity(n, n);
  DirectionMatrix s(Matrix(eye.col(i)), "S");
  return {s, DirectionFamily::common(DirectionMatrix(eye, "Tbar"), 1)};
}

/// Square S with first column -h v and h e_j for every j except the
/// coordinate where |v| is largest; T-bar = h v. The negated first column
/// cancels T-bar exactly, which is where the saved evaluations come from.
inline Directions build_hvp(Index n, const Vector& v, double h) {
  require(n >= 1, "n must be at least 1");
  require(v.size() == n, "v must have length n");
  require(v.allFinite(), "v has non-finite entries");
  require(v.cwiseAbs().maxCoeff() > 0.0, "v must be nonzero");
  require(h != 0.0 && std::isfinite(h), "h must be finite and nonzero");
  const Vector hv = h * v;
  Index drop = 0;
  v.cwiseAbs().maxCoeff(&drop);
  Matrix s = Matrix::Zero(n, n);
  s.col(0) = -hv;
  Index c = 1;
  for (Index j = 0; j < n; ++j) {
    if (j == drop) continue;
    s(j, c++) = h;
  }
  return {DirectionMatrix(s, "S"), DirectionFamily::common(DirectionMatrix(Matrix(hv), "Tbar"), n)};
}

/// Checks a user-supplied off-diagonal configuration: S is a partial diagonal
/// matrix with full column rank and a zero last row, and every column of T_j
/// is a nonzero multiple of e_l with l > u_j, drawn from one diagonal matrix.
inline void validate_off_diag_recipe(const DirectionMatrix& s, const DirectionFamily& t) {
  validate_pair(s, t);
  const Index n = s.dim();
  const auto info = partial_diagonal_info(s.matrix());
  require(info.is_partial_diagonal && info.full_column_rank,
          "off-diagonal recipe: S must be partial diagonal with full column rank");
  require(s.matrix().row(n - 1).cwiseAbs().maxCoeff() == 0.0, "off-diagonal recipe: last row of S must be zero");
  std::vector<std::optional<double>> diag(static_cast<std::size_t>(n));
  for (Index j = 0; j < t.size(); ++j) {
    const Index u = info.nonzero_row[static_cast<std::size_t>(j)];
    const auto tinfo = partial_diagonal_info(t[j].matrix());
    require(tinfo.is_partial_diagonal && tinfo.full_column_rank,
            "off-diagonal recipe: each T_j must be columns of a diagonal matrix");
    for (Index c = 0; c < t[j].cols(); ++c) {
      const Index l = tinfo.nonzero_row[static_cast<std::size_t>(c)];
      require(l > u, "off-diagonal recipe: T_j may only use directions e_l with l > u_j");
      auto& slot = diag[static_cast<std::size_t>(l)];
      const double val = t[j].matrix()(l, c);
      require(!slot || *slot == val, "off-diagonal recipe: T_j columns must come from one diagonal matrix");
      slot = val;
    }
  }
}

/// Directions for a named scheme. Custom schemes are constructed directly.
inline Directions build(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::full_gsh_minimal: return build_full_gsh_minimal(spec.n, spec.h);
    case SchemeKind::full_gcsh_minimal: return build_full_gcsh_minimal(spec.n, spec.h);
    case SchemeKind::diag:
    case SchemeKind::cshd: return build_diag(spec.n, spec.h, spec.subset);
    case SchemeKind::off_diag: return build_off_diag(spec.n, spec.h);
    case SchemeKind::row: return build_row(spec.n, spec.row, spec.h);
    case SchemeKind::hvp_gsh:
    case SchemeKind::hvp_gcsh: return build_hvp(spec.n, spec.v, spec.h);
    case SchemeKind::custom: break;
  }
  throw PreconditionError("custom schemes carry their own directions");
}

/// Whether the estimator for this scheme is the centered one.
inline bool is_centered(const SchemeSpec& spec) {
  switch (spec.kind) {
    case SchemeKind::full_gsh_minimal:
    case SchemeKind::hvp_gsh: return false;
    case SchemeKind::full_gcsh_minimal:
    case SchemeKind::diag:
    case SchemeKind::cshd:
    case SchemeKind::hvp_gcsh: return true;
    default: return spec.centered;
  }
}

}  // namespace simplexd
