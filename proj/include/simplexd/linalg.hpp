#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplexd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when a caller violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline void require_finite(const Matrix& a, const char* name) {
  require(a.rows() >= 1 && a.cols() >= 1, std::string(name) + " must be nonempty");
  require(a.allFinite(), std::string(name) + " has non-finite entries");
}

namespace detail {

inline double svd_cutoff(const Matrix& a, double sigma_max) {
  const double rtol = static_cast<double>(std::max(a.rows(), a.cols())) *
                      std::numeric_limits<double>::epsilon();
  return rtol * sigma_max;
}

}  // namespace detail

/// Moore-Penrose pseudoinverse through a thin SVD. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero.
inline Matrix pinv(const Matrix& a) {
  require_finite(a, "pinv input");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = detail::svd_cutoff(a, sigma.size() ? sigma(0) : 0.0);
  Vector inv = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Numerical rank with the same truncation rule as pinv().
inline Index rank(const Matrix& a) {
  require_finite(a, "rank input");
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sigma = svd.singularValues();
  const double cutoff = detail::svd_cutoff(a, sigma.size() ? sigma(0) : 0.0);
  Index r = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++r;
  return r;
}

/// Induced 2-norm (largest singular value).
inline double spectral_norm(const Matrix& a) {
  require_finite(a, "spectral_norm input");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard: shape mismatch");
  return a.cwiseProduct(b);
}

struct PartialDiagonalInfo {
  bool is_partial_diagonal = false;
  // Row holding the (possibly zero) diagonal entry of each column; empty
  // unless is_partial_diagonal.
  std::vector<Index> nonzero_row;
  bool full_column_rank = false;
};

/// Classifies a matrix as a subset of the columns of one diagonal matrix.
/// Entries are compared against exact zero. A zero column is assigned the
/// smallest row not claimed by another column. For matrices that are not
/// partial diagonal, full_column_rank reports the numerical rank test.
inline PartialDiagonalInfo partial_diagonal_info(const Matrix& m) {
  PartialDiagonalInfo info;
  const Index n = m.rows();
  const Index cols = m.cols();
  if (cols > n) {
    info.full_column_rank = false;
    return info;
  }
  std::vector<Index> row(cols, -1);
  std::vector<bool> used(n, false);
  bool ok = true;
  bool zero_column = false;
  for (Index j = 0; j < cols && ok; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (m(i, j) == 0.0) continue;
      if (row[j] != -1 || used[i]) {
        ok = false;
        break;
      }
      row[j] = i;
      used[i] = true;
    }
  }
  if (ok) {
    for (Index j = 0; j < cols; ++j) {
      if (row[j] != -1) continue;
      zero_column = true;
      auto free = std::find(used.begin(), used.end(), false);
      row[j] = static_cast<Index>(free - used.begin());
      *free = true;
    }
    info.is_partial_diagonal = true;
    info.nonzero_row = std::move(row);
    info.full_column_rank = !zero_column;
    return info;
  }
  info.full_column_rank = rank(m) == cols;
  return info;
}

/// Row-by-row pseudoinverse of a partial diagonal matrix with full column
/// rank: row j is (1 / s_{u_j}) e_{u_j}^T.
inline Matrix pinv_partial_diagonal(const Matrix& s) {
  require_finite(s, "pinv_partial_diagonal input");
  const PartialDiagonalInfo info = partial_diagonal_info(s);
  require(info.is_partial_diagonal && info.full_column_rank,
          "pinv_partial_diagonal: input must be partial diagonal with full column rank");
  Matrix out = Matrix::Zero(s.cols(), s.rows());
  for (Index j = 0; j < s.cols(); ++j) {
    const Index u = info.nonzero_row[static_cast<std::size_t>(j)];
    out(j, u) = 1.0 / s(u, j);
  }
  return out;
}

}  // namespace simplexd
