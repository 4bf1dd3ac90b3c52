#pragma once

#include "directions.hpp"

namespace simplexd {

/// Proj_{S,T_{1:m}} M = sum_j pinv(S^T) e_j e_j^T S^T M T_j pinv(T_j).
/// With a common T-bar this is pinv(S^T) S^T M T pinv(T).
inline Matrix proj_st(const Matrix& m, const DirectionMatrix& s, const DirectionFamily& t) {
  validate_pair(s, t);
  const Index n = s.dim();
  require(m.rows() == n && m.cols() == n, "proj_st: M must be n x n");
  const Matrix st_pinv = pinv(s.matrix().transpose());
  const Matrix stm = s.matrix().transpose() * m;
  if (t.all_equal()) {
    const Matrix& tb = t[0].matrix();
    return st_pinv * stm * tb * pinv(tb);
  }
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < s.cols(); ++j) {
    const Matrix& tj = t[j].matrix();
    out += st_pinv.col(j) * (stm.row(j) * tj * pinv(tj));
  }
  return out;
}

/// P_S w = pinv(S^T) S^T w, the orthogonal projection onto span(S).
inline Vector proj_vec(const Vector& w, const DirectionMatrix& s) {
  require(w.size() == s.dim(), "proj_vec: length mismatch");
  return pinv(s.matrix().transpose()) * (s.matrix().transpose() * w);
}

inline Matrix extract_diag(const Matrix& m) {
  require(m.rows() == m.cols(), "extract_diag: matrix must be square");
  return m.diagonal().asDiagonal();
}

inline Matrix extract_strict_upper(const Matrix& m) {
  require(m.rows() == m.cols(), "extract_strict_upper: matrix must be square");
  return m.triangularView<Eigen::StrictlyUpper>();
}

/// R_i = Diag(e_i) M: row i kept, every other row zero.
inline Matrix row_mask(const Matrix& m, Index i) {
  require(m.rows() == m.cols(), "row_mask: matrix must be square");
  require(i >= 0 && i < m.rows(), "row_mask: row index out of range");
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  out.row(i) = m.row(i);
  return out;
}

}  // namespace simplexd
