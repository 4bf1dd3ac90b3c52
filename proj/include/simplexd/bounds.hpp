#pragma once

#include "directions.hpp"

#include <cmath>

namespace simplexd {

/// Quantities entering the error-bound right-hand sides.
struct BoundInputs {
  Index m = 1;
  Index k = 1;
  Index n = 1;
  double delta_u = 0.0;
  double delta_l = 0.0;
  double delta_s = 0.0;
  double s_hat_pinv_norm = 1.0;  // ||pinv(S_hat^T)||
  double t_hat_pinv_norm = 1.0;  // ||pinv(T_hat)|| (or of the common T-bar)
  double lipschitz_hessian = 0.0;  // L of the Hessian
  double lipschitz_third = 0.0;    // L of the third-derivative tensor
  double v_norm = 1.0;

  void validate() const {
    require(m >= 1 && k >= 1 && n >= 1, "bound inputs: m, k, n must be positive");
    require(delta_l > 0.0 && delta_u >= delta_l, "bound inputs: need delta_u >= delta_l > 0");
    require(s_hat_pinv_norm >= 0.0 && t_hat_pinv_norm >= 0.0, "bound inputs: norms must be nonnegative");
    require(lipschitz_hessian >= 0.0 && lipschitz_third >= 0.0, "bound inputs: Lipschitz constants must be nonnegative");
    require(v_norm >= 0.0, "bound inputs: |v| must be nonnegative");
  }
};

/// Fills the geometric fields from the direction matrices.
inline BoundInputs bound_inputs(const DirectionMatrix& s, const DirectionFamily& t, double l_hessian,
                                double l_third) {
  const Radii r = radii(s, t);
  BoundInputs in;
  in.m = s.cols();
  in.k = r.k;
  in.n = s.dim();
  in.delta_u = r.delta_u;
  in.delta_l = r.delta_l;
  in.delta_s = r.delta_s;
  in.s_hat_pinv_norm = r.s_hat_pinv_norm;
  in.t_hat_pinv_norm = r.t_hat_pinv_norm;
  in.lipschitz_hessian = l_hessian;
  in.lipschitz_third = l_third;
  return in;
}

enum class BoundVariant { general, common_t };

inline double gsh_bound(const BoundInputs& in, BoundVariant variant) {
  in.validate();
  const double ratio = in.delta_u / in.delta_l;
  const double m = static_cast<double>(in.m), k = static_cast<double>(in.k);
  const double norms = in.s_hat_pinv_norm * in.t_hat_pinv_norm;
  if (variant == BoundVariant::general)
    return 4.0 * m * std::sqrt(k) * in.lipschitz_hessian * norms * ratio * ratio * in.delta_u;
  return 4.0 * std::sqrt(m * k) * in.lipschitz_hessian * ratio * norms * in.delta_u;
}

inline double gcsh_bound(const BoundInputs& in, BoundVariant variant) {
  in.validate();
  const double ratio = in.delta_u / in.delta_l;
  const double m = static_cast<double>(in.m), k = static_cast<double>(in.k);
  const double norms = in.s_hat_pinv_norm * in.t_hat_pinv_norm;
  const double d2 = in.delta_u * in.delta_u;
  if (variant == BoundVariant::general) return 2.0 * m * std::sqrt(k) * in.lipschitz_third * ratio * ratio * norms * d2;
  return 2.0 * std::sqrt(m * k) * in.lipschitz_third * ratio * norms * d2;
}

/// Diagonal entries from a partial diagonal S with T_j = -s_j.
inline double diag_bound(double l_third, double delta_s) {
  require(l_third >= 0.0 && delta_s > 0.0, "diag_bound: need L >= 0 and delta_s > 0");
  return l_third * delta_s * delta_s / 12.0;
}

inline double offdiag_bound(const BoundInputs& in, bool centered) {
  return centered ? gcsh_bound(in, BoundVariant::general) : gsh_bound(in, BoundVariant::general);
}

/// One row from S = h e_i; ||pinv(S_hat^T)|| = 1 drops out.
inline double row_bound(const BoundInputs& in, bool centered) {
  in.validate();
  const double ratio = in.delta_u / in.delta_l;
  const double k = std::sqrt(static_cast<double>(in.k));
  if (centered) return 2.0 * k * in.lipschitz_third * ratio * in.t_hat_pinv_norm * in.delta_u * in.delta_u;
  return 4.0 * k * in.lipschitz_hessian * ratio * in.t_hat_pinv_norm * in.delta_u;
}

inline double hvp_bound(const BoundInputs& in, bool centered) {
  in.validate();
  const double ratio = in.delta_u / in.delta_l;
  const double m = std::sqrt(static_cast<double>(in.m));
  if (centered) return 2.0 * m * in.lipschitz_third * ratio * in.s_hat_pinv_norm * in.v_norm * in.delta_u * in.delta_u;
  return 4.0 * m * in.lipschitz_hessian * ratio * in.s_hat_pinv_norm * in.v_norm * in.delta_u;
}

}  // namespace simplexd
