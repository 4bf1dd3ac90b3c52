// Estimates the Hessian of a quartic with two schemes and prints the
// error against the analytic Hessian as the step shrinks.
#include <simplexd/simplexd.hpp>

#include <cstdio>

int main() {
  using namespace simplexd;
  const PolynomialFunction p = quartic3();
  const Vector x0{{2.0, -2.0, 5.0}};
  const Matrix truth = p.hessian(x0);

  std::printf("%10s %14s %14s\n", "h", "gsh error", "gcsh error");
  for (double h = 0.1; h > 1e-3; h *= 0.5) {
    SchemeSpec fwd{SchemeKind::full_gsh_minimal, 3, h};
    SchemeSpec ctr{SchemeKind::full_gcsh_minimal, 3, h};
    auto f = [&](const Vector& x) { return p(x); };
    const Matrix a = approximate(f, x0, fwd).value.to_matrix();
    const Matrix b = approximate(f, x0, ctr).value.to_matrix();
    std::printf("%10.4g %14.6g %14.6g\n", h, spectral_norm(a - truth), spectral_norm(b - truth));
  }
}
