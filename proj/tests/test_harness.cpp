#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace simplexd;

namespace {

TEST(Polynomial, DerivativesOfAMonomial) {
  PolynomialFunction p(2);
  p.add({3, 2}, 2.0);  // 2 x^3 y^2
  const Vector x{{1.5, -0.5}};
  EXPECT_DOUBLE_EQ(p(x), 2 * 3.375 * 0.25);
  EXPECT_DOUBLE_EQ(p.gradient(x)(0), 6 * 2.25 * 0.25);
  EXPECT_DOUBLE_EQ(p.gradient(x)(1), 4 * 3.375 * -0.5);
  const Matrix h = p.hessian(x);
  EXPECT_DOUBLE_EQ(h(0, 0), 12 * 1.5 * 0.25);
  EXPECT_DOUBLE_EQ(h(0, 1), 12 * 2.25 * -0.5);
  EXPECT_DOUBLE_EQ(h(1, 0), h(0, 1));
  EXPECT_DOUBLE_EQ(h(1, 1), 4 * 3.375);
  EXPECT_DOUBLE_EQ(p.derivative(x, 5)({0, 0, 0, 1, 1}), 24.0);
  EXPECT_EQ(p.degree(), 5);
}

TEST(Polynomial, MatchesIndependentCubic) {
  // A polynomial built from an oracle cubic's coefficients agrees with it.
  std::mt19937_64 rng(61);
  const oracle::Cubic c = oracle::random_cubic(2, rng, true);
  PolynomialFunction p(2);
  p.add({0, 0}, c.c).add({1, 0}, c.b(0)).add({0, 1}, c.b(1));
  p.add({2, 0}, c.a(0, 0) / 2).add({1, 1}, c.a(0, 1)).add({0, 2}, c.a(1, 1) / 2);
  p.add({3, 0}, c.t[0](0, 0) / 6).add({2, 1}, c.t[0](0, 1) / 2).add({1, 2}, c.t[0](1, 1) / 2).add({0, 3}, c.t[1](1, 1) / 6);
  const Vector x{{0.3, -0.8}};
  EXPECT_NEAR(p(x), c(x), 1e-12);
  EXPECT_LE(oracle::rel_err(p.hessian(x), c.hessian(x)), 1e-12);
}

TEST(TestFunctions, ExpSinHessianMatchesSecondDifferences) {
  const TestFunction f = expsin();
  const Vector x = f.default_x0;
  const double h = 1e-4;
  const Matrix want = f.hessian(x);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const Vector ei = h * Vector::Unit(3, i), ej = h * Vector::Unit(3, j);
      const double fd = (f.f(x + ei + ej) - f.f(x + ei - ej) - f.f(x - ei + ej) + f.f(x - ei - ej)) / (4 * h * h);
      EXPECT_NEAR(fd, want(i, j), 1e-5);
    }
}

TEST(TestFunctions, RegistryLookup) {
  EXPECT_TRUE(find_function("quartic3").has_value());
  EXPECT_TRUE(find_function("rosenbrock")->polynomial.has_value());
  EXPECT_FALSE(find_function("expsin")->polynomial.has_value());
  EXPECT_FALSE(find_function("nope").has_value());
}

TEST(Lipschitz, ConstantHigherDerivatives) {
  PolynomialFunction cube(1);
  cube.add({3}, 1.0);
  EXPECT_DOUBLE_EQ(lipschitz_constant(cube, Vector{{2.0}}, 0.5, 2), 1.05 * 6.0);
  EXPECT_DOUBLE_EQ(lipschitz_constant(cube, Vector{{2.0}}, 0.5, 3), 0.0);
}

TEST(Lipschitz, GrowsToTheBallBoundary) {
  PolynomialFunction q(2);
  q.add({4, 0}, 1.0);
  // Third derivative 24 x1 is largest at x1 = 1.5 on B((1, 0); 0.5).
  EXPECT_NEAR(lipschitz_constant(q, Vector{{1.0, 0.0}}, 0.5, 2), 1.05 * 36.0, 1e-12);
  EXPECT_NEAR(lipschitz_constant(q, Vector{{1.0, 0.0}}, 0.5, 3), 1.05 * 24.0, 1e-12);
}

TEST(ErrorNorm, PerOrder) {
  EXPECT_DOUBLE_EQ(error_norm(DerivTensor::from_vector(Vector{{3.0, 4.0}})), 5.0);
  EXPECT_DOUBLE_EQ(error_norm(DerivTensor::from_matrix(Matrix{{0, 2}, {0, 0}})), 2.0);
  DerivTensor t({2, 2, 2});
  t.for_each_index([](const std::vector<Index>& i, double& v) { v = (i[0] == 0 && i[1] == 1 && i[2] == 1) ? -7.0 : 0.0; });
  EXPECT_DOUBLE_EQ(error_norm(t), 7.0);
}

TEST(Sweep, SlopeOfAnExactPowerLaw) {
  const std::vector<double> d{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> e;
  for (double x : d) e.push_back(3.0 * x * x);
  EXPECT_NEAR(*fit_slope(d, e), 2.0, 1e-12);
  EXPECT_FALSE(fit_slope({0.1}, {1.0}).has_value());
}

TEST(Sweep, GeometricRadii) {
  const auto r = geometric_radii(0.1, 0.5, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_DOUBLE_EQ(r[3], 0.0125);
  EXPECT_THROW(geometric_radii(0.1, 1.5, 4), PreconditionError);
}

TEST(Sweep, ExactSchemesAreFlagged) {
  PolynomialFunction quad(2);
  quad.add({2, 0}, 1.0).add({1, 1}, -3.0).add({0, 2}, 0.5);
  // Dyadic point and radii keep every operation exact.
  const TestFunction f = from_polynomial("quad", quad, Vector{{0.25, 0.5}});
  const SweepReport r =
      convergence_order({SchemeKind::full_gsh_minimal, 2}, f, f.default_x0, geometric_radii(0.5, 0.5, 6));
  EXPECT_TRUE(r.exact);
  EXPECT_FALSE(r.slope.has_value());
  EXPECT_TRUE(r.all_pass());
}

TEST(Sweep, OrdersOnASmoothFunction) {
  const TestFunction f = expsin();
  const SweepReport fwd = convergence_order({SchemeKind::full_gsh_minimal, 3}, f, f.default_x0, geometric_radii());
  const SweepReport ctr = convergence_order({SchemeKind::full_gcsh_minimal, 3}, f, f.default_x0, geometric_radii());
  EXPECT_NEAR(*fwd.slope, 1.0, 0.15);
  EXPECT_NEAR(*ctr.slope, 2.0, 0.15);
  EXPECT_EQ(fwd.rows.size(), 8u);
  EXPECT_FALSE(fwd.rows.front().bound.has_value());
  for (std::size_t i = 1; i < fwd.rows.size(); ++i) EXPECT_LT(fwd.rows[i].error, fwd.rows[i - 1].error);
}

TEST(Sweep, RejectsBadRadiusSequences) {
  const TestFunction f = expsin();
  const SchemeSpec spec{SchemeKind::full_gsh_minimal, 3};
  EXPECT_THROW(convergence_order(spec, f, f.default_x0, {0.1, 0.05, 0.025}), PreconditionError);
  EXPECT_THROW(convergence_order(spec, f, f.default_x0, {0.1, 0.05, 0.01, 0.005}), PreconditionError);
  EXPECT_THROW(convergence_order(spec, f, f.default_x0, {0.1, 0.2, 0.4, 0.8}), PreconditionError);
  EXPECT_THROW(verify_bound(spec, f, f.default_x0, {0.1}), PreconditionError);
}

TEST(Sweep, BoundsHoldOnTheRegisteredQuartic) {
  const TestFunction f = *find_function("quartic3");
  for (auto kind : {SchemeKind::full_gsh_minimal, SchemeKind::full_gcsh_minimal, SchemeKind::off_diag}) {
    const SweepReport r = verify_bound({kind, 3}, f, f.default_x0, geometric_radii(0.1, 0.5, 5));
    EXPECT_TRUE(r.all_pass()) << r.scheme;
    for (const auto& row : r.rows) EXPECT_TRUE(row.bound.has_value());
  }
}

}  // namespace
