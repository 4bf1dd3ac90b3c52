#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace simplexd;

namespace {

template <typename F>
auto live(F f, const Vector& x0, EvalCache& cache) {
  return LiveValues<F>(std::move(f), x0, cache);
}

Directions negated_columns(const Matrix& s) {
  std::vector<DirectionMatrix> ts;
  for (Index j = 0; j < s.cols(); ++j) ts.emplace_back(Matrix(-s.col(j)), "T" + std::to_string(j + 1));
  return {DirectionMatrix(s), DirectionFamily(std::move(ts))};
}

double quartic(const Vector& x) { return -2 * std::pow(x(0), 4) + std::pow(x(1), 4) + 10 * std::pow(x(2), 4); }

const Vector kX0{{2.0, -2.0, 5.0}};

TEST(WorkedExamples, RepeatedColumnDirections) {
  EvalCache cache;
  const auto values = live(quartic, kX0, cache);
  const Directions d = negated_columns(Matrix{{0.1, 0, 0}, {0, 0.1, 0.2}, {0, 0, 0}});
  const Matrix g = gcsh(values, d.outer, d.inner);
  Matrix want = Matrix::Zero(3, 3);
  want(0, 0) = -96.04;
  want(1, 1) = 48.068;
  EXPECT_LE((g - want).cwiseAbs().maxCoeff(), 5e-3);
  const Vector c = cshd(values, d.outer);
  EXPECT_NEAR(c(0), -96.04, 5e-3);
  EXPECT_NEAR(c(1), 48.0765, 5e-3);
  EXPECT_NEAR(c(2), 0.0, 5e-3);
}

TEST(WorkedExamples, NonDiagonalDirectionsGiveAsymmetricResult) {
  EvalCache cache;
  const auto values = live(quartic, kX0, cache);
  const Directions d = negated_columns(Matrix{{0.1, 0.1}, {0, 0.1}, {0, 0}});
  const Matrix g = gcsh(values, d.outer, d.inner);
  const Matrix want{{-96.04, 0, 0}, {72.03, -24.01, 0}, {0, 0, 0}};
  EXPECT_LE((g - want).cwiseAbs().maxCoeff(), 5e-3);
  EXPECT_GT(std::abs(g(1, 0) - g(0, 1)), 1.0);  // no symmetrization
  const Vector c = cshd(values, d.outer);
  EXPECT_LE((c - Vector{{-96.04, 48.02, 0.0}}).cwiseAbs().maxCoeff(), 5e-3);
}

TEST(Cshd, FullDiagonalDirections) {
  EvalCache cache;
  const auto values = live(quartic, kX0, cache);
  // Centered second differences of c x^4: 12 c x^2 + 2 c h^2.
  const Vector c = cshd(values, DirectionMatrix(0.1 * Matrix::Identity(3, 3)));
  EXPECT_NEAR(c(0), -96.04, 1e-9);
  EXPECT_NEAR(c(1), 48.02, 1e-9);
  EXPECT_NEAR(c(2), 3000.2, 1e-8);
}

TEST(Gsg, ExactOnAffineAfterProjection) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 5;
    const Vector g = oracle::random_matrix(n, 1, rng);
    const Matrix s = oracle::random_matrix(n, 1 + trial % 3, rng, 0.2);
    EvalCache cache;
    const auto values = live([&g](const Vector& x) { return 1.5 + g.dot(x); }, Vector::Ones(n), cache);
    const Matrix st = s.transpose();
    EXPECT_LE(oracle::rel_err(gsg(values, DirectionMatrix(s)), pinv(st) * st * g), 1e-10);
  }
}

TEST(Gsh, ExactOnQuadraticsWithSquareDirections) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 5;
    const oracle::Cubic f = oracle::random_cubic(n, rng, false);
    const Vector x0 = oracle::random_matrix(n, 1, rng);
    std::vector<DirectionMatrix> ts;
    for (Index j = 0; j < n; ++j) ts.emplace_back(oracle::near_identity(n, rng, 0.1));
    EvalCache cache;
    const auto values = live(f, x0, cache);
    EXPECT_LE(oracle::rel_err(gsh(values, DirectionMatrix(oracle::near_identity(n, rng, 0.1)),
                                  DirectionFamily(std::move(ts))),
                              f.hessian(x0)),
              1e-7);
  }
}

TEST(Gcsh, ExactOnCubicsAndSignSymmetric) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 5;
    const oracle::Cubic f = oracle::random_cubic(n, rng, true);
    const Vector x0 = oracle::random_matrix(n, 1, rng);
    const DirectionMatrix s(oracle::near_identity(n, rng, 0.1));
    std::vector<DirectionMatrix> ts;
    for (Index j = 0; j < n; ++j) ts.emplace_back(oracle::near_identity(n, rng, 0.1));
    const DirectionFamily t(std::move(ts));
    EvalCache cache;
    const auto values = live(f, x0, cache);
    const Matrix g = gcsh(values, s, t);
    EXPECT_LE(oracle::rel_err(g, f.hessian(x0)), 1e-7);
    EXPECT_EQ(g, gcsh(values, s.negated(), t.negated()));
  }
}

TEST(Gcsh, DiagonalMatchesCshdForPartialDiagonalDirections) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.02, 0.3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 6;
    const PolynomialFunction p = PolynomialFunction::random(n, 4, rng);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    const Index m = 1 + (trial / 6) % n;
    Matrix s = Matrix::Zero(n, m);
    for (Index j = 0; j < m; ++j) s(rows[static_cast<std::size_t>(j)], j) = (j % 2 ? -1 : 1) * u(rng);
    EvalCache cache;
    const auto values = live([&p](const Vector& x) { return p(x); }, oracle::random_matrix(n, 1, rng), cache);
    const Directions d = negated_columns(s);
    EXPECT_LE(oracle::rel_err(gcsh(values, d.outer, d.inner).diagonal(), cshd(values, d.outer)), 1e-10);
  }
}

TEST(Hvp, ExactOnQuadraticsAndCubics) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + trial % 6;
    const Vector v = oracle::random_matrix(n, 1, rng);
    const Vector x0 = oracle::random_matrix(n, 1, rng);
    const oracle::Cubic q = oracle::random_cubic(n, rng, false);
    const oracle::Cubic c = oracle::random_cubic(n, rng, true);
    EvalCache cq, cc;
    EXPECT_LE(oracle::rel_err(hvp(live(q, x0, cq), v, 0.05, false), q.hessian(x0) * v), 1e-7);
    EXPECT_LE(oracle::rel_err(hvp(live(c, x0, cc), v, 0.05, true), c.hessian(x0) * v), 1e-7);
  }
}

TEST(Hvp, RejectsZeroDirection) {
  EvalCache cache;
  const auto values = live([](const Vector& x) { return x.squaredNorm(); }, Vector::Zero(2), cache);
  EXPECT_THROW(hvp(values, Vector::Zero(2), 0.1, false), PreconditionError);
}

TEST(Estimators, DimensionMismatchIsRejected) {
  EvalCache cache;
  const auto values = live([](const Vector& x) { return x.sum(); }, Vector::Zero(3), cache);
  EXPECT_THROW(gsg(values, DirectionMatrix(Matrix::Identity(2, 2))), PreconditionError);
  EXPECT_THROW(gsh(values, DirectionMatrix(Matrix::Identity(3, 3)),
                   DirectionFamily::common(DirectionMatrix(Matrix::Identity(3, 3)), 2)),
               PreconditionError);
}

TEST(Tressian, ExactOnCubics) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 1 + trial % 4;
    const oracle::Cubic f = oracle::random_cubic(n, rng, true);
    const Vector x0 = oracle::random_matrix(n, 1, rng);
    EvalCache cache;
    const auto values = live(f, x0, cache);
    const DirectionMatrix s(oracle::near_identity(n, rng, 0.2), "S");
    const DirectionMatrix t(oracle::near_identity(n, rng, 0.2), "T");
    const DirectionMatrix u(oracle::near_identity(n, rng, 0.2), "U");
    const DerivTensor g = gst(values, s, t, u);
    double scale = 1.0;
    for (const auto& m : f.t) scale = std::max(scale, m.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) EXPECT_NEAR(g({i, j, k}), f.t[static_cast<std::size_t>(i)](j, k), 1e-6 * scale);
    const DerivTensor p3 = simplex_derivative_tensor(values, s, {t, u});
    EXPECT_LE((p3 - g).max_abs(), 1e-9 * scale);
  }
}

TEST(OrderP, LowOrdersCoincideWithDirectFormulas) {
  std::mt19937_64 rng(37);
  const Index n = 3;
  const oracle::Cubic f = oracle::random_cubic(n, rng, true);
  const Vector x0 = oracle::random_matrix(n, 1, rng);
  EvalCache cache;
  const auto values = live(f, x0, cache);
  const DirectionMatrix s(oracle::random_matrix(n, 4, rng, 0.1), "S");
  const DirectionMatrix t(oracle::random_matrix(n, 2, rng, 0.1), "T");
  EXPECT_TRUE(simplex_derivative_tensor(values, s, std::vector<DirectionMatrix>{}) ==
              DerivTensor::from_vector(gsg(values, s)));
  EXPECT_TRUE(simplex_derivative_tensor(values, s, std::vector<DirectionMatrix>{t}) ==
              DerivTensor::from_matrix(gsh(values, s, DirectionFamily::common(t, 4))));
}

TEST(OrderP, HeterogeneousFamiliesAreUnsupported) {
  EvalCache cache;
  const auto values = live([](const Vector& x) { return x.squaredNorm(); }, Vector::Zero(2), cache);
  const DirectionMatrix s(0.1 * Matrix::Identity(2, 2));
  const DirectionFamily mixed({DirectionMatrix(0.1 * Matrix::Identity(2, 2)), DirectionMatrix(0.2 * Matrix::Identity(2, 2))});
  EXPECT_THROW(simplex_derivative_tensor(values, s, std::vector<DirectionFamily>{mixed}), UnsupportedConfiguration);
  const DirectionFamily same = DirectionFamily::common(DirectionMatrix(0.1 * Matrix::Identity(2, 2)), 2);
  EXPECT_NO_THROW(simplex_derivative_tensor(values, s, std::vector<DirectionFamily>{same}));
}

TEST(OrderP, RecoversHigherDerivativesOfMonomials) {
  const Vector x0{{0.3, 1.1}};
  const double h = 1e-3;
  const DirectionMatrix s(h * Matrix::Identity(2, 2));
  EvalCache c3, c4;
  const double d3 = simplex_derivative_tensor(live([](const Vector& x) { return std::pow(x(0), 3); }, x0, c3), s,
                                              {s, s})({0, 0, 0});
  EXPECT_NEAR(d3, 6.0, 1e-2);
  const double d4 = simplex_derivative_tensor(live([](const Vector& x) { return std::pow(x(0), 4); }, x0, c4), s,
                                              {s, s, s})({0, 0, 0, 0});
  EXPECT_NEAR(d4, 24.0, 5e-2);
  EvalCache c5;
  EXPECT_THROW(simplex_derivative_tensor(live([](const Vector& x) { return x(0); }, x0, c5), s, {s, s, s, s}),
               PreconditionError);
}

TEST(Schemes, ApproximateReportsPlanSize) {
  const SchemeSpec spec{SchemeKind::full_gcsh_minimal, 3, 0.05};
  const auto r = approximate([](const Vector& x) { return x.prod(); }, Vector{{1.0, 2.0, 3.0}}, spec);
  EXPECT_EQ(r.evaluations, 13u);
  EXPECT_EQ(r.plan.scheme, "gcsh-minimal");
  const Matrix want{{0, 3, 2}, {3, 0, 1}, {2, 1, 0}};
  EXPECT_LE(oracle::rel_err(r.value.to_matrix(), want), 1e-7);
}

}  // namespace
