#pragma once

#include "tensor.hpp"

#include <map>
#include <random>
#include <vector>

namespace simplexd {

/// Multivariate polynomial as a map from exponent multi-index to coefficient.
/// Derivatives of any order are exact term-wise.
class PolynomialFunction {
 public:
  using Exponents = std::vector<int>;

  explicit PolynomialFunction(Index n) : n_(n) { require(n >= 1, "polynomial dimension must be positive"); }

  PolynomialFunction& add(const Exponents& e, double coeff) {
    require(static_cast<Index>(e.size()) == n_, "exponent vector length must equal the dimension");
    for (int p : e) require(p >= 0, "exponents must be nonnegative");
    terms_[e] += coeff;
    return *this;
  }

  Index dim() const { return n_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      if (c == 0.0) continue;
      int s = 0;
      for (int p : e) s += p;
      d = std::max(d, s);
    }
    return d;
  }

  double operator()(const Vector& x) const {
    require(x.size() == n_, "polynomial evaluated at a point of the wrong dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (Index i = 0; i < n_; ++i) t *= ipow(x(i), e[static_cast<std::size_t>(i)]);
      sum += t;
    }
    return sum;
  }

  /// Mixed partial derivative d^|alpha| f / dx^alpha at x.
  double partial(const Exponents& alpha, const Vector& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (Index i = 0; i < n_ && t != 0.0; ++i) {
        const int p = e[static_cast<std::size_t>(i)];
        const int a = alpha[static_cast<std::size_t>(i)];
        if (a > p) {
          t = 0.0;
          break;
        }
        for (int q = 0; q < a; ++q) t *= static_cast<double>(p - q);
        t *= ipow(x(i), p - a);
      }
      sum += t;
    }
    return sum;
  }

  /// Exact order-P derivative tensor at x.
  DerivTensor derivative(const Vector& x, Index order) const {
    require(order >= 1, "derivative order must be at least 1");
    DerivTensor out(std::vector<Index>(static_cast<std::size_t>(order), n_));
    std::map<Exponents, double> memo;
    out.for_each_index([&](const std::vector<Index>& idx, double& v) {
      Exponents alpha(static_cast<std::size_t>(n_), 0);
      for (auto i : idx) ++alpha[static_cast<std::size_t>(i)];
      auto it = memo.find(alpha);
      if (it == memo.end()) it = memo.emplace(alpha, partial(alpha, x)).first;
      v = it->second;
    });
    return out;
  }

  Vector gradient(const Vector& x) const { return derivative(x, 1).to_vector(); }
  Matrix hessian(const Vector& x) const { return derivative(x, 2).to_matrix(); }

  /// Every monomial of total degree <= max_degree with a uniform coefficient
  /// in [-1, 1].
  static PolynomialFunction random(Index n, int max_degree, std::mt19937_64& rng) {
    PolynomialFunction p(n);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    Exponents e(static_cast<std::size_t>(n), 0);
    enumerate(e, 0, max_degree, [&](const Exponents& ex) { p.add(ex, coeff(rng)); });
    return p;
  }

 private:
  static double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
  }

  template <typename Fn>
  static void enumerate(Exponents& e, std::size_t pos, int budget, Fn&& fn) {
    if (pos == e.size()) {
      fn(e);
      return;
    }
    for (int p = 0; p <= budget; ++p) {
      e[pos] = p;
      enumerate(e, pos + 1, budget - p, fn);
    }
    e[pos] = 0;
  }

  Index n_;
  std::map<Exponents, double> terms_;
};

/// -2 x1^4 + x2^4 + 10 x3^4.
inline PolynomialFunction quartic3() {
  PolynomialFunction p(3);
  p.add({4, 0, 0}, -2.0).add({0, 4, 0}, 1.0).add({0, 0, 4}, 10.0);
  return p;
}

}  // namespace simplexd
