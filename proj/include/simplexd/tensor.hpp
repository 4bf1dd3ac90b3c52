#pragma once

#include "linalg.hpp"

#include <functional>
#include <numeric>
#include <vector>

namespace simplexd {

/// Dense order-P tensor stored row-major (last index fastest).
///
/// For order 3 the floors F_i (first index fixed) and layers L_k (last index
/// fixed) are strided views of the same storage:
///   [F_i]_{j,k} = M_{i,j,k},  [L_k]_{i,j} = M_{i,j,k}.
class DerivTensor {
 public:
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Strided = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
  using View = Eigen::Map<RowMajor, 0, Strided>;
  using ConstView = Eigen::Map<const RowMajor, 0, Strided>;

  DerivTensor() = default;

  explicit DerivTensor(std::vector<Index> dims) : dims_(std::move(dims)) {
    require(!dims_.empty(), "tensor order must be at least 1");
    for (auto d : dims_) require(d >= 1, "tensor dimensions must be positive");
    data_.assign(static_cast<std::size_t>(product(dims_)), 0.0);
  }

  static DerivTensor from_vector(const Vector& v) {
    DerivTensor t({v.size()});
    for (Index i = 0; i < v.size(); ++i) t.data_[static_cast<std::size_t>(i)] = v(i);
    return t;
  }

  static DerivTensor from_matrix(const Matrix& m) {
    DerivTensor t({m.rows(), m.cols()});
    Eigen::Map<RowMajor>(t.data_.data(), m.rows(), m.cols()) = m;
    return t;
  }

  /// Inverse of unfold(): rows index the first axis.
  static DerivTensor fold(const Matrix& unfolded, std::vector<Index> dims) {
    DerivTensor t(std::move(dims));
    require(unfolded.rows() == t.dims_.front() && unfolded.cols() * unfolded.rows() == t.size(),
            "fold: shape mismatch");
    Eigen::Map<RowMajor>(t.data_.data(), unfolded.rows(), unfolded.cols()) = unfolded;
    return t;
  }

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim(Index axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  Index size() const { return static_cast<Index>(data_.size()); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double& operator()(const std::vector<Index>& idx) { return data_[offset(idx)]; }
  double operator()(const std::vector<Index>& idx) const { return data_[offset(idx)]; }

  /// Mode-1 unfolding: dims[0] x (product of the remaining dims).
  Matrix unfold() const {
    const Index rows = dims_.front();
    return Eigen::Map<const RowMajor>(data_.data(), rows, size() / rows);
  }

  Vector to_vector() const {
    require(order() == 1, "to_vector needs an order-1 tensor");
    return Eigen::Map<const Vector>(data_.data(), size());
  }

  Matrix to_matrix() const {
    require(order() == 2, "to_matrix needs an order-2 tensor");
    return unfold();
  }

  ConstView floor(Index i) const {
    require_order3();
    const Index c = dims_[1], p = dims_[2];
    return ConstView(data_.data() + i * c * p, c, p, Strided(p, 1));
  }
  View floor(Index i) {
    require_order3();
    const Index c = dims_[1], p = dims_[2];
    return View(data_.data() + i * c * p, c, p, Strided(p, 1));
  }
  ConstView layer(Index k) const {
    require_order3();
    const Index r = dims_[0], c = dims_[1], p = dims_[2];
    return ConstView(data_.data() + k, r, c, Strided(c * p, p));
  }
  View layer(Index k) {
    require_order3();
    const Index r = dims_[0], c = dims_[1], p = dims_[2];
    return View(data_.data() + k, r, c, Strided(c * p, p));
  }

  /// Index reversal: [M^T]_{i, j_1, ..., j_{P-1}} = M_{j_{P-1}, ..., j_1, i}.
  DerivTensor transposed() const {
    std::vector<Index> rdims(dims_.rbegin(), dims_.rend());
    DerivTensor out(rdims);
    std::vector<Index> idx(dims_.size(), 0);
    std::vector<Index> ridx(dims_.size());
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      std::copy(idx.rbegin(), idx.rend(), ridx.begin());
      out(ridx) = data_[flat];
      increment(idx);
    }
    return out;
  }

  DerivTensor& operator-=(const DerivTensor& o) {
    require(dims_ == o.dims_, "tensor subtraction: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  friend DerivTensor operator-(DerivTensor a, const DerivTensor& b) { return a -= b; }

  friend bool operator==(const DerivTensor& a, const DerivTensor& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  /// Visits every multi-index in storage order.
  void for_each_index(const std::function<void(const std::vector<Index>&, double&)>& fn) {
    std::vector<Index> idx(dims_.size(), 0);
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      fn(idx, data_[flat]);
      increment(idx);
    }
  }

 private:
  static Index product(const std::vector<Index>& d) {
    return std::accumulate(d.begin(), d.end(), Index{1}, std::multiplies<>());
  }

  std::size_t offset(const std::vector<Index>& idx) const {
    require(idx.size() == dims_.size(), "tensor index has the wrong order");
    Index off = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      require(idx[a] >= 0 && idx[a] < dims_[a], "tensor index out of range");
      off = off * dims_[a] + idx[a];
    }
    return static_cast<std::size_t>(off);
  }

  void increment(std::vector<Index>& idx) const {
    for (std::size_t a = dims_.size(); a-- > 0;) {
      if (++idx[a] < dims_[a]) return;
      idx[a] = 0;
    }
  }

  void require_order3() const { require(order() == 3, "floor/layer views need an order-3 tensor"); }

  std::vector<Index> dims_;
  std::vector<double> data_;
};

/// A (x) M: contracts the columns of A with the first axis of M. For order 3
/// this is the layerwise product, layer k of the result being A * L_k.
inline DerivTensor tensor_mul(const Matrix& a, const DerivTensor& m) {
  require(a.cols() == m.dim(0), "tensor_mul: A columns must equal the first tensor dimension");
  std::vector<Index> dims = m.dims();
  dims.front() = a.rows();
  return DerivTensor::fold(a * m.unfold(), std::move(dims));
}

}  // namespace simplexd
