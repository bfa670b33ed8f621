// Copyright 2026 The pepsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex tensors: contraction, SVD splitting and isometry completion.
//
// Storage is row-major over `shape()`. Contractions go through
// permute -> reshape -> matrix multiply.

#ifndef PEPSQ_TENSOR_HPP
#define PEPSQ_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pepsq/common.hpp"

namespace pepsq {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_volume(std::span<const std::size_t> shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

class Tensor {
 public:
  /// Rank-0 tensor holding 0.
  Tensor() : data_(1, Complex{0.0, 0.0}) {}

  explicit Tensor(Shape shape)
      : shape_(std::move(shape)), data_(shape_volume(shape_), Complex{0.0, 0.0}) {
    check_shape();
  }

  Tensor(Shape shape, std::vector<Complex> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape();
    if (data_.size() != shape_volume(shape_)) {
      throw InvalidArgument("Tensor: data length " + std::to_string(data_.size()) +
                            " does not match shape volume " +
                            std::to_string(shape_volume(shape_)));
    }
  }

  /// Rank-2 tensor with the entries of `m`.
  static Tensor from_matrix(const Matrix &m) {
    Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        t.data_[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
      }
    }
    return t;
  }

  static Tensor from_vector(const std::vector<Complex> &v) { return Tensor({v.size()}, v); }

  const Shape &shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  Complex &at(std::span<const std::size_t> index) { return data_[offset(index)]; }
  const Complex &at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  Complex &at(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  const Complex &at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Same data viewed under a new shape of equal volume.
  Tensor reshaped(Shape shape) const {
    if (shape_volume(shape) != data_.size()) {
      throw InvalidArgument("Tensor::reshaped: volume mismatch");
    }
    return Tensor(std::move(shape), data_);
  }

  /// Axis `k` of the result is axis `perm[k]` of this tensor.
  Tensor permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != rank()) {
      throw InvalidArgument("Tensor::permuted: permutation has wrong length");
    }
    std::vector<bool> seen(rank(), false);
    for (std::size_t p : perm) {
      if (p >= rank() || seen[p]) {
        throw InvalidArgument("Tensor::permuted: not a permutation");
      }
      seen[p] = true;
    }
    Shape out_shape(rank());
    for (std::size_t k = 0; k < rank(); ++k) {
      out_shape[k] = shape_[perm[k]];
    }
    const std::vector<std::size_t> in_strides = strides();
    std::vector<std::size_t> stride_of_out(rank());
    for (std::size_t k = 0; k < rank(); ++k) {
      stride_of_out[k] = in_strides[perm[k]];
    }
    Tensor out(out_shape);
    std::vector<std::size_t> counter(rank(), 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < out.data_.size(); ++dst) {
      out.data_[dst] = data_[src];
      // Odometer increment over the output index, tracking the source offset.
      for (std::size_t k = rank(); k-- > 0;) {
        if (++counter[k] < out_shape[k]) {
          src += stride_of_out[k];
          break;
        }
        src -= stride_of_out[k] * (out_shape[k] - 1);
        counter[k] = 0;
      }
    }
    return out;
  }

  Tensor permuted(std::initializer_list<std::size_t> perm) const {
    return permuted(std::span<const std::size_t>(perm.begin(), perm.size()));
  }

  /// Rows are the first `row_axes` axes flattened, columns the rest.
  Matrix to_matrix(std::size_t row_axes) const {
    if (row_axes > rank()) {
      throw InvalidArgument("Tensor::to_matrix: too many row axes");
    }
    const std::size_t rows = shape_volume(std::span(shape_).first(row_axes));
    const std::size_t cols = data_.size() / std::max<std::size_t>(rows, 1);
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data_[r * cols + c];
      }
    }
    return m;
  }

  double norm() const {
    double s = 0.0;
    for (const Complex &z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  Tensor scaled(Complex factor) const {
    Tensor out = *this;
    for (Complex &z : out.data_) z *= factor;
    return out;
  }

  Tensor conj() const {
    Tensor out = *this;
    for (Complex &z : out.data_) z = std::conj(z);
    return out;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex &z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(rank(), 1);
    for (std::size_t k = rank(); k-- > 1;) {
      s[k - 1] = s[k] * shape_[k];
    }
    return s;
  }

 private:
  void check_shape() const {
    for (std::size_t d : shape_) {
      if (d == 0) throw InvalidArgument("Tensor: dimensions must be positive");
    }
  }

  std::size_t offset(std::span<const std::size_t> index) const {
    if (index.size() != rank()) {
      throw InvalidArgument("Tensor::at: index has wrong rank");
    }
    std::size_t off = 0;
    for (std::size_t k = 0; k < rank(); ++k) {
      if (index[k] >= shape_[k]) throw InvalidArgument("Tensor::at: index out of range");
      off = off * shape_[k] + index[k];
    }
    return off;
  }

  Shape shape_;
  std::vector<Complex> data_;
};

inline double max_abs_diff(const Tensor &a, const Tensor &b) {
  if (a.shape() != b.shape()) throw InvalidArgument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

using AxisPair = std::pair<std::size_t, std::size_t>;

/// Sums over each (axis-of-a, axis-of-b) pair. Result axes: free axes of `a`
/// in order, then free axes of `b` in order.
inline Tensor contract(const Tensor &a, const Tensor &b, std::span<const AxisPair> pairs) {
  std::vector<bool> used_a(a.rank(), false);
  std::vector<bool> used_b(b.rank(), false);
  for (const auto &[ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank()) {
      throw InvalidArgument("contract: axis out of range");
    }
    if (used_a[ia] || used_b[ib]) throw InvalidArgument("contract: repeated axis");
    if (a.dim(ia) != b.dim(ib)) {
      throw InvalidArgument("contract: dimension mismatch on axes (" + std::to_string(ia) +
                            ", " + std::to_string(ib) + ")");
    }
    used_a[ia] = used_b[ib] = true;
  }
  std::vector<std::size_t> perm_a;
  std::vector<std::size_t> perm_b;
  Shape out_shape;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!used_a[k]) {
      perm_a.push_back(k);
      out_shape.push_back(a.dim(k));
    }
  }
  for (const auto &p : pairs) perm_a.push_back(p.first);
  for (const auto &p : pairs) perm_b.push_back(p.second);
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!used_b[k]) {
      perm_b.push_back(k);
      out_shape.push_back(b.dim(k));
    }
  }
  const std::size_t free_a = a.rank() - pairs.size();
  const Matrix ma = a.permuted(perm_a).to_matrix(free_a);
  const Matrix mb = b.permuted(perm_b).to_matrix(pairs.size());
  const Matrix prod = ma * mb;
  Tensor flat = Tensor::from_matrix(prod);
  return flat.reshaped(out_shape);
}

inline Tensor contract(const Tensor &a, const Tensor &b, std::initializer_list<AxisPair> pairs) {
  return contract(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

/// Outer product: all axes of `a` followed by all axes of `b`.
inline Tensor outer(const Tensor &a, const Tensor &b) {
  return contract(a, b, std::span<const AxisPair>{});
}

struct SvdSplit {
  /// Left axes (in the order requested) followed by the new bond axis.
  Tensor left;
  /// Descending, length equals the bond dimension.
  RealVector singular_values;
  /// New bond axis followed by the remaining axes in their original order.
  Tensor right;
  /// l2 norm of the singular values that were dropped.
  double discarded_weight = 0.0;
};

/// Splits `t` into left * diag(s) * right across the bipartition given by
/// `left_axes`, keeping at most `max_rank` singular values.
inline SvdSplit svd_split(const Tensor &t, std::span<const std::size_t> left_axes,
                          std::size_t max_rank) {
  if (left_axes.empty() || left_axes.size() >= t.rank()) {
    throw InvalidArgument("svd_split: left_axes must be a nonempty proper subset");
  }
  if (max_rank < 1) throw InvalidArgument("svd_split: max_rank must be >= 1");
  std::vector<bool> is_left(t.rank(), false);
  for (std::size_t ax : left_axes) {
    if (ax >= t.rank() || is_left[ax]) throw InvalidArgument("svd_split: bad left axis");
    is_left[ax] = true;
  }
  std::vector<std::size_t> perm(left_axes.begin(), left_axes.end());
  Shape left_shape;
  Shape right_shape;
  for (std::size_t ax : left_axes) left_shape.push_back(t.dim(ax));
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (!is_left[k]) {
      perm.push_back(k);
      right_shape.push_back(t.dim(k));
    }
  }
  const Matrix m = t.permuted(perm).to_matrix(left_axes.size());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector &s = svd.singularValues();
  const auto full_rank = static_cast<std::size_t>(s.size());
  const std::size_t keep = std::min(max_rank, full_rank);

  SvdSplit out;
  out.singular_values = s.head(static_cast<Eigen::Index>(keep));
  out.discarded_weight = s.tail(static_cast<Eigen::Index>(full_rank - keep)).norm();

  const Matrix u = svd.matrixU().leftCols(static_cast<Eigen::Index>(keep));
  const Matrix vh = svd.matrixV().leftCols(static_cast<Eigen::Index>(keep)).adjoint();
  Shape ls = left_shape;
  ls.push_back(keep);
  Shape rs{keep};
  rs.insert(rs.end(), right_shape.begin(), right_shape.end());
  out.left = Tensor::from_matrix(u).reshaped(ls);
  out.right = Tensor::from_matrix(vh).reshaped(rs);
  return out;
}

inline SvdSplit svd_split(const Tensor &t, std::initializer_list<std::size_t> left_axes,
                          std::size_t max_rank) {
  return svd_split(t, std::span<const std::size_t>(left_axes.begin(), left_axes.size()),
                   max_rank);
}

/// Extends an isometry to a square unitary. The first `v.cols()` columns are
/// copied; the rest come from Gram-Schmidt over e_0, e_1, ... in index order,
/// skipping candidates whose residual falls below the dependence threshold.
inline Matrix complete_isometry(const Matrix &v) {
  if (v.cols() > v.rows()) {
    throw InvalidArgument("complete_isometry: more columns than rows");
  }
  const double residual = isometry_residual(v);
  if (residual > tol::kStructural) {
    throw InvariantViolation("complete_isometry: input is not an isometry (residual " +
                             std::to_string(residual) + ")");
  }
  const Eigen::Index n = v.rows();
  Matrix u(n, n);
  u.leftCols(v.cols()) = v;
  Eigen::Index filled = v.cols();
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    Vector cand = Vector::Zero(n);
    cand(e) = 1.0;
    // Two passes keep the result orthogonal to machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < filled; ++c) {
        cand -= u.col(c) * u.col(c).dot(cand);
      }
    }
    const double nrm = cand.norm();
    if (nrm < tol::kLinearDependence) continue;
    u.col(filled++) = cand / nrm;
  }
  if (filled != n) {
    throw InvariantViolation("complete_isometry: failed to complete basis");
  }
  return u;
}

}  // namespace pepsq

#endif  // PEPSQ_TENSOR_HPP
