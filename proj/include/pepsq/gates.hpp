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

// Parameterized gate blocks and the unitary <-> tensor conversions.
//
// Multi-qubit matrices put gate position 0 on the most significant bit, so
// kron(A, B) acts with A on position 0. Matrices are indexed [out, in].

#ifndef PEPSQ_GATES_HPP
#define PEPSQ_GATES_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/tensor.hpp"

namespace pepsq {

inline Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix u3(double theta, double phi, double lam) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Matrix m(2, 2);
  m << c, -std::polar(1.0, lam) * s,
       std::polar(1.0, phi) * s, std::polar(1.0, phi + lam) * c;
  return m;
}

/// exp(-i pi/4 X (x) X)
inline Matrix ms_gate() {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex mi{0.0, -r};
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = r;
  m(0, 3) = m(1, 2) = m(2, 1) = m(3, 0) = mi;
  return m;
}

inline constexpr std::size_t kU3Params = 3;
inline constexpr std::size_t kTwoQubitBlockParams = 12;
inline constexpr std::size_t kThreeQubitBlockParams = 24;

/// (U3 out0 (x) U3 out1) * MS * (U3 in0 (x) U3 in1). Parameters are the four
/// U3 triples in the order in0, in1, out0, out1.
inline Matrix two_qubit_block(std::span<const double> p) {
  if (p.size() != kTwoQubitBlockParams) {
    throw InvalidArgument("two_qubit_block: expected 12 parameters, got " + std::to_string(p.size()));
  }
  const Matrix in = kron(u3(p[0], p[1], p[2]), u3(p[3], p[4], p[5]));
  const Matrix out = kron(u3(p[6], p[7], p[8]), u3(p[9], p[10], p[11]));
  return out * ms_gate() * in;
}

/// (I (x) B2) * (B1 (x) I): B1 on positions (0,1) from the first 12
/// parameters, then B2 on (1,2) from the last 12.
inline Matrix three_qubit_block(std::span<const double> p) {
  if (p.size() != kThreeQubitBlockParams) {
    throw InvalidArgument("three_qubit_block: expected 24 parameters, got " + std::to_string(p.size()));
  }
  const Matrix b1 = two_qubit_block(p.first(kTwoQubitBlockParams));
  const Matrix b2 = two_qubit_block(p.subspan(kTwoQubitBlockParams));
  return kron(identity(2), b2) * kron(b1, identity(2));
}

enum class GateKind { U3, MS, TwoQubitBlock, ThreeQubitBlock, CustomUnitary };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::U3: return "U3";
    case GateKind::MS: return "MS";
    case GateKind::TwoQubitBlock: return "TwoQubitBlock";
    case GateKind::ThreeQubitBlock: return "ThreeQubitBlock";
    case GateKind::CustomUnitary: return "CustomUnitary";
  }
  return "?";
}

inline GateKind gate_kind_from_string(const std::string &s) {
  for (GateKind k : {GateKind::U3, GateKind::MS, GateKind::TwoQubitBlock, GateKind::ThreeQubitBlock,
                     GateKind::CustomUnitary}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown gate kind '" + s + "'");
}

inline std::size_t param_count(GateKind k) {
  switch (k) {
    case GateKind::U3: return kU3Params;
    case GateKind::MS: return 0;
    case GateKind::TwoQubitBlock: return kTwoQubitBlockParams;
    case GateKind::ThreeQubitBlock: return kThreeQubitBlockParams;
    case GateKind::CustomUnitary: return 0;
  }
  return 0;
}

inline std::size_t qubit_arity(GateKind k) {
  switch (k) {
    case GateKind::U3: return 1;
    case GateKind::MS: return 2;
    case GateKind::TwoQubitBlock: return 2;
    case GateKind::ThreeQubitBlock: return 3;
    case GateKind::CustomUnitary: return 0;  // from the matrix
  }
  return 0;
}

/// One gate application. `qubits[k]` is the register index at gate position k.
struct GateSpec {
  GateKind kind = GateKind::U3;
  std::vector<double> params;
  std::vector<int> qubits;
  /// Only for CustomUnitary.
  Matrix unitary;

  void validate() const {
    if (kind != GateKind::CustomUnitary && params.size() != param_count(kind)) {
      throw InvalidArgument("GateSpec: " + to_string(kind) + " takes " +
                            std::to_string(param_count(kind)) + " parameters");
    }
    const std::set<int> distinct(qubits.begin(), qubits.end());
    if (distinct.size() != qubits.size()) throw InvalidArgument("GateSpec: repeated qubit");
    const std::size_t arity =
        kind == GateKind::CustomUnitary ? 0 : qubit_arity(kind);
    if (kind == GateKind::CustomUnitary) {
      if (unitary.rows() != (Eigen::Index{1} << qubits.size()) || !is_unitary(unitary)) {
        throw InvalidArgument("GateSpec: custom matrix must be a unitary on its qubits");
      }
    } else if (qubits.size() != arity) {
      throw InvalidArgument("GateSpec: " + to_string(kind) + " acts on " + std::to_string(arity) +
                            " qubits");
    }
  }

  Matrix matrix() const {
    validate();
    switch (kind) {
      case GateKind::U3: return u3(params[0], params[1], params[2]);
      case GateKind::MS: return ms_gate();
      case GateKind::TwoQubitBlock: return two_qubit_block(params);
      case GateKind::ThreeQubitBlock: return three_qubit_block(params);
      case GateKind::CustomUnitary: return unitary;
    }
    return {};
  }
};

inline int qubits_of(const Matrix &u) {
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  if ((Eigen::Index{1} << n) != u.rows() || u.rows() != u.cols()) {
    throw InvalidArgument("expected a square 2^n x 2^n matrix");
  }
  return n;
}

/// Clamps the listed input qubits to |0>. The tensor's axes are the free
/// input qubits (ascending) followed by every output qubit, each of
/// dimension 2. Viewed as a map from free inputs to outputs it is an isometry.
inline Tensor unitary_to_tensor(const Matrix &u, std::span<const int> fixed_inputs) {
  const int n = qubits_of(u);
  if (!is_unitary(u)) throw InvariantViolation("unitary_to_tensor: matrix is not unitary");
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  for (int q : fixed_inputs) {
    if (q < 0 || q >= n || fixed[static_cast<std::size_t>(q)]) {
      throw InvalidArgument("unitary_to_tensor: bad fixed input qubit");
    }
    fixed[static_cast<std::size_t>(q)] = true;
  }
  std::vector<int> free;
  for (int q = 0; q < n; ++q) {
    if (!fixed[static_cast<std::size_t>(q)]) free.push_back(q);
  }
  const auto n_free = free.size();
  Shape shape(n_free + static_cast<std::size_t>(n), 2);
  Tensor t(shape);
  const std::size_t out_dim = std::size_t{1} << n;
  for (std::size_t f = 0; f < (std::size_t{1} << n_free); ++f) {
    std::size_t col = 0;
    for (std::size_t k = 0; k < n_free; ++k) {
      if ((f >> (n_free - 1 - k)) & 1U) col |= std::size_t{1} << (n - 1 - free[k]);
    }
    for (std::size_t row = 0; row < out_dim; ++row) {
      t.data()[f * out_dim + row] = u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
  }
  return t;
}

inline Tensor unitary_to_tensor(const Matrix &u, std::initializer_list<int> fixed_inputs) {
  return unitary_to_tensor(u, std::span<const int>(fixed_inputs.begin(), fixed_inputs.size()));
}

/// Site tensors of a row realized by one large unitary.
struct RowSplit {
  /// One per gate position; axes [physical, up, left, right]. `up` has
  /// dimension 1 for a clamped input; `left`/`right` have dimension 1 at the
  /// row ends.
  std::vector<Tensor> sites;
  /// Singular values kept at each of the n - 1 cuts.
  std::vector<RealVector> singular_values;
  double reconstruction_error = 0.0;
};

namespace detail {

// Clamped map as a tensor with axes (out0, in0, out1, in1, ...), where a
// clamped input has dimension 1.
inline Tensor interleaved_row_map(const Matrix &u, std::span<const int> fixed_inputs) {
  const int n = qubits_of(u);
  const Tensor t = unitary_to_tensor(u, fixed_inputs);
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  for (int q : fixed_inputs) fixed[static_cast<std::size_t>(q)] = true;
  // Give clamped inputs a dimension-1 axis so every site has an `in` axis.
  Shape with_dummies;
  std::vector<std::size_t> in_axis(static_cast<std::size_t>(n));
  std::size_t ax = 0;
  for (int q = 0; q < n; ++q) {
    in_axis[static_cast<std::size_t>(q)] = ax++;
    with_dummies.push_back(fixed[static_cast<std::size_t>(q)] ? 1 : 2);
  }
  for (int q = 0; q < n; ++q) with_dummies.push_back(2);
  const Tensor padded = t.reshaped(with_dummies);
  std::vector<std::size_t> perm;
  for (int q = 0; q < n; ++q) {
    perm.push_back(static_cast<std::size_t>(n + q));
    perm.push_back(in_axis[static_cast<std::size_t>(q)]);
  }
  return padded.permuted(perm);
}

}  // namespace detail

/// Recontracts row-split site tensors into a map with axes
/// (phys0, up0, phys1, up1, ...).
inline Tensor recontract_row(const std::vector<Tensor> &sites) {
  if (sites.empty()) throw InvalidArgument("recontract_row: empty row");
  // [p0, u0, l0(=1), r0] -> drop the left dummy.
  Tensor acc = sites.front().reshaped({sites.front().dim(0), sites.front().dim(1), sites.front().dim(3)});
  for (std::size_t k = 1; k < sites.size(); ++k) {
    const std::size_t last = acc.rank() - 1;
    acc = contract(acc, sites[k], {{last, 2}});
    // acc axes now: ..., p_k, u_k, r_k
  }
  Shape s(acc.shape().begin(), acc.shape().end() - 1);
  return acc.reshaped(s);
}

/// Splits a row unitary into per-site tensors by successive SVDs, keeping the
/// exact numerical rank at each cut. Gate position k is the site k of the
/// row: input k is its upper bond, output k its physical index.
inline RowSplit split_row_unitary(const Matrix &u, std::span<const int> fixed_inputs) {
  const int n = qubits_of(u);
  if (n < 1) throw InvalidArgument("split_row_unitary: need at least one site");
  const Tensor map = detail::interleaved_row_map(u, fixed_inputs);
  RowSplit out;
  Tensor rest = map.reshaped([&] {
    Shape s{1};
    s.insert(s.end(), map.shape().begin(), map.shape().end());
    return s;
  }());  // leading left-bond axis of dimension 1
  for (int k = 0; k + 1 < n; ++k) {
    // rest axes: [left, p_k, u_k, p_{k+1}, u_{k+1}, ...]
    const SvdSplit full = svd_split(rest, {0, 1, 2}, rest.size());
    const RealVector &s = full.singular_values;
    std::size_t rank = 0;
    const double cutoff = 1e-12 * std::max(1.0, s.size() ? s(0) : 0.0);
    while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > cutoff) ++rank;
    rank = std::max<std::size_t>(rank, 1);
    const SvdSplit cut = svd_split(rest, {0, 1, 2}, rank);
    // left: [l, p, u, b] -> [p, u, l, b]
    out.sites.push_back(cut.left.permuted({1, 2, 0, 3}));
    out.singular_values.push_back(cut.singular_values);
    Tensor r = cut.right;
    const std::size_t bond = r.dim(0);
    const std::size_t tail = r.size() / bond;
    for (std::size_t b = 0; b < bond; ++b) {
      for (std::size_t j = 0; j < tail; ++j) r.data()[b * tail + j] *= cut.singular_values(static_cast<Eigen::Index>(b));
    }
    rest = r;
  }
  // Last site: [l, p, u] -> [p, u, l, r=1]
  const Tensor last = rest.permuted({1, 2, 0});
  Shape ls = last.shape();
  ls.push_back(1);
  out.sites.push_back(last.reshaped(ls));

  out.reconstruction_error = max_abs_diff(recontract_row(out.sites), map);
  if (out.reconstruction_error > 1e-9) {
    throw InvariantViolation("split_row_unitary: reconstruction error " +
                             std::to_string(out.reconstruction_error));
  }
  return out;
}

/// Final 3-site row of the 3x3 layout.
inline RowSplit split_final_row(const Matrix &u, std::span<const int> fixed_inputs = {}) {
  if (u.rows() != 8) throw InvalidArgument("split_final_row: expected an 8x8 unitary");
  if (!is_unitary(u)) throw InvariantViolation("split_final_row: matrix is not unitary");
  return split_row_unitary(u, fixed_inputs);
}

}  // namespace pepsq

#endif  // PEPSQ_GATES_HPP
