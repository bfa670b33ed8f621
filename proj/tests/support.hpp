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

// Random generators and slow reference implementations shared by the tests.
// Nothing here calls the library routine it is used to check.

#ifndef PEPSQ_TESTS_SUPPORT_HPP
#define PEPSQ_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pepsq/common.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/peps.hpp"
#include "pepsq/tensor.hpp"

namespace pepsq::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex complex_normal() { return {normal(), normal()}; }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    }
    return m;
  }

  // Haar-distributed via QR with the phases of R's diagonal divided out.
  Matrix unitary(Eigen::Index n) {
    const Matrix z = matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
    return q;
  }

  Matrix isometry(Eigen::Index rows, Eigen::Index cols) { return unitary(rows).leftCols(cols); }

  Tensor tensor(const Shape &shape) {
    Tensor t(shape);
    for (Complex &z : t.data()) z = complex_normal();
    return t;
  }

  StateVector state(int n) {
    std::vector<Complex> a(std::size_t{1} << n);
    for (Complex &z : a) z = complex_normal();
    return StateVector(n, std::move(a)).normalized();
  }

  PauliString pauli_string(int n_sites, double identity_weight = 0.25) {
    std::map<int, Pauli> ops;
    for (int s = 1; s <= n_sites; ++s) {
      if (uniform(0.0, 1.0) < identity_weight) continue;
      ops[s] = static_cast<Pauli>(integer(1, 3));
    }
    return PauliString(ops);
  }

  PepsNetwork peps(int rows, int cols, std::size_t chi) {
    std::vector<Tensor> ts;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        Shape s{2};
        for (std::size_t k = 0; k < PepsNetwork::bonds_at(rows, cols, r, c).size(); ++k) s.push_back(chi);
        ts.push_back(tensor(s));
      }
    }
    return PepsNetwork(rows, cols, chi, std::move(ts));
  }

  std::mt19937_64 &engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Matrix pauli_2x2(Pauli p) {
  Matrix m = Matrix::Zero(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Matrix kron2(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// Kronecker chain with site 1 leftmost.
inline Matrix dense_pauli(const PauliString &s, int n) {
  Matrix m = Matrix::Identity(1, 1);
  for (int site = 1; site <= n; ++site) m = kron2(m, pauli_2x2(s.at(site)));
  return s.phase() * m;
}

inline Matrix dense_operator(const OperatorSum &op, int n) {
  Matrix h = Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto &t : op.terms()) h += t.coefficient * dense_pauli(t.string, n);
  return h;
}

// Multi-index helpers over row-major shapes.
inline std::vector<std::size_t> unravel(std::size_t flat, const Shape &shape) {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    idx[k] = flat % shape[k];
    flat /= shape[k];
  }
  return idx;
}

inline std::size_t ravel(const std::vector<std::size_t> &idx, const Shape &shape) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) flat = flat * shape[k] + idx[k];
  return flat;
}

// Contraction by explicit summation: loops over every entry of a and b.
inline Tensor naive_contract(const Tensor &a, const Tensor &b, const std::vector<std::pair<std::size_t, std::size_t>> &pairs) {
  std::vector<bool> a_summed(a.rank(), false);
  std::vector<bool> b_summed(b.rank(), false);
  for (const auto &[i, j] : pairs) {
    a_summed[i] = true;
    b_summed[j] = true;
  }
  Shape out_shape;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a_summed[k]) out_shape.push_back(a.dim(k));
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!b_summed[k]) out_shape.push_back(b.dim(k));
  }
  Tensor out(out_shape);
  for (std::size_t fa = 0; fa < a.size(); ++fa) {
    const auto ia = unravel(fa, a.shape());
    for (std::size_t fb = 0; fb < b.size(); ++fb) {
      const auto ib = unravel(fb, b.shape());
      bool match = true;
      for (const auto &[i, j] : pairs) match = match && ia[i] == ib[j];
      if (!match) continue;
      std::vector<std::size_t> io;
      for (std::size_t k = 0; k < a.rank(); ++k) {
        if (!a_summed[k]) io.push_back(ia[k]);
      }
      for (std::size_t k = 0; k < b.rank(); ++k) {
        if (!b_summed[k]) io.push_back(ib[k]);
      }
      out.data()[out_shape.empty() ? 0 : ravel(io, out_shape)] += a.data()[fa] * b.data()[fb];
    }
  }
  return out;
}

// Amplitudes of a PEPS by summing over every joint bond configuration.
inline StateVector naive_peps_state(const PepsNetwork &p) {
  const int rows = p.rows();
  const int cols = p.cols();
  // Enumerate bonds: horizontal then vertical.
  struct Edge {
    int r, c;
    bool horizontal;
    std::size_t dim;
  };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) edges.push_back({r, c, true, p.bond_dim(r, c, Bond::Right)});
  }
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c < cols; ++c) edges.push_back({r, c, false, p.bond_dim(r, c, Bond::Down)});
  }
  auto edge_value = [&](const std::vector<std::size_t> &cfg, int r, int c, Bond b) -> std::size_t {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const Edge &E = edges[e];
      if (b == Bond::Right && E.horizontal && E.r == r && E.c == c) return cfg[e];
      if (b == Bond::Left && E.horizontal && E.r == r && E.c + 1 == c) return cfg[e];
      if (b == Bond::Down && !E.horizontal && E.r == r && E.c == c) return cfg[e];
      if (b == Bond::Up && !E.horizontal && E.r + 1 == r && E.c == c) return cfg[e];
    }
    return 0;
  };
  Shape edge_shape;
  for (const Edge &e : edges) edge_shape.push_back(e.dim);
  const std::size_t n_cfg = shape_volume(edge_shape);
  const int n = rows * cols;
  std::vector<Complex> amps(std::size_t{1} << n, 0.0);
  for (std::size_t bits = 0; bits < amps.size(); ++bits) {
    Complex total = 0.0;
    for (std::size_t f = 0; f < n_cfg; ++f) {
      const auto cfg = edges.empty() ? std::vector<std::size_t>{} : unravel(f, edge_shape);
      Complex prod = 1.0;
      for (int r = 0; r < rows && prod != Complex(0.0); ++r) {
        for (int c = 0; c < cols; ++c) {
          const int site = r * cols + c + 1;
          std::vector<std::size_t> idx{(bits >> (n - site)) & 1U};
          for (Bond b : PepsNetwork::bonds_at(rows, cols, r, c)) idx.push_back(edge_value(cfg, r, c, b));
          prod *= p.at(r, c).data()[ravel(idx, p.at(r, c).shape())];
        }
      }
      total += prod;
    }
    amps[bits] = total;
  }
  return StateVector(n, std::move(amps));
}

inline Complex dense_expectation(const StateVector &psi, const Matrix &op) {
  const Eigen::Map<const Vector> v(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dimension()));
  return v.dot(op * v);
}

}  // namespace pepsq::testing

#endif  // PEPSQ_TESTS_SUPPORT_HPP
