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

#include <gtest/gtest.h>

#include <numbers>

#include "pepsq/gates.hpp"
#include "support.hpp"

namespace pepsq {
namespace {

using testing::Gen;
using testing::kron2;
using testing::pauli_2x2;

constexpr double kPi = std::numbers::pi;

std::vector<double> random_angles(Gen &gen, std::size_t n) {
  std::vector<double> p(n);
  for (double &x : p) x = gen.uniform(-kPi, kPi);
  return p;
}

TEST(GatesTest, U3SpecialCases) {
  EXPECT_LT(max_abs_diff(u3(0, 0, 0), Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs_diff(u3(kPi, 0, kPi), pauli_2x2(Pauli::X)), 1e-15);
  // U3(pi/2, 0, pi) is the Hadamard.
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  EXPECT_LT(max_abs_diff(u3(kPi / 2, 0, kPi), h / std::sqrt(2.0)), 1e-15);
}

TEST(GatesTest, MolmerSorensenIsXXRotation) {
  const Matrix xx = kron2(pauli_2x2(Pauli::X), pauli_2x2(Pauli::X));
  const Matrix want = (Matrix::Identity(4, 4) - Complex(0, 1) * xx) / std::sqrt(2.0);
  EXPECT_LT(max_abs_diff(ms_gate(), want), 1e-15);
}

TEST(GatesTest, BlocksAreUnitaryAndComposeAsDocumented) {
  Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_angles(gen, kThreeQubitBlockParams);
    const Matrix b2 = two_qubit_block(std::span<const double>(p).first(kTwoQubitBlockParams));
    EXPECT_TRUE(is_unitary(b2));
    // in0, in1 U3s, then MS, then out0, out1 U3s.
    const Matrix in = kron2(u3(p[0], p[1], p[2]), u3(p[3], p[4], p[5]));
    const Matrix out = kron2(u3(p[6], p[7], p[8]), u3(p[9], p[10], p[11]));
    EXPECT_LT(max_abs_diff(b2, out * ms_gate() * in), 1e-14);

    const Matrix b3 = three_qubit_block(p);
    const Matrix first = kron2(b2, Matrix::Identity(2, 2));
    const Matrix second = kron2(Matrix::Identity(2, 2), two_qubit_block(std::span<const double>(p).subspan(12)));
    EXPECT_LT(max_abs_diff(b3, second * first), 1e-14);
  }
  EXPECT_THROW(two_qubit_block(std::vector<double>(11)), InvalidArgument);
}

TEST(GatesTest, GateSpecValidation) {
  GateSpec g{GateKind::U3, {0.1, 0.2, 0.3}, {0}, {}};
  EXPECT_NO_THROW(g.validate());
  g.params.pop_back();
  EXPECT_THROW(g.validate(), InvalidArgument);
  GateSpec ms{GateKind::MS, {}, {1, 1}, {}};
  EXPECT_THROW(ms.validate(), InvalidArgument);
  GateSpec custom{GateKind::CustomUnitary, {}, {0, 2}, Matrix::Identity(4, 4) * 2.0};
  EXPECT_THROW(custom.validate(), InvalidArgument);
  custom.unitary = Matrix::Identity(4, 4);
  EXPECT_NO_THROW(custom.validate());
  for (GateKind k : {GateKind::U3, GateKind::MS, GateKind::TwoQubitBlock, GateKind::ThreeQubitBlock,
                     GateKind::CustomUnitary}) {
    EXPECT_EQ(gate_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(gate_kind_from_string("CNOT"), InvalidArgument);
}

TEST(GatesTest, ClampedTensorIsIsometry) {
  Gen gen(32);
  const Matrix u = gen.unitary(8);
  // Fix the middle input: free inputs 0 and 2.
  const Tensor t = unitary_to_tensor(u, {1});
  ASSERT_EQ(t.shape(), (Shape{2, 2, 2, 2, 2}));
  const Matrix v = t.to_matrix(2).transpose();  // outputs x free inputs
  EXPECT_LT(isometry_residual(v), 1e-12);
  // Column for free inputs (a, b) is U's column with input bits (a, 0, b).
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const auto col = static_cast<Eigen::Index>(a * 4 + b);
      EXPECT_LT((v.col(static_cast<Eigen::Index>(a * 2 + b)) - u.col(col)).norm(), 1e-15);
    }
  }
  const Tensor all_fixed = unitary_to_tensor(u, {0, 1, 2});
  EXPECT_EQ(all_fixed.shape(), (Shape{2, 2, 2}));
  EXPECT_THROW(unitary_to_tensor(u, {3}), InvalidArgument);
  EXPECT_THROW(unitary_to_tensor(Matrix::Identity(8, 8) * 2.0, {0}), InvariantViolation);
}

TEST(GatesTest, ClampCompleteReclampRoundTrip) {
  Gen gen(33);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen.integer(1, 3);
    const int n_fixed = gen.integer(0, n);
    std::vector<int> fixed;
    for (int q = 0; q < n_fixed; ++q) fixed.push_back(q);  // leading qubits
    const Matrix u = gen.unitary(Eigen::Index{1} << n);
    const Tensor t = unitary_to_tensor(u, fixed);
    const auto n_free = static_cast<std::size_t>(n - n_fixed);
    const Matrix v = t.to_matrix(n_free).transpose();
    const Matrix completed = complete_isometry(v);
    const Tensor again = unitary_to_tensor(completed, fixed);
    EXPECT_LT(max_abs_diff(again, t), 1e-10) << "trial " << trial;
  }
}

TEST(GatesTest, FinalRowSplitRecontracts) {
  Gen gen(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = gen.unitary(8);
    const RowSplit rs = split_final_row(u);
    ASSERT_EQ(rs.sites.size(), 3u);
    EXPECT_LT(rs.reconstruction_error, 1e-12);
    // Site 0 is [p, up, left=1, right], bond dims bounded by the cut ranks.
    EXPECT_EQ(rs.sites[0].dim(2), 1u);
    EXPECT_LE(rs.sites[0].dim(3), 4u);
    EXPECT_EQ(rs.sites[2].dim(3), 1u);
    // Contract back by hand against the explicit unitary.
    const Tensor back = recontract_row(rs.sites);  // (p0, u0, p1, u1, p2, u2)
    for (std::size_t out = 0; out < 8; ++out) {
      for (std::size_t in = 0; in < 8; ++in) {
        const Complex got = back.at({out >> 2, in >> 2, (out >> 1) & 1, (in >> 1) & 1, out & 1, in & 1});
        EXPECT_LT(std::abs(got - u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in))), 1e-12);
      }
    }
  }
}

TEST(GatesTest, FinalRowSplitWithClampedInputs) {
  Gen gen(35);
  const Matrix u = gen.unitary(8);
  const RowSplit rs = split_final_row(u, std::vector<int>{1});
  EXPECT_EQ(rs.sites[1].dim(1), 1u);
  EXPECT_LT(rs.reconstruction_error, 1e-12);
  EXPECT_THROW(split_final_row(gen.unitary(4)), InvalidArgument);
}

TEST(GatesTest, ProductUnitarySplitsWithUnitBonds) {
  Gen gen(36);
  const Matrix u = kron2(kron2(gen.unitary(2), gen.unitary(2)), gen.unitary(2));
  const RowSplit rs = split_final_row(u);
  for (const RealVector &s : rs.singular_values) EXPECT_EQ(s.size(), 1);
}

}  // namespace
}  // namespace pepsq
