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

#include <cmath>
#include <numbers>
#include <sstream>

#include "pepsq/simulator.hpp"
#include "support.hpp"

namespace pepsq {
namespace {

constexpr double kPi = std::numbers::pi;

GateSpec u3_on(int q, double theta, double phi = 0.0, double lam = 0.0) {
  return GateSpec{GateKind::U3, {theta, phi, lam}, {q}, {}};
}

GateSpec cnot(int control, int target) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return GateSpec{GateKind::CustomUnitary, {}, {control, target}, m};
}

void measure(GateProgram &p, int qubit, int site) {
  p.site_map[p.measure_count()] = site;
  p.events.emplace_back(MeasureEvent{qubit, site, Pauli::Z});
  p.events.emplace_back(ResetEvent{qubit});
}

// Bell pair on sites 1, 2, then qubit 0 reused for site 3 prepared by U3(theta).
GateProgram bell_and_reuse(double theta) {
  GateProgram p;
  p.n_qubits = 2;
  p.events.emplace_back(u3_on(0, kPi / 2, 0, kPi));
  p.events.emplace_back(cnot(0, 1));
  measure(p, 0, 1);
  measure(p, 1, 2);
  p.events.emplace_back(u3_on(0, theta));
  measure(p, 0, 3);
  return p;
}

TEST(ProgramTest, ValidateCatchesDisciplineBreaches) {
  GateProgram p = bell_and_reuse(0.3);
  EXPECT_NO_THROW(p.validate());
  GateProgram missing_reset = p;
  missing_reset.events.erase(missing_reset.events.begin() + 3);
  EXPECT_THROW(missing_reset.validate(), InvariantViolation);
  GateProgram bad_map = p;
  bad_map.site_map[0] = 2;
  EXPECT_THROW(bad_map.validate(), InvariantViolation);
  GateProgram bad_qubit = p;
  bad_qubit.events.emplace_back(u3_on(5, 0.1));
  EXPECT_THROW(bad_qubit.validate(), InvariantViolation);
}

TEST(ExactObservableTest, BellPairAndReusedQubit) {
  const double theta = 0.7;
  const GateProgram p = bell_and_reuse(theta);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("Z1 Z2")), 1.0, 1e-14);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("X1 X2")), 1.0, 1e-14);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("Y1 Y2")), -1.0, 1e-14);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("Z1")), 0.0, 1e-14);
  // Reset returns qubit 0 to |0> whatever site 1 read.
  EXPECT_NEAR(exact_observable(p, PauliString::parse("Z3")), std::cos(theta), 1e-14);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("X3")), std::sin(theta), 1e-14);
  EXPECT_NEAR(exact_observable(p, PauliString::parse("Z1 Z2 Z3")), std::cos(theta), 1e-14);
  const ExactResult d = exact_observable_detail(p, PauliString::parse("Z1 Z2"));
  EXPECT_NEAR(d.total_probability, 1.0, 1e-14);
  EXPECT_EQ(d.branches, 4u);  // two Bell outcomes x two site-3 outcomes
}

TEST(ExactObservableTest, GuardsAndNoise) {
  GateProgram big;
  big.n_qubits = 1;
  for (int s = 1; s <= kMaxBranchMeasurements + 1; ++s) measure(big, 0, s);
  EXPECT_THROW(exact_observable(big, PauliString::parse("Z1")), InvalidArgument);
  const GateProgram noisy = apply_depolarizing(bell_and_reuse(0.1), 0.1);
  EXPECT_TRUE(noisy.is_noisy());
  EXPECT_THROW(exact_observable(noisy, PauliString::parse("Z1")), Unsupported);
  const GateProgram silent = apply_depolarizing(bell_and_reuse(0.1), 0.0);
  EXPECT_FALSE(silent.is_noisy());
  EXPECT_NEAR(exact_observable(silent, PauliString::parse("Z3")), std::cos(0.1), 1e-14);
}

TEST(ShotTest, RecordsAreConsistent) {
  const GateProgram p = bell_and_reuse(1.1);
  const PauliString obs = PauliString::parse("X1 X2 Z3");
  const Estimate est = estimate_observable(p, obs, 200, 7, true);
  ASSERT_EQ(est.shots.size(), 200u);
  for (const ShotRecord &r : est.shots) {
    ASSERT_EQ(r.outcomes.size(), 3u);
    EXPECT_EQ(r.basis.at(1), Pauli::X);
    EXPECT_EQ(r.basis.at(3), Pauli::Z);
    EXPECT_EQ(r.outcomes.at(1), r.outcomes.at(2));  // X1 X2 = +1 on the Bell pair
    EXPECT_EQ(r.product, r.outcomes.at(1) * r.outcomes.at(2) * r.outcomes.at(3));
  }
}

TEST(ShotTest, IdentitySitesAreExcludedFromProduct) {
  const GateProgram p = bell_and_reuse(kPi / 2);
  const Estimate est = estimate_observable(p, PauliString::parse("Z1 Z2"), 100, 3, true);
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.standard_error, 0.0);
  for (const ShotRecord &r : est.shots) EXPECT_EQ(r.basis.at(3), Pauli::I);
}

TEST(ShotTest, MeanAndStandardErrorAreStatisticallySound) {
  const double theta = 1.2;
  const GateProgram p = bell_and_reuse(theta);
  const PauliString obs = PauliString::parse("Z3");
  const std::size_t n = 4000;
  const Estimate est = estimate_observable(p, obs, n, 11);
  const double exact = std::cos(theta);
  EXPECT_LT(std::abs(est.mean - exact), 4.0 * est.standard_error);
  const double bernoulli = std::sqrt((1.0 - est.mean * est.mean) / static_cast<double>(n));
  EXPECT_NEAR(est.standard_error / bernoulli, 1.0, 0.01);
}

TEST(ShotTest, DeterministicPerSeed) {
  const GateProgram p = bell_and_reuse(0.9);
  const PauliString obs = PauliString::parse("X1 Z3");
  const Estimate a = estimate_observable(p, obs, 300, 5, true);
  const Estimate b = estimate_observable(p, obs, 300, 5, true);
  const Estimate c = estimate_observable(p, obs, 300, 6, true);
  EXPECT_EQ(a.mean, b.mean);
  bool differs = false;
  for (std::size_t i = 0; i < 300; ++i) {
    EXPECT_EQ(a.shots[i].outcomes, b.shots[i].outcomes);
    differs = differs || a.shots[i].outcomes != c.shots[i].outcomes;
  }
  EXPECT_TRUE(differs);
  // Shot i depends only on (seed, i).
  EXPECT_EQ(run_shot(p, bases_for(obs), 5, 17).outcomes, a.shots[17].outcomes);
}

TEST(NoiseTest, DepolarizingMatchesAnalyticDamping) {
  // One U3(0) gate then Z readout: X or Y errors flip the outcome, so <Z> = 1 - 4p/3.
  GateProgram p;
  p.n_qubits = 1;
  p.events.emplace_back(u3_on(0, 0.0));
  measure(p, 0, 1);
  const double prob = 0.3;
  const Estimate est = estimate_observable(apply_depolarizing(p, prob), PauliString::parse("Z1"), 20000, 9);
  EXPECT_LT(std::abs(est.mean - (1.0 - 4.0 * prob / 3.0)), 4.0 * est.standard_error);
  EXPECT_THROW(apply_depolarizing(p, 1.5), InvalidArgument);
}

TEST(ShotLogTest, CsvLayout) {
  const GateProgram p = bell_and_reuse(0.2);
  const Estimate est = estimate_observable(p, PauliString::parse("Z1 Z2"), 3, 1, true);
  std::ostringstream os;
  write_shot_csv(os, est.shots, 3);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "shot_index,site_1,site_2,site_3,product");
  int rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(line.substr(0, 2), std::to_string(rows) + ",");
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(RegisterStateTest, ApplyMatchesKroneckerOracle) {
  testing::Gen gen(51);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = gen.unitary(4);
    RegisterState s(3);
    s.apply(gen.unitary(8), std::vector<int>{0, 1, 2});
    const std::vector<Complex> before = s.amplitudes();
    // Gate on qubits (2, 0): permute into the kron frame (q2, q0, q1).
    s.apply(u, std::vector<int>{2, 0});
    const Matrix full = testing::kron2(u, Matrix::Identity(2, 2));
    for (std::size_t out = 0; out < 8; ++out) {
      Complex acc = 0.0;
      for (std::size_t in = 0; in < 8; ++in) {
        // register index r = (q0 q1 q2) with q0 most significant; frame f = (q2 q0 q1)
        auto to_frame = [](std::size_t r) { return ((r & 1) << 2) | (((r >> 2) & 1) << 1) | ((r >> 1) & 1); };
        acc += full(static_cast<Eigen::Index>(to_frame(out)), static_cast<Eigen::Index>(to_frame(in))) * before[in];
      }
      EXPECT_LT(std::abs(acc - s.amplitudes()[out]), 1e-13);
    }
  }
}

}  // namespace
}  // namespace pepsq
