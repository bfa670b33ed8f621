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

// Optimizes the 2x2 ansatz at a few field strengths and compares with exact
// diagonalization.

#include <cmath>
#include <cstdio>

#include "pepsq/compiler.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/variational.hpp"

int main() {
  using namespace pepsq;
  const LatticeShape shape{2, 2, 1};
  const PauliString loop = boundary_loop(2, 2);
  MinimizeOptions opt;
  opt.max_evaluations = 3000;
  const auto results = sweep(shape, {0.0, 0.3, 1.0}, 2, 0, opt);
  std::printf("%6s %12s %12s %10s %10s\n", "g", "E", "E_exact", "|O|", "|O|_exact");
  for (const OptimizationResult &r : results) {
    const GroundState gs = exact_ground(full_hamiltonian(2, 2, r.g), 4);
    const StateVector psi = contract_all(tensors_from_parameters(shape, r.theta)).normalized();
    std::printf("%6.2f %12.6f %12.6f %10.4f %10.4f\n", r.g, r.energy, gs.energy,
                std::abs(expectation(psi, loop).real()), std::abs(expectation(gs.state, loop).real()));
  }
  return 0;
}
