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

// Compiles a random 3x3 ansatz into a five-qubit measure-and-reuse program,
// then estimates the boundary loop exactly and from shots.

#include <cstdio>
#include <cstdlib>

#include "pepsq/compiler.hpp"
#include "pepsq/io.hpp"
#include "pepsq/simulator.hpp"
#include "pepsq/variational.hpp"

int main() {
  using namespace pepsq;
  const LatticeShape shape{3, 3, 1};
  const auto theta = random_parameters(parameter_count(shape), 42);
  const GateProgram prog = compile_parameterized(shape, theta);
  std::printf("%d sites on %d qubits, %d measurements, %zu events\n", shape.sites(), prog.n_qubits,
              prog.measure_count(), prog.events.size());

  const PauliString loop = boundary_loop(3, 3);
  const double exact = exact_observable(prog, loop);
  const Estimate est = estimate_observable(prog, loop, 2000, 1);
  std::printf("<%s> exact %.6f, 2000 shots %.4f +- %.4f\n", loop.str().c_str(), exact, est.mean,
              est.standard_error);

  if (const char *path = std::getenv("PEPSQ_SAMPLE_OUT")) save_program(prog, path);
  return 0;
}
