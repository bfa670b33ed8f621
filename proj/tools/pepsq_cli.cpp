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

// pepsq: exact diagonalization, optimization, compilation and simulation of
// the Wen-plaquette PEPS experiment from the command line.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pepsq/compiler.hpp"
#include "pepsq/io.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/simulator.hpp"
#include "pepsq/variational.hpp"

namespace fs = std::filesystem;
using namespace pepsq;

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Opens `path` for writing, or returns std::cout for "-".
class Output {
 public:
  Output(const std::string &path, bool append) {
    if (path == "-") return;
    file_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!file_) throw Error("cannot write " + path);
  }
  std::ostream &stream() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct EdArgs {
  int rows = 3;
  int cols = 3;
  double g_min = 0.0;
  double g_max = 1.2;
  int steps = 120;
  std::string out = "-";
};

int cmd_ed(const EdArgs &a) {
  if (a.steps < 0) throw InvalidArgument("--steps must be >= 0");
  if (a.rows * a.cols > kMaxDenseSites) {
    throw InvalidArgument("grid has " + std::to_string(a.rows * a.cols) + " sites; the dense limit is " +
                          std::to_string(kMaxDenseSites));
  }
  const PauliString loop = boundary_loop(a.rows, a.cols);
  Output out(a.out, false);
  std::ostream &os = out.stream();
  os << "g,energy,loop_abs\n";
  for (int k = 0; k <= a.steps; ++k) {
    const double g = a.steps == 0 ? a.g_min : a.g_min + (a.g_max - a.g_min) * k / a.steps;
    const GroundState gs = exact_ground(full_hamiltonian(a.rows, a.cols, g), a.rows * a.cols);
    os << fmt6(g) << ',' << fmt6(gs.energy) << ',' << fmt6(std::abs(expectation(gs.state, loop).real())) << '\n';
  }
  return 0;
}

struct OptimizeArgs {
  int rows = 3;
  int cols = 3;
  std::vector<double> g_list = default_g_list();
  int restarts = 5;
  std::uint64_t seed = 0;
  std::size_t max_evaluations = MinimizeOptions{}.max_evaluations;
  std::string out = "checkpoints";
};

std::string checkpoint_name(double g) { return "checkpoint_g" + fmt6(g) + ".json"; }

int cmd_optimize(const OptimizeArgs &a) {
  const LatticeShape shape{a.rows, a.cols, 1};
  fs::create_directories(a.out);
  MinimizeOptions options;
  options.max_evaluations = a.max_evaluations;
  const auto results = sweep(shape, a.g_list, a.restarts, a.seed, options);
  for (const OptimizationResult &r : results) {
    Checkpoint c{r.g, r.theta, r.energy, r.evaluations, a.seed, parameterized_layout_id(shape)};
    const fs::path path = fs::path(a.out) / checkpoint_name(r.g);
    save_checkpoint(c, path);
    std::cout << "g=" << fmt6(r.g) << " energy=" << fmt6(r.energy) << " evaluations=" << r.evaluations
              << " converged=" << (r.converged ? "true" : "false") << " -> " << path.string() << '\n';
  }
  return 0;
}

struct RunArgs {
  std::string checkpoint;
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  double noise_p = 0.0;
  std::string mode = "both";
  std::string out = "-";
  std::string shot_log;
};

LatticeShape checked_shape(const Checkpoint &c) {
  const LatticeShape shape = shape_from_layout_id(c.layout_id);
  if (c.theta.size() != parameter_count(shape)) {
    throw InvalidArgument("checkpoint theta has " + std::to_string(c.theta.size()) + " entries; layout " +
                          c.layout_id + " needs " + std::to_string(parameter_count(shape)));
  }
  return shape;
}

int cmd_run(const RunArgs &a) {
  if (a.shots < 1) throw InvalidArgument("--shots must be >= 1");
  if (a.mode == "exact" && a.noise_p > 0.0) {
    throw Unsupported("exact evaluation of a noisy program is not supported; use --mode shots");
  }
  const Checkpoint c = load_checkpoint(a.checkpoint);
  const LatticeShape shape = checked_shape(c);
  const PauliString loop = boundary_loop(shape.rows, shape.cols);

  const GroundState gs = exact_ground(full_hamiltonian(shape.rows, shape.cols, c.g), shape.sites());
  const double ed_value = std::abs(expectation(gs.state, loop).real());

  const GateProgram prog = compile_parameterized(shape, c.theta);
  const StateVector psi = contract_all(tensors_from_parameters(shape, c.theta));
  const double tn_reference = expectation(psi, loop).real() / (psi.norm() * psi.norm());
  const double exact = exact_observable(prog, loop);
  if (std::abs(std::abs(exact) - std::abs(tn_reference)) > 1e-8) {
    throw InvariantViolation("compiled program disagrees with the contraction: " + std::to_string(exact) +
                             " vs " + std::to_string(tn_reference));
  }
  const double orientation = exact < 0.0 ? -1.0 : 1.0;

  double mean = 0.0;
  double stderr_value = 0.0;
  std::size_t shots = 0;
  if (a.mode != "exact") {
    const GateProgram noisy = a.noise_p > 0.0 ? apply_depolarizing(prog, a.noise_p) : prog;
    const Estimate est = estimate_observable(noisy, loop, a.shots, a.seed, !a.shot_log.empty());
    mean = orientation * est.mean;
    stderr_value = est.standard_error;
    shots = a.shots;
    if (!a.shot_log.empty()) {
      Output log(a.shot_log, false);
      write_shot_csv(log.stream(), est.shots, shape.sites());
    }
  }

  const bool fresh = a.out == "-" || !fs::exists(a.out) || fs::file_size(a.out) == 0;
  Output out(a.out, true);
  std::ostream &os = out.stream();
  if (fresh) os << "g,ed_value,tn_value,circuit_mean,circuit_stderr,shots,seed\n";
  os << fmt6(c.g) << ',' << fmt6(ed_value) << ',' << fmt6(std::abs(exact)) << ',' << fmt6(mean) << ','
     << fmt6(stderr_value) << ',' << shots << ',' << a.seed << '\n';
  return 0;
}

struct CompileArgs {
  std::string checkpoint;
  std::string out = "-";
};

int cmd_compile(const CompileArgs &a) {
  const Checkpoint c = load_checkpoint(a.checkpoint);
  const LatticeShape shape = checked_shape(c);
  const GateProgram prog = compile_parameterized(shape, c.theta);
  if (a.out == "-") {
    std::cout << serialize_program(prog);
  } else {
    save_program(prog, a.out);
  }
  std::ostream &info = a.out == "-" ? std::cerr : std::cout;
  info << "n_qubits: " << prog.n_qubits << '\n';
  info << "qubit-efficient: " << (is_qubit_efficient(shape) ? "true" : "false") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"PEPS to measure-and-reuse circuit toolkit for the Wen-plaquette model"};
  app.require_subcommand(1);

  EdArgs ed;
  auto *ed_cmd = app.add_subcommand("ed", "Exact-diagonalization sweep; CSV g,energy,loop_abs");
  ed_cmd->add_option("--rows", ed.rows, "Lattice rows")->capture_default_str();
  ed_cmd->add_option("--cols", ed.cols, "Lattice columns")->capture_default_str();
  ed_cmd->add_option("--g-min", ed.g_min, "First field strength")->capture_default_str();
  ed_cmd->add_option("--g-max", ed.g_max, "Last field strength")->capture_default_str();
  ed_cmd->add_option("--steps", ed.steps, "Number of grid intervals (steps+1 rows)")->capture_default_str();
  std::vector<double> ed_single;
  ed_cmd->add_option("--g", ed_single, "Single field strength (overrides the range)")->expected(1);
  ed_cmd->add_option("--out", ed.out, "Output CSV, '-' for stdout")->capture_default_str();

  OptimizeArgs opt;
  auto *opt_cmd = app.add_subcommand("optimize", "Variational sweep; one checkpoint JSON per g");
  opt_cmd->add_option("--rows", opt.rows, "Lattice rows")->capture_default_str();
  opt_cmd->add_option("--cols", opt.cols, "Lattice columns")->capture_default_str();
  opt_cmd->add_option("--g-list", opt.g_list, "Field strengths, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  std::vector<double> opt_single;
  opt_cmd->add_option("--g", opt_single, "Single field strength (overrides --g-list)")->expected(1);
  opt_cmd->add_option("--restarts", opt.restarts, "Minimizations per g (best kept)")->capture_default_str();
  opt_cmd->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  opt_cmd->add_option("--max-evals", opt.max_evaluations, "Evaluation budget per minimization")
      ->capture_default_str();
  opt_cmd->add_option("--out", opt.out, "Checkpoint directory")->capture_default_str();

  RunArgs run;
  auto *run_cmd = app.add_subcommand("run", "Compile a checkpoint, evaluate it exactly and by shots");
  run_cmd->add_option("checkpoint", run.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--shots", run.shots, "Number of shots")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Shot seed")->capture_default_str();
  run_cmd->add_option("--noise-p", run.noise_p, "Depolarizing probability after every gate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  run_cmd->add_option("--mode", run.mode, "both, exact or shots")
      ->check(CLI::IsMember({"both", "exact", "shots"}))
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "CSV to append to, '-' for stdout")->capture_default_str();
  run_cmd->add_option("--shot-log", run.shot_log, "Optional per-shot CSV");

  CompileArgs comp;
  auto *comp_cmd = app.add_subcommand("compile", "Write the gate program JSON for a checkpoint");
  comp_cmd->add_option("checkpoint", comp.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  comp_cmd->add_option("--out", comp.out, "Output JSON, '-' for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (!ed_single.empty()) {
    ed.g_min = ed.g_max = ed_single.front();
    ed.steps = 0;
  }
  if (!opt_single.empty()) opt.g_list = opt_single;

  try {
    if (*ed_cmd) return cmd_ed(ed);
    if (*opt_cmd) return cmd_optimize(opt);
    if (*run_cmd) return cmd_run(run);
    if (*comp_cmd) return cmd_compile(comp);
  } catch (const std::exception &e) {
    std::cerr << "pepsq: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
