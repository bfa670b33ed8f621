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

// Variational ground-state search over the parameterized PEPS layout.
//
// The objective is the Rayleigh quotient of H(g) = H_wen + H_mag evaluated by
// exact contraction of the network. Minimization uses a derivative-free
// linear-model trust-region method in the style of COBYLA: a simplex of n+1
// points defines a linear interpolant, steps go to the trust-region boundary
// along the model's descent direction, and the radius is halved when steps
// stop paying off.

#ifndef PEPSQ_VARIATIONAL_HPP
#define PEPSQ_VARIATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/compiler.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/peps.hpp"

namespace pepsq {

inline OperatorSum full_hamiltonian(int rows, int cols, double g) {
  return wen_hamiltonian(rows, cols) + magnetic_term(rows, cols, g);
}

/// <psi(theta)|H(g)|psi(theta)> / <psi(theta)|psi(theta)> with H cached.
class EnergyObjective {
 public:
  EnergyObjective(LatticeShape shape, double g)
      : shape_(shape), g_(g), hamiltonian_(full_hamiltonian(shape.rows, shape.cols, g)) {}

  double operator()(std::span<const double> theta) const {
    const StateVector psi = contract_all(tensors_from_parameters(shape_, theta));
    const double nrm2 = psi.norm() * psi.norm();
    return expectation(psi, hamiltonian_).real() / nrm2;
  }

  const LatticeShape &shape() const { return shape_; }
  double g() const { return g_; }
  const OperatorSum &hamiltonian() const { return hamiltonian_; }

 private:
  LatticeShape shape_;
  double g_;
  OperatorSum hamiltonian_;
};

inline double energy(const LatticeShape &shape, std::span<const double> theta, double g) {
  return EnergyObjective(shape, g)(theta);
}

struct MinimizeOptions {
  std::size_t max_evaluations = 20000;
  /// Stop once the incumbent improves by less than this between two
  /// consecutive trust-region reductions (checked only for small radii).
  double tolerance = 1e-7;
  /// Initial trust-region radius (radians).
  double initial_step = 0.3;
  /// The objective-change test applies once the radius is at most this.
  double settle_step = 3e-3;
  /// Smallest trust-region radius; reaching it also counts as converged.
  double final_step = 1e-8;
  double lower_bound = -2.0 * std::numbers::pi;
  double upper_bound = 2.0 * std::numbers::pi;
  /// Record the incumbent objective after every iteration.
  bool record_trace = false;
};

struct OptimizationResult {
  std::vector<double> theta;
  double energy = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  double g = 0.0;
  std::vector<double> trace;
};

/// Minimizes `f` from `x0` within the box [lower_bound, upper_bound]^n. Every
/// evaluated point lies inside the box.
inline OptimizationResult minimize_function(const std::function<double(std::span<const double>)> &f,
                                            std::vector<double> x0, const MinimizeOptions &opt) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  if (n == 0) throw InvalidArgument("minimize: empty parameter vector");
  if (!(opt.initial_step > 0.0) || !(opt.final_step > 0.0) || !(opt.tolerance >= 0.0)) {
    throw InvalidArgument("minimize: step sizes must be positive");
  }
  constexpr double kAlpha = 0.25;  // minimum acceptable vertex height / rho
  constexpr double kBeta = 2.1;    // maximum acceptable edge length / rho
  constexpr double kGamma = 0.5;   // geometry step length / rho

  OptimizationResult res;
  const auto clamp = [&](Eigen::VectorXd &x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), opt.lower_bound, opt.upper_bound);
  };
  const auto eval = [&](const Eigen::VectorXd &x) {
    ++res.evaluations;
    return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  };

  Eigen::VectorXd pole = Eigen::Map<Eigen::VectorXd>(x0.data(), n);
  clamp(pole);
  double rho = opt.initial_step;
  double f_pole = eval(pole);

  // Simplex: pole plus one step along each coordinate (pointing inward when
  // the bound is close). Also used to restore the model when the bounds
  // block a geometry step.
  Eigen::MatrixXd vertices(n, n);
  Eigen::VectorXd f_vert(n);
  Eigen::MatrixXd sim;   // columns: vertex - pole
  Eigen::MatrixXd simi;  // rows: dual basis
  const auto build_simplex = [&] {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd x = pole;
      x(j) += (pole(j) + rho <= opt.upper_bound) ? rho : -rho;
      clamp(x);
      vertices.col(j) = x;
      f_vert(j) = eval(x);
    }
    Eigen::Index best = -1;
    f_vert.minCoeff(&best);
    if (f_vert(best) < f_pole) {
      std::swap(f_pole, f_vert(best));
      Eigen::VectorXd tmp = pole;
      pole = vertices.col(best);
      vertices.col(best) = tmp;
    }
    sim = vertices.colwise() - pole;
    simi = sim.inverse();
  };
  build_simplex();
  if (opt.record_trace) res.trace.push_back(f_pole);

  // Replace vertex l by pole + d, then make it the pole if it is better.
  const auto replace_vertex = [&](Eigen::Index l, const Eigen::VectorXd &d, double f_new) {
    const Eigen::VectorXd sigma = simi * d;
    sim.col(l) = d;
    const Eigen::RowVectorXd row_l = simi.row(l) / sigma(l);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != l) simi.row(j) -= sigma(j) * row_l;
    }
    simi.row(l) = row_l;
    f_vert(l) = f_new;
    if (f_new < f_pole) {
      const Eigen::VectorXd shift = sim.col(l);
      pole += shift;
      sim.colwise() -= shift;
      sim.col(l) = -shift;
      simi.row(l) = -simi.colwise().sum();
      std::swap(f_vert(l), f_pole);
    }
  };

  bool converged = false;
  double f_at_reduction = f_pole;
  while (res.evaluations < opt.max_evaluations) {
    // Geometry: long edges or flat vertices make the linear model unreliable.
    Eigen::Index worst = -1;
    {
      const Eigen::VectorXd edge = sim.colwise().norm().transpose();
      const Eigen::VectorXd height = simi.rowwise().norm().cwiseInverse();
      Eigen::Index i_edge = 0;
      Eigen::Index i_height = 0;
      const double max_edge = edge.maxCoeff(&i_edge);
      const double min_height = height.minCoeff(&i_height);
      if (max_edge > kBeta * rho) {
        worst = i_edge;
      } else if (min_height < kAlpha * rho) {
        worst = i_height;
      }
    }
    const Eigen::VectorXd df = f_vert.array() - f_pole;
    const Eigen::VectorXd grad = simi.transpose() * df;
    if (worst >= 0) {
      // Step along the dual direction of the bad vertex; clamping may
      // flatten it, in which case try the opposite sign, then rebuild.
      const Eigen::VectorXd normal = simi.row(worst).transpose();
      const auto height_of = [&](const Eigen::VectorXd &d) { return std::abs(normal.dot(d)) / normal.norm(); };
      Eigen::VectorXd d = normal * (kGamma * rho / normal.norm());
      if (grad.dot(d) > 0.0) d = -d;
      Eigen::VectorXd x = pole + d;
      clamp(x);
      if (height_of(x - pole) < kAlpha * rho) {
        x = pole - d;
        clamp(x);
      }
      if (height_of(x - pole) >= kAlpha * rho) {
        replace_vertex(worst, x - pole, eval(x));
      } else {
        if (res.evaluations + static_cast<std::size_t>(n) > opt.max_evaluations) break;
        build_simplex();
      }
      if (opt.record_trace) res.trace.push_back(f_pole);
      continue;
    }

    // Descent direction with components leaving the box at active bounds removed.
    Eigen::VectorXd dir = -grad;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((dir(i) > 0.0 && pole(i) >= opt.upper_bound) || (dir(i) < 0.0 && pole(i) <= opt.lower_bound)) dir(i) = 0.0;
    }
    bool reduce = false;
    const double dnorm = dir.norm();
    if (dnorm == 0.0) {
      reduce = true;
    } else {
      Eigen::VectorXd x = pole + (rho / dnorm) * dir;
      clamp(x);
      const Eigen::VectorXd d = x - pole;
      const double predicted = -grad.dot(d);
      if (d.norm() < 0.5 * rho || predicted <= 0.0) {
        reduce = true;
      } else {
        const double f_new = eval(x);
        const double ratio = (f_pole - f_new) / predicted;
        // Vertex to drop: large dual coordinate, weighted towards far vertices.
        const Eigen::VectorXd sigma = simi * d;
        Eigen::Index l = -1;
        double score_best = f_new < f_pole ? 0.0 : 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
          const double dist = (sim.col(j) - d).norm() / rho;
          const double score = std::abs(sigma(j)) * std::max(1.0, dist * dist);
          if (score > score_best) {
            score_best = score;
            l = j;
          }
        }
        if (l >= 0 && std::abs(sigma(l)) > 1e-12) replace_vertex(l, d, f_new);
        reduce = ratio <= 0.1;
      }
    }
    if (opt.record_trace) res.trace.push_back(f_pole);
    if (reduce) {
      const bool settled = rho <= opt.settle_step && f_at_reduction - f_pole < opt.tolerance;
      if (settled || rho <= opt.final_step) {
        converged = true;
        break;
      }
      f_at_reduction = f_pole;
      rho = 0.5 * rho;
      if (rho <= 1.5 * opt.final_step) rho = opt.final_step;
    }
  }

  res.theta.assign(pole.data(), pole.data() + n);
  res.energy = f_pole;
  res.converged = converged;
  return res;
}

/// Energy minimization at field strength g on the given layout.
inline OptimizationResult minimize(const LatticeShape &shape, double g, std::vector<double> theta_init,
                                   const MinimizeOptions &options = {}) {
  if (theta_init.size() != parameter_count(shape)) {
    throw InvalidArgument("minimize: theta_init has the wrong length");
  }
  const EnergyObjective objective(shape, g);
  OptimizationResult r =
      minimize_function([&](std::span<const double> x) { return objective(x); }, std::move(theta_init), options);
  r.g = g;
  return r;
}

/// Uniform in [-pi/4, pi/4] per parameter, deterministic in (seed, stream, restart).
inline std::vector<double> random_parameters(std::size_t count, std::uint64_t seed, std::uint64_t stream = 0,
                                             std::uint64_t restart = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(restart), 0x7e7aU};
  std::mt19937_64 rng(seq);
  std::vector<double> theta(count);
  for (double &t : theta) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    t = (2.0 * u - 1.0) * std::numbers::pi / 4.0;
  }
  return theta;
}

/// Field strengths of the reference experiment.
inline std::vector<double> default_g_list() { return {0.0, 0.1, 0.2, 0.4, 0.6, 1.0}; }

/// Best of `restarts` minimizations per g. From the second g on, the first
/// restart is warm-started from the previous g's best parameters.
inline std::vector<OptimizationResult> sweep(const LatticeShape &shape, const std::vector<double> &g_list,
                                             int restarts, std::uint64_t seed,
                                             const MinimizeOptions &options = {},
                                             const std::function<void(const OptimizationResult &, int)> &on_restart = {}) {
  if (g_list.empty()) throw InvalidArgument("sweep: g_list must not be empty");
  if (restarts < 1) throw InvalidArgument("sweep: restarts must be >= 1");
  const std::size_t n_params = parameter_count(shape);
  std::vector<OptimizationResult> out;
  for (std::size_t gi = 0; gi < g_list.size(); ++gi) {
    OptimizationResult best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
      std::vector<double> init = (r == 0 && gi > 0) ? out.back().theta
                                                    : random_parameters(n_params, seed, gi, static_cast<std::uint64_t>(r));
      OptimizationResult res = minimize(shape, g_list[gi], std::move(init), options);
      if (on_restart) on_restart(res, r);
      if (!have || res.energy < best.energy) {
        best = std::move(res);
        have = true;
      }
    }
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace pepsq

#endif  // PEPSQ_VARIATIONAL_HPP
