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

// Pure-state execution of gate programs with mid-circuit measurement.
//
// Two modes: exact evaluation of a Pauli observable by enumerating every
// measurement branch, and shot sampling. Before a site's measurement the
// qubit is rotated into the requested basis (X: H, Y: S^dagger then H), then
// measured in Z; outcome +1 is |0>.

#ifndef PEPSQ_SIMULATOR_HPP
#define PEPSQ_SIMULATOR_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/program.hpp"

namespace pepsq {

/// Register amplitudes; qubit 0 is the most significant bit.
class RegisterState {
 public:
  explicit RegisterState(int n_qubits)
      : n_(n_qubits), amps_(std::size_t{1} << n_qubits, Complex{0.0, 0.0}) {
    amps_[0] = 1.0;
  }

  int n_qubits() const { return n_; }
  const std::vector<Complex> &amplitudes() const { return amps_; }

  double norm() const {
    double s = 0.0;
    for (const Complex &z : amps_) s += std::norm(z);
    return std::sqrt(s);
  }

  void apply(const Matrix &u, std::span<const int> qubits) {
    const auto k = qubits.size();
    const std::size_t sub = std::size_t{1} << k;
    if (static_cast<std::size_t>(u.rows()) != sub) throw InvalidArgument("RegisterState::apply: size mismatch");
    std::vector<std::size_t> bit(k);
    std::size_t gate_mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      bit[j] = std::size_t{1} << (n_ - 1 - qubits[j]);
      gate_mask |= bit[j];
    }
    // Offsets of the 2^k sub-basis states relative to a base index.
    std::vector<std::size_t> offset(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
      for (std::size_t j = 0; j < k; ++j) {
        if ((s >> (k - 1 - j)) & 1U) offset[s] |= bit[j];
      }
    }
    std::vector<Complex> in(sub);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
      if (base & gate_mask) continue;
      for (std::size_t s = 0; s < sub; ++s) in[s] = amps_[base | offset[s]];
      for (std::size_t r = 0; r < sub; ++r) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < sub; ++s) acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * in[s];
        amps_[base | offset[r]] = acc;
      }
    }
  }

  /// Probability that `qubit` reads 1.
  double prob_one(int qubit) const {
    const std::size_t b = std::size_t{1} << (n_ - 1 - qubit);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & b) p += std::norm(amps_[i]);
    }
    return p;
  }

  /// Projects `qubit` onto |outcome> and renormalizes. Returns the branch probability.
  double project(int qubit, int outcome) {
    const std::size_t b = std::size_t{1} << (n_ - 1 - qubit);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (((i & b) != 0) != (outcome == 1)) {
        amps_[i] = 0.0;
      } else {
        p += std::norm(amps_[i]);
      }
    }
    if (p <= 0.0) throw InvariantViolation("RegisterState::project: zero-probability outcome");
    const double scale = 1.0 / std::sqrt(p);
    for (Complex &z : amps_) z *= scale;
    return p;
  }

  /// Moves a qubit already projected onto |outcome> back to |0>.
  void reset_known(int qubit, int outcome) {
    if (outcome == 0) return;
    const std::size_t b = std::size_t{1} << (n_ - 1 - qubit);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & b) {
        amps_[i ^ b] = amps_[i];
        amps_[i] = 0.0;
      }
    }
  }

 private:
  int n_;
  std::vector<Complex> amps_;
};

/// Single-qubit rotation taking the given Pauli's eigenbasis to Z.
inline Matrix basis_change(Pauli p) {
  const double r = 1.0 / std::numbers::sqrt2;
  Matrix m(2, 2);
  switch (p) {
    case Pauli::I:
    case Pauli::Z:
      return identity(2);
    case Pauli::X:
      m << r, r, r, -r;
      return m;
    case Pauli::Y:
      // H * S^dagger
      m << r, Complex(0.0, -r), r, Complex(0.0, r);
      return m;
  }
  return m;
}

using BasisMap = std::map<int, Pauli>;

/// Measurement basis per site for a Pauli string; unlisted sites read Z.
inline BasisMap bases_for(const PauliString &obs) { return BasisMap(obs.ops().begin(), obs.ops().end()); }

struct ShotRecord {
  /// site -> +1 / -1
  std::map<int, int> outcomes;
  /// site -> measured Pauli; I for sites outside the observable.
  std::map<int, Pauli> basis;
  /// Product of outcomes over sites with a non-identity basis.
  int product = 1;
};

namespace detail {

inline std::mt19937_64 shot_stream(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32), 0x5eedU};
  return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Pauli basis_of(const BasisMap &bases, int site) {
  const auto it = bases.find(site);
  return it == bases.end() ? Pauli::I : it->second;
}

inline const Matrix &pauli_matrix(Pauli p) {
  static const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix y = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Matrix z = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  static const Matrix i = identity(2);
  switch (p) {
    case Pauli::X: return x;
    case Pauli::Y: return y;
    case Pauli::Z: return z;
    default: return i;
  }
}

}  // namespace detail

namespace detail {

// Gate matrices built once per program rather than once per shot.
struct PreparedProgram {
  const GateProgram *prog;
  std::vector<Matrix> matrices;  // indexed like prog->events; empty for non-gates

  explicit PreparedProgram(const GateProgram &p) : prog(&p), matrices(p.events.size()) {
    p.validate();
    for (std::size_t i = 0; i < p.events.size(); ++i) {
      if (const auto *g = std::get_if<GateSpec>(&p.events[i])) matrices[i] = g->matrix();
    }
  }
};

inline ShotRecord run_prepared_shot(const PreparedProgram &pp, const BasisMap &bases, std::uint64_t seed,
                                    std::uint64_t shot_index) {
  const GateProgram &prog = *pp.prog;
  std::mt19937_64 rng = shot_stream(seed, shot_index);
  RegisterState state(prog.n_qubits);
  ShotRecord rec;
  int last_outcome = 0;
  int last_qubit = -1;
  for (std::size_t i = 0; i < prog.events.size(); ++i) {
    const Event &e = prog.events[i];
    if (const auto *g = std::get_if<GateSpec>(&e)) {
      state.apply(pp.matrices[i], g->qubits);
    } else if (const auto *m = std::get_if<MeasureEvent>(&e)) {
      const Pauli b = basis_of(bases, m->site);
      if (b == Pauli::X || b == Pauli::Y) state.apply(basis_change(b), std::span<const int>(&m->qubit, 1));
      const double p1 = state.prob_one(m->qubit);
      const int bit = uniform01(rng) < p1 ? 1 : 0;
      state.project(m->qubit, bit);
      const int value = bit ? -1 : 1;
      rec.outcomes[m->site] = value;
      rec.basis[m->site] = b;
      if (b != Pauli::I) rec.product *= value;
      last_outcome = bit;
      last_qubit = m->qubit;
    } else if (const auto *r = std::get_if<ResetEvent>(&e)) {
      if (r->qubit != last_qubit) throw InvariantViolation("run_shot: reset without a preceding measure");
      state.reset_known(r->qubit, last_outcome);
      last_qubit = -1;
    } else if (const auto *d = std::get_if<DepolarizeEvent>(&e)) {
      if (uniform01(rng) < d->p) {
        const auto which = static_cast<Pauli>(1 + static_cast<int>(rng() % 3));
        state.apply(pauli_matrix(which), std::span<const int>(&d->qubit, 1));
      }
    }
  }
  return rec;
}

}  // namespace detail

/// Simulates one shot with its own random stream derived from (seed, shot_index).
inline ShotRecord run_shot(const GateProgram &prog, const BasisMap &bases, std::uint64_t seed,
                           std::uint64_t shot_index = 0) {
  return detail::run_prepared_shot(detail::PreparedProgram(prog), bases, seed, shot_index);
}

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::vector<ShotRecord> shots;
};

/// Sample mean of the per-shot products of `obs` (its phase is ignored) and
/// the standard error s / sqrt(shots), with s the sample standard deviation.
inline Estimate estimate_observable(const GateProgram &prog, const PauliString &obs, std::size_t shots,
                                    std::uint64_t seed, bool keep_shots = false) {
  if (shots < 1) throw InvalidArgument("estimate_observable: shots must be >= 1");
  const BasisMap bases = bases_for(obs);
  Estimate est;
  double sum = 0.0;
  double sum_sq = 0.0;
  const detail::PreparedProgram pp(prog);
  for (std::size_t s = 0; s < shots; ++s) {
    ShotRecord rec = detail::run_prepared_shot(pp, bases, seed, s);
    sum += rec.product;
    sum_sq += static_cast<double>(rec.product) * rec.product;
    if (keep_shots) est.shots.push_back(std::move(rec));
  }
  const auto n = static_cast<double>(shots);
  est.mean = sum / n;
  if (shots > 1) {
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.standard_error = std::sqrt(var / n);
  }
  return est;
}

struct ExactResult {
  double value = 0.0;
  double total_probability = 0.0;
  std::size_t branches = 0;
};

inline constexpr int kMaxBranchMeasurements = 20;

/// Sum over all measurement branches of p(branch) * product(branch), dropping
/// branches below the pruning threshold. The phase of `obs` is ignored.
inline ExactResult exact_observable_detail(const GateProgram &prog, const PauliString &obs) {
  const detail::PreparedProgram pp(prog);
  if (prog.is_noisy()) throw Unsupported("exact_observable: noisy programs are only supported in sampling mode");
  if (prog.measure_count() > kMaxBranchMeasurements) {
    throw InvalidArgument("exact_observable: too many measurements for branch enumeration");
  }
  const BasisMap bases = bases_for(obs);
  ExactResult res;
  // Depth-first over events; the state is copied at each measurement split.
  std::function<void(std::size_t, RegisterState &, double, int)> walk =
      [&](std::size_t i, RegisterState &state, double prob, int sign) {
        for (; i < prog.events.size(); ++i) {
          const Event &e = prog.events[i];
          if (const auto *g = std::get_if<GateSpec>(&e)) {
            state.apply(pp.matrices[i], g->qubits);
          } else if (const auto *m = std::get_if<MeasureEvent>(&e)) {
            const Pauli b = detail::basis_of(bases, m->site);
            if (b == Pauli::X || b == Pauli::Y) state.apply(basis_change(b), std::span<const int>(&m->qubit, 1));
            const double p1 = state.prob_one(m->qubit);
            const double p0 = 1.0 - p1;
            const int flip = b == Pauli::I ? 1 : -1;
            // Event i + 1 is the reset; continue after it.
            if (p1 * prob >= tol::kBranchPrune) {
              RegisterState branch = state;
              branch.project(m->qubit, 1);
              branch.reset_known(m->qubit, 1);
              walk(i + 2, branch, prob * p1, sign * flip);
            }
            if (p0 * prob < tol::kBranchPrune) return;
            state.project(m->qubit, 0);
            prob *= p0;
            ++i;  // skip the reset: qubit is already |0>
          }
          // Resets only follow measurements and are handled there.
        }
        res.value += prob * sign;
        res.total_probability += prob;
        ++res.branches;
      };
  RegisterState start(prog.n_qubits);
  walk(0, start, 1.0, 1);
  return res;
}

inline double exact_observable(const GateProgram &prog, const PauliString &obs) {
  return exact_observable_detail(prog, obs).value;
}

/// Copy of `prog` with a depolarizing event on every qubit touched by each gate.
inline GateProgram apply_depolarizing(const GateProgram &prog, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("apply_depolarizing: p must lie in [0, 1]");
  GateProgram out = prog;
  out.events.clear();
  for (const Event &e : prog.events) {
    out.events.push_back(e);
    if (const auto *g = std::get_if<GateSpec>(&e)) {
      for (int q : g->qubits) out.events.emplace_back(DepolarizeEvent{q, p});
    }
  }
  return out;
}

/// CSV shot log: shot_index, site_1..site_N outcomes, product.
inline void write_shot_csv(std::ostream &os, const std::vector<ShotRecord> &shots, int n_sites) {
  os << "shot_index";
  for (int s = 1; s <= n_sites; ++s) os << ",site_" << s;
  os << ",product\n";
  for (std::size_t i = 0; i < shots.size(); ++i) {
    os << i;
    for (int s = 1; s <= n_sites; ++s) {
      const auto it = shots[i].outcomes.find(s);
      os << ',' << (it == shots[i].outcomes.end() ? 0 : it->second);
    }
    os << ',' << shots[i].product << '\n';
  }
}

}  // namespace pepsq

#endif  // PEPSQ_SIMULATOR_HPP
