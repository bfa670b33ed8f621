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

// Pauli algebra, the Wen plaquette model on an open grid, and the exact
// diagonalization oracle.
//
// Sites are 1-based and row-major: on a 3x3 grid the top row is 1 2 3 and
// the bottom row 7 8 9. In state vectors site 1 is the most significant bit.

#ifndef PEPSQ_LATTICE_HPP
#define PEPSQ_LATTICE_HPP

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pepsq/common.hpp"

namespace pepsq {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw InvalidArgument(std::string("unknown Pauli '") + c + "'");
  }
}

/// Single-site product a*b = phase * c, with phase in {1, i, -i}.
inline std::pair<Complex, Pauli> multiply(Pauli a, Pauli b) {
  if (a == Pauli::I) return {1.0, b};
  if (b == Pauli::I) return {1.0, a};
  if (a == b) return {1.0, Pauli::I};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  const auto c = static_cast<Pauli>(6 - ia - ib);
  // XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? Complex{0.0, 1.0} : Complex{0.0, -1.0}, c};
}

/// phase * (tensor product of single-site Paulis). Sites absent from `ops`
/// carry the identity.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::map<int, Pauli> ops, Complex phase = 1.0) : phase_(phase) {
    for (const auto &[site, p] : ops) set(site, p);
    check_phase();
  }

  /// Parses "X1 Y2 Z5" style strings; an optional leading '-' or 'i' sets the phase.
  static PauliString parse(const std::string &text) {
    PauliString out;
    std::size_t pos = 0;
    auto skip = [&] {
      while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    skip();
    while (pos < text.size() && (text[pos] == '-' || text[pos] == '+' || text[pos] == 'i')) {
      if (text[pos] == '-') out.phase_ = -out.phase_;
      if (text[pos] == 'i') out.phase_ *= Complex{0.0, 1.0};
      ++pos;
      skip();
    }
    while (pos < text.size()) {
      const Pauli p = pauli_from_char(text[pos++]);
      std::size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      if (end == pos) throw InvalidArgument("PauliString::parse: missing site in '" + text + "'");
      out.set(std::stoi(text.substr(pos, end - pos)), p);
      pos = end;
      skip();
    }
    return out;
  }

  Complex phase() const { return phase_; }
  const std::map<int, Pauli> &ops() const { return ops_; }
  bool is_identity() const { return ops_.empty(); }
  int max_site() const { return ops_.empty() ? 0 : ops_.rbegin()->first; }

  Pauli at(int site) const {
    const auto it = ops_.find(site);
    return it == ops_.end() ? Pauli::I : it->second;
  }

  void set(int site, Pauli p) {
    if (site < 1) throw InvalidArgument("PauliString: site labels start at 1");
    if (p == Pauli::I) {
      ops_.erase(site);
    } else {
      ops_[site] = p;
    }
  }

  PauliString with_phase(Complex phase) const {
    PauliString out = *this;
    out.phase_ = phase;
    out.check_phase();
    return out;
  }

  std::string str() const {
    std::string s;
    if (phase_ == Complex{-1.0, 0.0}) s = "-";
    if (phase_ == Complex{0.0, 1.0}) s = "i";
    if (phase_ == Complex{0.0, -1.0}) s = "-i";
    bool first = true;
    for (const auto &[site, p] : ops_) {
      if (!first) s += ' ';
      s += pauli_char(p);
      s += std::to_string(site);
      first = false;
    }
    return s.empty() || s == "-" ? s + "I" : s;
  }

  friend bool operator==(const PauliString &a, const PauliString &b) {
    return a.phase_ == b.phase_ && a.ops_ == b.ops_;
  }

  friend PauliString operator*(const PauliString &a, const PauliString &b) {
    PauliString out;
    out.phase_ = a.phase_ * b.phase_;
    out.ops_ = a.ops_;
    for (const auto &[site, pb] : b.ops_) {
      const auto [ph, c] = multiply(a.at(site), pb);
      out.phase_ *= ph;
      out.set(site, c);
    }
    out.snap_phase();
    return out;
  }

 private:
  void check_phase() const {
    const double m = std::abs(phase_);
    if (std::abs(m - 1.0) > 1e-12 && m > 1e-12) {
      throw InvalidArgument("PauliString: |phase| must be 0 or 1");
    }
  }
  void snap_phase() {
    phase_ = {std::round(phase_.real()), std::round(phase_.imag())};
  }

  Complex phase_{1.0, 0.0};
  std::map<int, Pauli> ops_;
};

/// True when the two strings commute (an even number of anticommuting sites).
inline bool commutes(const PauliString &a, const PauliString &b) {
  int anti = 0;
  for (const auto &[site, pa] : a.ops()) {
    const Pauli pb = b.at(site);
    if (pb != Pauli::I && pb != pa) ++anti;
  }
  return anti % 2 == 0;
}

/// Real-weighted sum of Pauli strings. A +-1 phase is folded into the
/// coefficient, so equal operator patterns always merge.
class OperatorSum {
 public:
  struct Term {
    double coefficient;
    PauliString string;
  };

  OperatorSum() = default;

  void add(double coefficient, const PauliString &s) {
    if (!std::isfinite(coefficient)) throw InvalidArgument("OperatorSum: non-finite coefficient");
    Complex phase = s.phase();
    if (phase.imag() == 0.0) {
      coefficient *= phase.real();
      phase = 1.0;
    } else if (phase.imag() < 0.0) {
      coefficient = -coefficient;
      phase = Complex{0.0, 1.0};
    }
    const PauliString key = s.with_phase(phase);
    for (Term &t : terms_) {
      if (t.string == key) {
        t.coefficient += coefficient;
        return;
      }
    }
    terms_.push_back({coefficient, key});
  }

  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  int max_site() const {
    int m = 0;
    for (const Term &t : terms_) m = std::max(m, t.string.max_site());
    return m;
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum &b) {
    for (const Term &t : b.terms_) a.add(t.coefficient, t.string);
    return a;
  }

 private:
  std::vector<Term> terms_;
};

/// Wen plaquettes on an open rows x cols grid. x-hat is the next column and
/// y-hat the previous row, so every term is anchored at a site that has both a
/// right and an upper neighbour: X(i) Y(i+x) X(i+x+y) Y(i+y), coefficient -1.
inline OperatorSum wen_hamiltonian(int rows, int cols) {
  if (rows < 2 || cols < 2) throw InvalidArgument("wen_hamiltonian: grid must be at least 2x2");
  OperatorSum h;
  auto label = [cols](int r, int c) { return r * cols + c + 1; };
  for (int r = 1; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      h.add(-1.0, PauliString({{label(r, c), Pauli::X},
                               {label(r, c + 1), Pauli::Y},
                               {label(r - 1, c + 1), Pauli::X},
                               {label(r - 1, c), Pauli::Y}}));
    }
  }
  return h;
}

/// -g * sum_i (X_i + Y_i + Z_i). Empty when g == 0.
inline OperatorSum magnetic_term(int rows, int cols, double g) {
  if (rows < 1 || cols < 1) throw InvalidArgument("magnetic_term: grid must be nonempty");
  OperatorSum h;
  if (g == 0.0) return h;
  for (int site = 1; site <= rows * cols; ++site) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) h.add(-g, PauliString({{site, p}}));
  }
  return h;
}

/// Closed Pauli loop around the boundary of the 3x3 grid; equals the product
/// of the four plaquettes up to a sign.
inline PauliString boundary_loop(int rows = 3, int cols = 3) {
  if (rows != 3 || cols != 3) {
    // Product of every plaquette: a string supported on the boundary.
    const OperatorSum wen = wen_hamiltonian(rows, cols);
    PauliString loop;
    for (const auto &t : wen.terms()) loop = loop * t.string;
    if (loop.ops().empty()) throw InvalidArgument("boundary_loop: grid has no plaquettes");
    return loop.with_phase(1.0);
  }
  return PauliString({{1, Pauli::Y},
                      {2, Pauli::Z},
                      {3, Pauli::X},
                      {4, Pauli::Z},
                      {6, Pauli::Z},
                      {7, Pauli::X},
                      {8, Pauli::Z},
                      {9, Pauli::Y}});
}

inline constexpr int kMaxDenseSites = 14;

class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, std::vector<Complex> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < 0 || n_qubits > 30) throw InvalidArgument("StateVector: bad qubit count");
    if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
      throw InvalidArgument("StateVector: expected 2^n amplitudes");
    }
  }

  /// |0...0>
  static StateVector zero(int n_qubits) {
    std::vector<Complex> a(std::size_t{1} << n_qubits, 0.0);
    a[0] = 1.0;
    return {n_qubits, std::move(a)};
  }

  static StateVector from_eigen(const Vector &v) {
    int n = 0;
    while ((Eigen::Index{1} << n) < v.size()) ++n;
    return {n, std::vector<Complex>(v.data(), v.data() + v.size())};
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Complex> &amplitudes() const { return amplitudes_; }
  std::vector<Complex> &amplitudes() { return amplitudes_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  double norm() const {
    double s = 0.0;
    for (const Complex &z : amplitudes_) s += std::norm(z);
    return std::sqrt(s);
  }

  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("StateVector::normalized: zero vector");
    StateVector out = *this;
    for (Complex &z : out.amplitudes_) z /= n;
    return out;
  }

 private:
  int n_qubits_ = 0;
  std::vector<Complex> amplitudes_{1.0};
};

namespace detail {

// Masks describing how a Pauli string acts on computational basis states:
// P|b> = phase(b) |b ^ flip>.
struct PauliMasks {
  std::uint64_t flip = 0;
  std::uint64_t z_mask = 0;  // sites carrying Z or Y (contribute (-1)^bit)
  int y_count = 0;
};

inline PauliMasks masks_for(const PauliString &s, int n_sites) {
  PauliMasks m;
  for (const auto &[site, p] : s.ops()) {
    if (site > n_sites) throw InvalidArgument("Pauli string acts beyond the register");
    const std::uint64_t bit = std::uint64_t{1} << (n_sites - site);
    if (p == Pauli::X || p == Pauli::Y) m.flip |= bit;
    if (p == Pauli::Z || p == Pauli::Y) m.z_mask |= bit;
    if (p == Pauli::Y) ++m.y_count;
  }
  return m;
}

// Y = i X Z on a single site, so P|b> = s.phase * i^{#Y} * (-1)^{popcount(b & z)} |b ^ flip>.
inline Complex base_phase(const PauliString &s, const PauliMasks &m) {
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return s.phase() * kIPow[m.y_count % 4];
}

}  // namespace detail

/// Dense 2^n x 2^n matrix of the operator, site 1 most significant.
inline Matrix to_dense(const OperatorSum &op, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxDenseSites) {
    throw InvalidArgument("to_dense: site count outside the dense guard");
  }
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto &t : op.terms()) {
    const detail::PauliMasks m = detail::masks_for(t.string, n_sites);
    const Complex base = t.coefficient * detail::base_phase(t.string, m);
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const double sign = (std::popcount(b & m.z_mask) & 1) ? -1.0 : 1.0;
      h(static_cast<Eigen::Index>(b ^ m.flip), static_cast<Eigen::Index>(b)) += base * sign;
    }
  }
  return h;
}

inline Matrix to_dense(const PauliString &s, int n_sites) {
  OperatorSum op;
  if (s.phase().imag() == 0.0) {
    op.add(1.0, s);
    return to_dense(op, n_sites);
  }
  op.add(1.0, s.with_phase(1.0));
  return to_dense(op, n_sites) * s.phase();
}

struct GroundState {
  double energy;
  StateVector state;
};

namespace detail {

// Matrix-free action of a Hermitian Pauli sum on 2^n amplitudes.
class PauliSumAction {
 public:
  PauliSumAction(const OperatorSum &op, int n_sites) : dim_(std::uint64_t{1} << n_sites) {
    for (const auto &t : op.terms()) {
      const PauliMasks m = masks_for(t.string, n_sites);
      const Complex c = t.coefficient * base_phase(t.string, m);
      const Complex herm = t.coefficient * t.string.phase();
      if (std::abs(herm.imag()) > tol::kStructural * std::max(1.0, std::abs(herm))) {
        throw InvalidArgument("exact_ground: operator is not Hermitian");
      }
      terms_.push_back({m.flip, m.z_mask, c});
      bound_ += std::abs(c);
    }
  }

  // y = H x
  void apply(const Vector &x, Vector &y) const {
    y.setZero(static_cast<Eigen::Index>(dim_));
    for (const Term &t : terms_) {
      for (std::uint64_t b = 0; b < dim_; ++b) {
        const double sign = (std::popcount(b & t.z_mask) & 1) ? -1.0 : 1.0;
        y(static_cast<Eigen::Index>(b ^ t.flip)) += t.c * sign * x(static_cast<Eigen::Index>(b));
      }
    }
  }

  // Upper bound on the spectral norm.
  double bound() const { return bound_; }
  std::uint64_t dimension() const { return dim_; }

 private:
  struct Term {
    std::uint64_t flip;
    std::uint64_t z_mask;
    Complex c;
  };
  std::uint64_t dim_;
  std::vector<Term> terms_;
  double bound_ = 0.0;
};

// Lanczos with full reorthogonalization and explicit restarts from the
// current Ritz vector. Stops when the residual norm |H v - E v| falls below
// `tolerance`.
inline std::pair<double, Vector> lanczos_lowest(const PauliSumAction &h, double tolerance) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  const Eigen::Index krylov = std::min<Eigen::Index>(dim, 160);
  constexpr int kMaxRestarts = 200;

  // Fixed pseudo-random start so results are reproducible.
  Vector v(dim);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index i = 0; i < dim; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    v(i) = Complex(static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5,
                   static_cast<double>((state * 0x2545f4914f6cdd1dULL) >> 11) * 0x1.0p-53 - 0.5);
  }
  v.normalize();

  Matrix basis(dim, krylov);
  Vector w(dim);
  double best_residual = std::numeric_limits<double>::infinity();
  double energy = 0.0;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = v;
    Eigen::Index k = 0;
    for (; k < krylov; ++k) {
      h.apply(basis.col(k), w);
      alpha.push_back(basis.col(k).dot(w).real());
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Vector overlaps = basis.leftCols(k + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(k + 1) * overlaps;
      }
      const double b = w.norm();
      if (k + 1 == krylov || b <= tol::kStructural * std::max(1.0, h.bound())) {
        ++k;
        break;
      }
      // Cheap residual estimate of the lowest Ritz pair: b * |last component|.
      if ((k + 1) % 8 == 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> probe;
        probe.computeFromTridiagonal(Eigen::Map<Eigen::VectorXd>(alpha.data(), k + 1),
                                     Eigen::Map<Eigen::VectorXd>(beta.data(), k), Eigen::ComputeEigenvectors);
        if (b * std::abs(probe.eigenvectors()(k, 0)) <= 0.1 * tolerance) {
          ++k;
          break;
        }
      }
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    const Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    const Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), k - 1);
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    Vector ritz = basis.leftCols(k) * tri.eigenvectors().col(0).cast<Complex>();
    ritz.normalize();
    energy = tri.eigenvalues()(0);
    h.apply(ritz, w);
    const double residual = (w - energy * ritz).norm();
    v = ritz;
    if (residual <= tolerance) return {energy, v};
    // Stagnation at the rounding floor counts as converged.
    if (residual > 0.5 * best_residual && best_residual <= 1e3 * tolerance) return {energy, v};
    best_residual = std::min(best_residual, residual);
  }
  throw Error("exact_ground: Lanczos did not converge");
}

}  // namespace detail

/// Lowest eigenpair of a Hermitian Pauli sum. Small problems are diagonalized
/// densely; larger ones use matrix-free Lanczos converged to a residual of
/// 1e-13 times the operator norm bound.
inline GroundState exact_ground(const OperatorSum &op, int n_sites) {
  if (n_sites < 1 || n_sites > kMaxDenseSites) {
    throw InvalidArgument("exact_ground: site count outside the dense guard");
  }
  const detail::PauliSumAction action(op, n_sites);
  if (n_sites <= 6) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(to_dense(op, n_sites));
    if (solver.info() != Eigen::Success) throw Error("exact_ground: eigensolver failed");
    return {solver.eigenvalues()(0), StateVector::from_eigen(solver.eigenvectors().col(0))};
  }
  auto [energy, vec] = detail::lanczos_lowest(action, 1e-13 * std::max(1.0, action.bound()));
  return {energy, StateVector::from_eigen(vec)};
}

/// <psi| s |psi> without forming a matrix.
inline Complex expectation(const StateVector &psi, const PauliString &s) {
  const int n = psi.n_qubits();
  const detail::PauliMasks m = detail::masks_for(s, n);
  const Complex base = detail::base_phase(s, m);
  const auto &a = psi.amplitudes();
  Complex acc = 0.0;
  for (std::uint64_t b = 0; b < a.size(); ++b) {
    if (a[b] == Complex{0.0, 0.0}) continue;
    const double sign = (std::popcount(b & m.z_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(a[b ^ m.flip]) * a[b] * sign;
  }
  return acc * base;
}

inline Complex expectation(const StateVector &psi, const OperatorSum &op) {
  Complex acc = 0.0;
  for (const auto &t : op.terms()) acc += t.coefficient * expectation(psi, t.string);
  return acc;
}

}  // namespace pepsq

#endif  // PEPSQ_LATTICE_HPP
