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

// Lowering of PEPS networks to measure-and-reuse gate programs.
//
// Sites are visited in zig-zag order: row 0 left to right, row 1 right to
// left, and so on. Horizontal bonds point along the direction of travel and
// vertical bonds point down, so every bond is produced by exactly one earlier
// site and consumed by exactly one later site. Each site is embedded in a
// unitary whose extra inputs start in |0>; its physical output is measured
// and the qubit reset for reuse. The final row is, by default, one large
// unitary acting on the vertical bonds that enter it.

#ifndef PEPSQ_COMPILER_HPP
#define PEPSQ_COMPILER_HPP

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/gates.hpp"
#include "pepsq/peps.hpp"
#include "pepsq/program.hpp"
#include "pepsq/tensor.hpp"

namespace pepsq {

/// Grid of `rows` zig-zag rows with `cols` sites each; bonds carried on
/// `bond_qubits` qubits (chi = 2^bond_qubits).
struct LatticeShape {
  int rows = 3;
  int cols = 3;
  int bond_qubits = 1;

  int sites() const { return rows * cols; }

  void validate() const {
    if (rows < 1 || cols < 1) throw InvalidArgument("LatticeShape: rows and cols must be >= 1");
    if (bond_qubits < 1) throw InvalidArgument("LatticeShape: bond_qubits must be >= 1");
  }
};

/// (N + 1) * N_B + 1, where N is the number of sites per zig-zag row.
inline int qubit_count(const LatticeShape &shape) {
  shape.validate();
  return (shape.cols + 1) * shape.bond_qubits + 1;
}

inline bool is_qubit_efficient(const LatticeShape &shape) {
  return qubit_count(shape) < shape.sites();
}

struct ZigzagStep {
  int site = 0;  // 1-based row-major label
  int row = 0;
  int col = 0;
  /// Up first, then the incoming horizontal bond.
  std::vector<Bond> inputs;
  /// Outgoing horizontal bond first, then Down.
  std::vector<Bond> outputs;
};

inline std::vector<ZigzagStep> zigzag_order(const LatticeShape &shape) {
  shape.validate();
  std::vector<ZigzagStep> steps;
  for (int r = 0; r < shape.rows; ++r) {
    const bool forward = r % 2 == 0;
    for (int k = 0; k < shape.cols; ++k) {
      const int c = forward ? k : shape.cols - 1 - k;
      ZigzagStep s;
      s.site = r * shape.cols + c + 1;
      s.row = r;
      s.col = c;
      if (r > 0) s.inputs.push_back(Bond::Up);
      if (k > 0) s.inputs.push_back(forward ? Bond::Left : Bond::Right);
      if (k + 1 < shape.cols) s.outputs.push_back(forward ? Bond::Right : Bond::Left);
      if (r + 1 < shape.rows) s.outputs.push_back(Bond::Down);
      steps.push_back(std::move(s));
    }
  }
  return steps;
}

enum class FinalRowStrategy { SingleUnitary, ZigZag };

namespace detail {

inline int neighbour(int site, Bond b, int cols) {
  switch (b) {
    case Bond::Up: return site - cols;
    case Bond::Down: return site + cols;
    case Bond::Left: return site - 1;
    case Bond::Right: return site + 1;
  }
  return 0;
}

inline std::pair<int, int> edge_key(int site, Bond b, int cols) {
  const int other = neighbour(site, b, cols);
  return {std::min(site, other), std::max(site, other)};
}

inline int ceil_log2(std::size_t d) {
  int q = 0;
  while ((std::size_t{1} << q) < d) ++q;
  return q;
}

// Lowest-free-index qubit allocation with peak tracking.
class QubitPool {
 public:
  explicit QubitPool(int capacity) : busy_(static_cast<std::size_t>(capacity), false) {}

  int acquire() {
    for (std::size_t q = 0; q < busy_.size(); ++q) {
      if (!busy_[q]) {
        busy_[q] = true;
        ++live_;
        peak_ = std::max(peak_, live_);
        return static_cast<int>(q);
      }
    }
    throw InvariantViolation("compiler: qubit usage exceeds the register size " +
                             std::to_string(busy_.size()));
  }

  void release(int q) {
    if (!busy_.at(static_cast<std::size_t>(q))) throw InvariantViolation("compiler: double release");
    busy_[static_cast<std::size_t>(q)] = false;
    --live_;
  }

  int peak() const { return peak_; }

 private:
  std::vector<bool> busy_;
  int live_ = 0;
  int peak_ = 0;
};

// Bond wires currently alive, keyed by lattice edge.
class WireTable {
 public:
  void put(std::pair<int, int> edge, std::vector<int> qubits) {
    if (!wires_.emplace(edge, std::move(qubits)).second) {
      throw InvariantViolation("compiler: bond produced twice");
    }
  }
  std::vector<int> take(std::pair<int, int> edge) {
    const auto it = wires_.find(edge);
    if (it == wires_.end()) throw InvariantViolation("compiler: bond consumed before it was produced");
    std::vector<int> q = std::move(it->second);
    wires_.erase(it);
    return q;
  }
  bool empty() const { return wires_.empty(); }

 private:
  std::map<std::pair<int, int>, std::vector<int>> wires_;
};

inline void emit_measure_reset(GateProgram &prog, QubitPool &pool, int qubit, int site) {
  prog.site_map[prog.measure_count()] = site;
  prog.events.emplace_back(MeasureEvent{qubit, site, Pauli::Z});
  prog.events.emplace_back(ResetEvent{qubit});
  pool.release(qubit);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parameterized layout (MS-based blocks, one qubit per bond).
// ---------------------------------------------------------------------------

/// Role of one gate position: where its input comes from, or where its output goes.
enum class Port { Fresh, Physical, Up, Down, Left, Right };

inline Port port_of(Bond b) {
  switch (b) {
    case Bond::Up: return Port::Up;
    case Bond::Down: return Port::Down;
    case Bond::Left: return Port::Left;
    case Bond::Right: return Port::Right;
  }
  return Port::Fresh;
}

inline Bond bond_of(Port p) {
  switch (p) {
    case Port::Up: return Bond::Up;
    case Port::Down: return Bond::Down;
    case Port::Left: return Bond::Left;
    case Port::Right: return Bond::Right;
    default: throw InvalidArgument("bond_of: port is not a bond");
  }
}

/// One parameterized block of the layout.
struct BlockPlan {
  /// Lattice site owning each gate position.
  std::vector<int> position_sites;
  std::vector<Port> inputs;
  std::vector<Port> outputs;
  std::size_t param_offset = 0;
  std::size_t param_count = 0;
  bool final_row = false;

  std::size_t width() const { return inputs.size(); }

  std::vector<int> fresh_positions() const {
    std::vector<int> f;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (inputs[k] == Port::Fresh) f.push_back(static_cast<int>(k));
    }
    return f;
  }
};

inline std::string parameterized_layout_id(const LatticeShape &shape) {
  return "ms-zigzag-" + std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

/// Inverse of parameterized_layout_id.
inline LatticeShape shape_from_layout_id(const std::string &id) {
  static const std::regex re(R"(^[a-z-]+-(\d+)x(\d+)$)");
  std::smatch m;
  if (!std::regex_match(id, m, re)) throw InvalidArgument("unrecognized layout_id '" + id + "'");
  return {std::stoi(m[1].str()), std::stoi(m[2].str()), 1};
}

/// Blocks in program order.
///
/// Rows other than the last: a site with three outputs (physical, outgoing
/// horizontal, down) is a ThreeQubitBlock with outputs (down, physical,
/// horizontal) on positions (0, 1, 2); a single input sits on position 1, two
/// inputs (up, horizontal) on positions 0 and 1. The last site of a row has
/// outputs (physical, down) on a TwoQubitBlock, inputs from position 0.
/// The final row is one block whose position k is column k: up bond in,
/// physical out. Three columns give a ThreeQubitBlock; wider rows a staggered
/// chain of TwoQubitBlocks on positions (k, k+1).
inline std::vector<BlockPlan> parameterized_layout(const LatticeShape &shape) {
  shape.validate();
  if (shape.bond_qubits != 1) throw InvalidArgument("parameterized layout requires bond_qubits == 1");
  if (shape.cols < 2) throw InvalidArgument("parameterized layout requires at least 2 columns");
  std::vector<BlockPlan> plans;
  std::size_t offset = 0;
  for (const ZigzagStep &step : zigzag_order(shape)) {
    if (step.row == shape.rows - 1) break;
    BlockPlan b;
    b.outputs.push_back(Port::Physical);
    for (Bond o : step.outputs) b.outputs.push_back(port_of(o));
    if (b.outputs.size() == 3) {
      // (physical, horizontal, down) -> (down, physical, horizontal)
      b.outputs = {b.outputs[2], b.outputs[0], b.outputs[1]};
      b.inputs.assign(3, Port::Fresh);
      if (step.inputs.size() == 1) {
        b.inputs[1] = port_of(step.inputs[0]);
      } else if (step.inputs.size() == 2) {
        b.inputs[0] = port_of(step.inputs[0]);
        b.inputs[1] = port_of(step.inputs[1]);
      }
    } else {
      b.inputs.assign(2, Port::Fresh);
      for (std::size_t k = 0; k < step.inputs.size(); ++k) b.inputs[k] = port_of(step.inputs[k]);
    }
    b.position_sites.assign(b.inputs.size(), step.site);
    b.param_count = b.inputs.size() == 3 ? kThreeQubitBlockParams : kTwoQubitBlockParams;
    b.param_offset = offset;
    offset += b.param_count;
    plans.push_back(std::move(b));
  }
  BlockPlan last;
  last.final_row = true;
  const int r = shape.rows - 1;
  for (int c = 0; c < shape.cols; ++c) {
    last.position_sites.push_back(r * shape.cols + c + 1);
    last.inputs.push_back(shape.rows > 1 ? Port::Up : Port::Fresh);
    last.outputs.push_back(Port::Physical);
  }
  last.param_offset = offset;
  last.param_count = kTwoQubitBlockParams * static_cast<std::size_t>(shape.cols - 1);
  plans.push_back(std::move(last));
  return plans;
}

inline std::size_t parameter_count(const LatticeShape &shape) {
  const auto plans = parameterized_layout(shape);
  return plans.back().param_offset + plans.back().param_count;
}

/// Gate specs realizing one block on the given register qubits.
inline std::vector<GateSpec> block_gates(const BlockPlan &b, std::span<const double> theta,
                                         const std::vector<int> &qubits) {
  const auto p = theta.subspan(b.param_offset, b.param_count);
  auto params = [&](std::size_t from, std::size_t n) {
    return std::vector<double>(p.begin() + static_cast<std::ptrdiff_t>(from),
                               p.begin() + static_cast<std::ptrdiff_t>(from + n));
  };
  if (b.width() == 2) return {GateSpec{GateKind::TwoQubitBlock, params(0, 12), qubits, {}}};
  if (b.width() == 3) return {GateSpec{GateKind::ThreeQubitBlock, params(0, 24), qubits, {}}};
  std::vector<GateSpec> chain;
  for (std::size_t k = 0; k + 1 < b.width(); ++k) {
    chain.push_back(GateSpec{GateKind::TwoQubitBlock, params(12 * k, 12), {qubits[k], qubits[k + 1]}, {}});
  }
  return chain;
}

/// Full unitary of one block, position 0 most significant.
inline Matrix block_unitary(const BlockPlan &b, std::span<const double> theta) {
  const auto p = theta.subspan(b.param_offset, b.param_count);
  if (b.width() == 2) return two_qubit_block(p);
  if (b.width() == 3) return three_qubit_block(p);
  const auto n = static_cast<Eigen::Index>(b.width());
  Matrix u = identity(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Matrix blk = two_qubit_block(p.subspan(static_cast<std::size_t>(12 * k), 12));
    u = kron(kron(identity(Eigen::Index{1} << k), blk), identity(Eigen::Index{1} << (n - k - 2))) * u;
  }
  return u;
}

namespace detail {

inline void check_theta(const LatticeShape &shape, std::span<const double> theta) {
  const std::size_t want = parameter_count(shape);
  if (theta.size() != want) {
    throw InvalidArgument("parameter count mismatch: layout " + parameterized_layout_id(shape) + " takes " +
                          std::to_string(want) + ", got " + std::to_string(theta.size()));
  }
}

}  // namespace detail

inline GateProgram compile_parameterized(const LatticeShape &shape, std::span<const double> theta) {
  detail::check_theta(shape, theta);
  GateProgram prog;
  prog.n_qubits = qubit_count(shape);
  prog.layout_id = parameterized_layout_id(shape);
  detail::QubitPool pool(prog.n_qubits);
  detail::WireTable wires;
  for (const BlockPlan &b : parameterized_layout(shape)) {
    std::vector<int> qubits;
    for (std::size_t k = 0; k < b.width(); ++k) {
      if (b.inputs[k] == Port::Fresh) {
        qubits.push_back(pool.acquire());
      } else {
        qubits.push_back(wires.take(detail::edge_key(b.position_sites[k], bond_of(b.inputs[k]), shape.cols)).at(0));
      }
    }
    for (GateSpec &g : block_gates(b, theta, qubits)) prog.events.emplace_back(std::move(g));
    for (std::size_t k = 0; k < b.width(); ++k) {
      if (b.outputs[k] == Port::Physical) continue;
      wires.put(detail::edge_key(b.position_sites[k], bond_of(b.outputs[k]), shape.cols), {qubits[k]});
    }
    for (std::size_t k = 0; k < b.width(); ++k) {
      if (b.outputs[k] == Port::Physical) detail::emit_measure_reset(prog, pool, qubits[k], b.position_sites[k]);
    }
  }
  if (!wires.empty()) throw InvariantViolation("compile_parameterized: dangling bond wires");
  prog.validate();
  return prog;
}

namespace detail {

// Moves the axes of a block tensor into PEPS order [physical, Up, Down, Left,
// Right]. `axis_ports` names the port carried by each axis of `t`.
inline Tensor to_peps_axes(const Tensor &t, const std::vector<Port> &axis_ports) {
  static constexpr Port kOrder[] = {Port::Physical, Port::Up, Port::Down, Port::Left, Port::Right};
  std::vector<std::size_t> perm;
  for (Port want : kOrder) {
    for (std::size_t a = 0; a < axis_ports.size(); ++a) {
      if (axis_ports[a] == want) perm.push_back(a);
    }
  }
  if (perm.size() != axis_ports.size()) throw InvariantViolation("to_peps_axes: unmapped axis");
  return t.permuted(perm);
}

}  // namespace detail

/// PEPS whose contraction equals the joint outcome amplitudes of
/// compile_parameterized(shape, theta).
inline PepsNetwork tensors_from_parameters(const LatticeShape &shape, std::span<const double> theta) {
  detail::check_theta(shape, theta);
  std::vector<Tensor> tensors(static_cast<std::size_t>(shape.sites()));
  std::size_t chi = 1;
  for (const BlockPlan &b : parameterized_layout(shape)) {
    const Matrix u = block_unitary(b, theta);
    const std::vector<int> fresh = b.fresh_positions();
    if (!b.final_row) {
      std::vector<Port> axis_ports;
      for (Port p : b.inputs) {
        if (p != Port::Fresh) axis_ports.push_back(p);
      }
      axis_ports.insert(axis_ports.end(), b.outputs.begin(), b.outputs.end());
      tensors[static_cast<std::size_t>(b.position_sites[0] - 1)] =
          detail::to_peps_axes(unitary_to_tensor(u, fresh), axis_ports);
      continue;
    }
    const RowSplit row = split_row_unitary(u, fresh);
    for (std::size_t k = 0; k < row.sites.size(); ++k) {
      // [p, up, left, right] with dimension-1 axes where the bond is absent.
      const Tensor &t = row.sites[k];
      Shape s{t.dim(0)};
      if (shape.rows > 1) s.push_back(t.dim(1));
      if (k > 0) s.push_back(t.dim(2));
      if (k + 1 < row.sites.size()) s.push_back(t.dim(3));
      for (std::size_t a = 1; a < s.size(); ++a) chi = std::max(chi, s[a]);
      tensors[static_cast<std::size_t>(b.position_sites[k] - 1)] = t.reshaped(s);
    }
  }
  chi = std::max<std::size_t>(chi, 2);
  return PepsNetwork(shape.rows, shape.cols, chi, std::move(tensors));
}

// ---------------------------------------------------------------------------
// General tensor -> unitary path.
// ---------------------------------------------------------------------------

struct CompileOptions {
  FinalRowStrategy final_row = FinalRowStrategy::SingleUnitary;
  double isometry_tolerance = tol::kUserIsometry;
};

namespace detail {

// A group of bonds (each d-dimensional, carried on ceil(log2 d) qubits)
// flattened into one index, first bond most significant.
struct BondGroup {
  std::vector<std::size_t> dims;

  std::size_t volume() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  }
  int qubits() const {
    int q = 0;
    for (std::size_t d : dims) q += ceil_log2(d);
    return q;
  }
  // Mixed-radix index -> padded binary index over qubits().
  std::size_t padded(std::size_t index) const {
    std::size_t out = 0;
    std::size_t rest = index;
    std::size_t radix = volume();
    for (std::size_t d : dims) {
      radix /= d;
      const std::size_t v = rest / radix;
      rest %= radix;
      out = (out << ceil_log2(d)) | v;
    }
    return out;
  }
};

// Closest isometry (polar factor) of a matrix with full column rank.
inline Matrix orthonormalize(const Matrix &v) {
  Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Embeds the map `v` (rows indexed by the output group, columns by the input
// group, both mixed-radix) into a unitary on out.qubits() qubits whose
// leading positions carry the inputs and trailing positions start in |0>.
inline Matrix embed_isometry(const Matrix &v, const BondGroup &in, const BondGroup &out, int site,
                             double tolerance) {
  const int n = out.qubits();
  if (in.qubits() > n) {
    throw InvariantViolation("compile_tensors: site " + std::to_string(site) +
                             " has more input than output qubits; cannot embed");
  }
  const double residual = isometry_residual(v);
  if (residual > tolerance) {
    throw InvariantViolation("compile_tensors: isometry violation at site " + std::to_string(site) +
                             " (residual " + std::to_string(residual) + ")");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix padded_v = Matrix::Zero(dim, v.cols());
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    padded_v.row(static_cast<Eigen::Index>(out.padded(static_cast<std::size_t>(r)))) = v.row(r);
  }
  const Matrix w = complete_isometry(orthonormalize(padded_v));
  const int fresh = n - in.qubits();
  Matrix u(dim, dim);
  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const auto col = static_cast<Eigen::Index>(in.padded(static_cast<std::size_t>(j)) << fresh);
    u.col(col) = w.col(j);
    used[static_cast<std::size_t>(col)] = true;
  }
  Eigen::Index next = v.cols();
  for (Eigen::Index col = 0; col < dim; ++col) {
    if (!used[static_cast<std::size_t>(col)]) u.col(col) = w.col(next++);
  }
  return u;
}

struct TensorCompiler {
  const PepsNetwork &net;
  const CompileOptions &options;
  GateProgram prog;
  QubitPool pool;
  WireTable wires;

  TensorCompiler(const PepsNetwork &n, const CompileOptions &o, int capacity)
      : net(n), options(o), pool(capacity) {}

  int cols() const { return net.cols(); }

  std::vector<int> take_inputs(int site, const std::vector<Bond> &bonds) {
    std::vector<int> qubits;
    for (Bond b : bonds) {
      const auto q = wires.take(edge_key(site, b, cols()));
      qubits.insert(qubits.end(), q.begin(), q.end());
    }
    return qubits;
  }

  void emit_gate(Matrix u, std::vector<int> &qubits, int n) {
    while (static_cast<int>(qubits.size()) < n) qubits.push_back(pool.acquire());
    GateSpec g{GateKind::CustomUnitary, {}, qubits, std::move(u)};
    prog.events.emplace_back(std::move(g));
  }

  void site(const ZigzagStep &step) {
    const int r = step.row;
    const int c = step.col;
    const Tensor &t = net.at(r, c);
    BondGroup in;
    BondGroup out{{2}};
    for (Bond b : step.inputs) in.dims.push_back(net.bond_dim(r, c, b));
    for (Bond b : step.outputs) out.dims.push_back(net.bond_dim(r, c, b));
    // Reorder the tensor as [outputs: phys, out bonds..., inputs...].
    std::vector<std::size_t> perm{0};
    for (Bond b : step.outputs) perm.push_back(*net.axis_of(r, c, b));
    for (Bond b : step.inputs) perm.push_back(*net.axis_of(r, c, b));
    const Matrix v = t.permuted(perm).to_matrix(step.outputs.size() + 1);
    const Matrix u = embed_isometry(v, in, out, step.site, options.isometry_tolerance);
    std::vector<int> qubits = take_inputs(step.site, step.inputs);
    emit_gate(u, qubits, out.qubits());
    std::size_t pos = 1;
    for (std::size_t k = 0; k < step.outputs.size(); ++k) {
      const auto nq = static_cast<std::size_t>(ceil_log2(out.dims[k + 1]));
      wires.put(edge_key(step.site, step.outputs[k], cols()),
                std::vector<int>(qubits.begin() + static_cast<std::ptrdiff_t>(pos),
                                 qubits.begin() + static_cast<std::ptrdiff_t>(pos + nq)));
      pos += nq;
    }
    for (std::size_t k = pos; k < qubits.size(); ++k) pool.release(qubits[k]);
    emit_measure_reset(prog, pool, qubits[0], step.site);
  }

  // Columns [first, last] of the final row as one unitary.
  void final_segment(int first, int last) {
    const int r = net.rows() - 1;
    std::vector<Tensor> row;
    BondGroup in;
    BondGroup out;
    std::vector<int> qubits;
    for (int c = first; c <= last; ++c) {
      const Tensor &t = net.at(r, c);
      const std::size_t up = net.bond_dim(r, c, Bond::Up);
      const std::size_t left = c > first ? net.bond_dim(r, c, Bond::Left) : 1;
      const std::size_t right = c < last ? net.bond_dim(r, c, Bond::Right) : 1;
      row.push_back(t.reshaped({2, up, left, right}));
      in.dims.push_back(up);
      out.dims.push_back(2);
      if (r > 0) {
        const auto q = wires.take(edge_key(r * cols() + c + 1, Bond::Up, cols()));
        qubits.insert(qubits.end(), q.begin(), q.end());
      }
    }
    // (p0, u0, p1, u1, ...) -> (p0, p1, ..., u0, u1, ...)
    const Tensor map = recontract_row(row);
    const auto n = static_cast<std::size_t>(last - first + 1);
    std::vector<std::size_t> perm;
    for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k);
    for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);
    const Matrix v = map.permuted(perm).to_matrix(n);
    const Matrix u = embed_isometry(v, in, out, r * cols() + first + 1, options.isometry_tolerance);
    emit_gate(u, qubits, out.qubits());
    for (std::size_t k = 0; k < n; ++k) {
      emit_measure_reset(prog, pool, qubits[k], r * cols() + first + static_cast<int>(k) + 1);
    }
  }
};

}  // namespace detail

inline std::string tensor_layout_id(const PepsNetwork &p, FinalRowStrategy s) {
  return std::string(s == FinalRowStrategy::SingleUnitary ? "tensor-zigzag-" : "tensor-zigzag-rowwise-") +
         std::to_string(p.rows()) + "x" + std::to_string(p.cols());
}

/// Lowers a network whose tensors are isometries along the zig-zag causal
/// order (inputs: up and incoming horizontal bonds; outputs: physical,
/// outgoing horizontal and down bonds). Bonds of dimension d use
/// ceil(log2 d) qubits, so dimension-1 bonds cost nothing.
inline GateProgram compile_tensors(const PepsNetwork &p, const CompileOptions &options = {}) {
  p.validate();
  const bool single = options.final_row == FinalRowStrategy::SingleUnitary;
  // Qubits per carried bond; in-row bonds of a single-unitary final row are internal.
  int bond_qubits = 1;
  for (int r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < p.cols(); ++c) {
      if (r + 1 < p.rows()) bond_qubits = std::max(bond_qubits, detail::ceil_log2(p.bond_dim(r, c, Bond::Down)));
      if (c + 1 < p.cols() && !(single && r + 1 == p.rows())) {
        bond_qubits = std::max(bond_qubits, detail::ceil_log2(p.bond_dim(r, c, Bond::Right)));
      }
    }
  }
  const LatticeShape shape{p.rows(), p.cols(), bond_qubits};
  detail::TensorCompiler tc(p, options, qubit_count(shape));
  tc.prog.n_qubits = qubit_count(shape);
  tc.prog.layout_id = tensor_layout_id(p, options.final_row);
  for (const ZigzagStep &step : zigzag_order(shape)) {
    if (single && step.row == p.rows() - 1) break;
    tc.site(step);
  }
  if (single) {
    // Independent segments where the in-row bond has dimension 1.
    const int r = p.rows() - 1;
    int first = 0;
    for (int c = 0; c < p.cols(); ++c) {
      if (c + 1 == p.cols() || p.bond_dim(r, c, Bond::Right) == 1) {
        tc.final_segment(first, c);
        first = c + 1;
      }
    }
  }
  if (!tc.wires.empty()) throw InvariantViolation("compile_tensors: dangling bond wires");
  tc.prog.validate();
  return tc.prog;
}

}  // namespace pepsq

#endif  // PEPSQ_COMPILER_HPP
