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

#ifndef PEPSQ_PEPS_HPP
#define PEPSQ_PEPS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/lattice.hpp"
#include "pepsq/tensor.hpp"

namespace pepsq {

enum class Bond { Up = 0, Down = 1, Left = 2, Right = 3 };

/// Square-lattice PEPS with open boundaries.
///
/// Site tensors are stored row-major. Each tensor's axes are the physical
/// index (dimension 2) followed by whichever of Up, Down, Left, Right exist at
/// that site, in that order; boundary tensors simply omit absent bonds.
class PepsNetwork {
 public:
  PepsNetwork() = default;

  PepsNetwork(int rows, int cols, std::size_t chi, std::vector<Tensor> tensors)
      : rows_(rows), cols_(cols), chi_(chi), tensors_(std::move(tensors)) {
    validate();
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int sites() const { return rows_ * cols_; }
  std::size_t chi() const { return chi_; }

  const Tensor &at(int r, int c) const { return tensors_.at(index(r, c)); }
  /// 1-based row-major label.
  const Tensor &site(int label) const { return tensors_.at(static_cast<std::size_t>(label - 1)); }
  const std::vector<Tensor> &tensors() const { return tensors_; }

  /// Replace one tensor; the network is revalidated.
  void set(int r, int c, Tensor t) {
    tensors_.at(index(r, c)) = std::move(t);
    validate();
  }

  /// Bonds present at (r, c) in axis order (axis k + 1 carries bonds[k]).
  static std::vector<Bond> bonds_at(int rows, int cols, int r, int c) {
    std::vector<Bond> b;
    if (r > 0) b.push_back(Bond::Up);
    if (r + 1 < rows) b.push_back(Bond::Down);
    if (c > 0) b.push_back(Bond::Left);
    if (c + 1 < cols) b.push_back(Bond::Right);
    return b;
  }

  std::optional<std::size_t> axis_of(int r, int c, Bond bond) const {
    const auto bonds = bonds_at(rows_, cols_, r, c);
    const auto it = std::find(bonds.begin(), bonds.end(), bond);
    if (it == bonds.end()) return std::nullopt;
    return static_cast<std::size_t>(it - bonds.begin()) + 1;
  }

  /// Dimension of a bond, 1 when the bond does not exist.
  std::size_t bond_dim(int r, int c, Bond bond) const {
    const auto ax = axis_of(r, c, bond);
    return ax ? at(r, c).dim(*ax) : 1;
  }

  void validate() const {
    if (rows_ < 1 || cols_ < 1) throw InvalidArgument("PepsNetwork: empty grid");
    if (tensors_.size() != static_cast<std::size_t>(rows_ * cols_)) {
      throw InvalidArgument("PepsNetwork: expected one tensor per site");
    }
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) {
        const Tensor &t = at(r, c);
        const std::string where = "site (" + std::to_string(r) + "," + std::to_string(c) + ")";
        if (t.rank() != bonds_at(rows_, cols_, r, c).size() + 1) {
          throw InvalidArgument("PepsNetwork: wrong rank at " + where);
        }
        if (t.dim(0) != 2) throw InvalidArgument("PepsNetwork: physical dimension must be 2 at " + where);
        for (std::size_t k = 1; k < t.rank(); ++k) {
          if (t.dim(k) > chi_) throw InvalidArgument("PepsNetwork: bond exceeds chi at " + where);
        }
        if (c + 1 < cols_ && bond_dim(r, c, Bond::Right) != bond_dim(r, c + 1, Bond::Left)) {
          throw InvalidArgument("PepsNetwork: horizontal bond mismatch at " + where);
        }
        if (r + 1 < rows_ && bond_dim(r, c, Bond::Down) != bond_dim(r + 1, c, Bond::Up)) {
          throw InvalidArgument("PepsNetwork: vertical bond mismatch at " + where);
        }
      }
    }
  }

 private:
  std::size_t index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw InvalidArgument("PepsNetwork: site out of range");
    return static_cast<std::size_t>(r * cols_ + c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::size_t chi_ = 1;
  std::vector<Tensor> tensors_;
};

namespace detail {

// Axis labels during contraction: physical axes are -label, bonds are
// non-negative edge ids.
inline int edge_id(const PepsNetwork &p, int r, int c, Bond b) {
  const int horizontal = p.rows() * (p.cols() - 1);
  switch (b) {
    case Bond::Left: return r * (p.cols() - 1) + (c - 1);
    case Bond::Right: return r * (p.cols() - 1) + c;
    case Bond::Up: return horizontal + (r - 1) * p.cols() + c;
    case Bond::Down: return horizontal + r * p.cols() + c;
  }
  return -1;
}

inline std::vector<int> axis_labels(const PepsNetwork &p, int r, int c) {
  std::vector<int> labels{-(r * p.cols() + c + 1)};
  for (Bond b : PepsNetwork::bonds_at(p.rows(), p.cols(), r, c)) labels.push_back(edge_id(p, r, c, b));
  return labels;
}

}  // namespace detail

/// Contracts every bond, absorbing sites in the given order (1-based labels).
/// The result is indexed by physical configuration with site 1 most significant.
inline StateVector contract_in_order(const PepsNetwork &p, const std::vector<int> &order) {
  if (p.sites() > kMaxDenseSites) throw InvalidArgument("contract_all: network exceeds the dense guard");
  if (order.size() != static_cast<std::size_t>(p.sites())) {
    throw InvalidArgument("contract_in_order: order must list every site once");
  }
  Tensor acc;
  std::vector<int> labels;
  std::vector<bool> seen(static_cast<std::size_t>(p.sites()), false);
  for (std::size_t step = 0; step < order.size(); ++step) {
    const int label = order[step];
    if (label < 1 || label > p.sites() || seen[label - 1]) {
      throw InvalidArgument("contract_in_order: bad site order");
    }
    seen[label - 1] = true;
    const int r = (label - 1) / p.cols();
    const int c = (label - 1) % p.cols();
    const Tensor &t = p.at(r, c);
    const std::vector<int> tl = detail::axis_labels(p, r, c);
    if (step == 0) {
      acc = t;
      labels = tl;
      continue;
    }
    std::vector<AxisPair> pairs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = 0; j < tl.size(); ++j) {
        if (labels[i] >= 0 && labels[i] == tl[j]) pairs.emplace_back(i, j);
      }
    }
    std::vector<int> next;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (std::none_of(pairs.begin(), pairs.end(), [i](const AxisPair &q) { return q.first == i; })) {
        next.push_back(labels[i]);
      }
    }
    for (std::size_t j = 0; j < tl.size(); ++j) {
      if (std::none_of(pairs.begin(), pairs.end(), [j](const AxisPair &q) { return q.second == j; })) {
        next.push_back(tl[j]);
      }
    }
    acc = contract(acc, t, pairs);
    labels = std::move(next);
  }
  // Only physical axes remain; order them by site label.
  std::vector<std::size_t> perm(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] >= 0) throw InvariantViolation("contract_in_order: dangling bond");
    perm[static_cast<std::size_t>(-labels[k] - 1)] = k;
  }
  const Tensor ordered = acc.permuted(perm);
  return StateVector(p.sites(), std::vector<Complex>(ordered.data().begin(), ordered.data().end()));
}

/// Unnormalized amplitudes of the network state.
inline StateVector contract_all(const PepsNetwork &p) {
  std::vector<int> order(static_cast<std::size_t>(p.sites()));
  for (int k = 0; k < p.sites(); ++k) order[static_cast<std::size_t>(k)] = k + 1;
  return contract_in_order(p, order);
}

inline double norm(const PepsNetwork &p) { return contract_all(p).norm(); }

}  // namespace pepsq

#endif  // PEPSQ_PEPS_HPP
