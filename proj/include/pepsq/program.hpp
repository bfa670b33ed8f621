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

#ifndef PEPSQ_PROGRAM_HPP
#define PEPSQ_PROGRAM_HPP

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pepsq/common.hpp"
#include "pepsq/gates.hpp"
#include "pepsq/lattice.hpp"

namespace pepsq {

struct MeasureEvent {
  int qubit = 0;
  int site = 0;
  Pauli basis = Pauli::Z;
};

struct ResetEvent {
  int qubit = 0;
};

/// Applies X, Y or Z with probability p/3 each. Only present in programs
/// decorated by apply_depolarizing.
struct DepolarizeEvent {
  int qubit = 0;
  double p = 0.0;
};

using Event = std::variant<GateSpec, MeasureEvent, ResetEvent, DepolarizeEvent>;

/// Gates, mid-circuit measurements and resets over a fixed register.
///
/// `site_map` is keyed by measurement ordinal: the k-th Measure event in
/// `events` (0-based) records lattice site `site_map[k]`.
struct GateProgram {
  int n_qubits = 0;
  std::vector<Event> events;
  std::map<int, int> site_map;
  std::string layout_id;

  int measure_count() const {
    int n = 0;
    for (const Event &e : events) n += std::holds_alternative<MeasureEvent>(e) ? 1 : 0;
    return n;
  }

  bool is_noisy() const {
    for (const Event &e : events) {
      if (const auto *d = std::get_if<DepolarizeEvent>(&e); d && d->p > 0.0) return true;
    }
    return false;
  }

  /// Throws InvariantViolation on any breach of the measure-and-reuse discipline.
  void validate() const {
    auto bad = [](const std::string &what) { throw InvariantViolation("GateProgram: " + what); };
    if (n_qubits < 1) bad("register must have at least one qubit");
    auto check_qubit = [&](int q) {
      if (q < 0 || q >= n_qubits) bad("qubit " + std::to_string(q) + " outside the register");
    };
    int ordinal = 0;
    std::set<int> sites;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const Event &e = events[i];
      if (const auto *g = std::get_if<GateSpec>(&e)) {
        for (int q : g->qubits) check_qubit(q);
        try {
          g->validate();
        } catch (const InvalidArgument &err) {
          bad(err.what());
        }
      } else if (const auto *m = std::get_if<MeasureEvent>(&e)) {
        check_qubit(m->qubit);
        if (i + 1 >= events.size()) bad("measure is not followed by a reset");
        const auto *r = std::get_if<ResetEvent>(&events[i + 1]);
        if (r == nullptr || r->qubit != m->qubit) bad("measure is not immediately followed by a reset of the same qubit");
        const auto it = site_map.find(ordinal);
        if (it == site_map.end() || it->second != m->site) bad("site_map disagrees with measure event " + std::to_string(ordinal));
        if (!sites.insert(m->site).second) bad("site " + std::to_string(m->site) + " measured twice");
        ++ordinal;
      } else if (const auto *r = std::get_if<ResetEvent>(&e)) {
        check_qubit(r->qubit);
      } else if (const auto *d = std::get_if<DepolarizeEvent>(&e)) {
        check_qubit(d->qubit);
        if (d->p < 0.0 || d->p > 1.0) bad("depolarizing probability outside [0, 1]");
      }
    }
    if (static_cast<int>(site_map.size()) != ordinal) bad("site_map has entries without measure events");
    int expect = 1;
    for (int s : sites) {
      if (s != expect++) bad("measured sites are not exactly 1..n");
    }
  }
};

}  // namespace pepsq

#endif  // PEPSQ_PROGRAM_HPP
