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

// JSON documents for gate programs and optimizer checkpoints.
//
// Object keys are emitted in sorted order and floats in shortest round-trip
// form, so parse followed by serialize reproduces the input byte for byte.

#ifndef PEPSQ_IO_HPP
#define PEPSQ_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pepsq/common.hpp"
#include "pepsq/gates.hpp"
#include "pepsq/program.hpp"

namespace pepsq {

using Json = nlohmann::json;

namespace detail {

inline Json event_to_json(const Event &e) {
  Json j;
  if (const auto *g = std::get_if<GateSpec>(&e)) {
    j["type"] = "gate";
    j["kind"] = to_string(g->kind);
    j["qubits"] = g->qubits;
    if (g->kind == GateKind::CustomUnitary) {
      Json m = Json::array();
      for (Eigen::Index r = 0; r < g->unitary.rows(); ++r) {
        for (Eigen::Index c = 0; c < g->unitary.cols(); ++c) {
          m.push_back({g->unitary(r, c).real(), g->unitary(r, c).imag()});
        }
      }
      j["matrix"] = std::move(m);
    } else {
      j["params"] = g->params;
    }
  } else if (const auto *m = std::get_if<MeasureEvent>(&e)) {
    j["type"] = "measure";
    j["qubit"] = m->qubit;
    j["site"] = m->site;
    j["basis"] = std::string(1, pauli_char(m->basis));
  } else if (const auto *r = std::get_if<ResetEvent>(&e)) {
    j["type"] = "reset";
    j["qubit"] = r->qubit;
  } else if (const auto *d = std::get_if<DepolarizeEvent>(&e)) {
    j["type"] = "depolarize";
    j["qubit"] = d->qubit;
    j["p"] = d->p;
  }
  return j;
}

inline Event event_from_json(const Json &j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "gate") {
    GateSpec g;
    g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
    g.qubits = j.at("qubits").get<std::vector<int>>();
    if (g.kind == GateKind::CustomUnitary) {
      const Json &m = j.at("matrix");
      const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.qubits.size());
      if (m.size() != static_cast<std::size_t>(dim * dim)) {
        throw InvalidArgument("gate matrix has " + std::to_string(m.size()) + " entries, expected " +
                              std::to_string(dim * dim));
      }
      g.unitary = Matrix(dim, dim);
      for (Eigen::Index k = 0; k < dim * dim; ++k) {
        const Json &z = m.at(static_cast<std::size_t>(k));
        if (z.size() != 2) throw InvalidArgument("gate matrix entries must be [re, im] pairs");
        g.unitary(k / dim, k % dim) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
      }
    } else {
      g.params = j.at("params").get<std::vector<double>>();
    }
    g.validate();
    return g;
  }
  if (type == "measure") {
    MeasureEvent m{j.at("qubit").get<int>(), j.at("site").get<int>(), Pauli::Z};
    if (j.contains("basis")) {
      const auto b = j.at("basis").get<std::string>();
      if (b.size() != 1) throw InvalidArgument("measure basis must be one of I, X, Y, Z");
      m.basis = pauli_from_char(b[0]);
    }
    return m;
  }
  if (type == "reset") return ResetEvent{j.at("qubit").get<int>()};
  if (type == "depolarize") return DepolarizeEvent{j.at("qubit").get<int>(), j.at("p").get<double>()};
  throw InvalidArgument("unknown event type '" + type + "'");
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace detail

inline Json program_to_json(const GateProgram &prog) {
  Json j;
  j["n_qubits"] = prog.n_qubits;
  Json events = Json::array();
  for (const Event &e : prog.events) events.push_back(detail::event_to_json(e));
  j["events"] = std::move(events);
  Json sm = Json::object();
  for (const auto &[ordinal, site] : prog.site_map) sm[std::to_string(ordinal)] = site;
  j["site_map"] = std::move(sm);
  j["layout_id"] = prog.layout_id;
  return j;
}

/// Throws InvalidArgument on malformed documents and InvariantViolation when
/// the decoded program breaks the measure-and-reuse discipline.
inline GateProgram program_from_json(const Json &j) {
  GateProgram prog;
  try {
    prog.n_qubits = j.at("n_qubits").get<int>();
    for (const Json &e : j.at("events")) prog.events.push_back(detail::event_from_json(e));
    for (const auto &[key, value] : j.at("site_map").items()) {
      std::size_t used = 0;
      const int ordinal = std::stoi(key, &used);
      if (used != key.size()) throw InvalidArgument("site_map key '" + key + "' is not an integer");
      prog.site_map[ordinal] = value.get<int>();
    }
    prog.layout_id = j.at("layout_id").get<std::string>();
  } catch (const Json::exception &err) {
    throw InvalidArgument(std::string("malformed program JSON: ") + err.what());
  } catch (const std::logic_error &err) {
    throw InvalidArgument(std::string("malformed program JSON: ") + err.what());
  }
  prog.validate();
  return prog;
}

inline std::string serialize_program(const GateProgram &prog) { return program_to_json(prog).dump(1) + "\n"; }

inline GateProgram parse_program(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error &err) {
    throw InvalidArgument(std::string("program JSON does not parse: ") + err.what());
  }
  return program_from_json(j);
}

inline void save_program(const GateProgram &prog, const std::filesystem::path &path) {
  detail::write_file(path, serialize_program(prog));
}

inline GateProgram load_program(const std::filesystem::path &path) { return parse_program(detail::read_file(path)); }

/// Optimizer output for one field strength.
struct Checkpoint {
  double g = 0.0;
  std::vector<double> theta;
  double energy = 0.0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
  std::string layout_id;
};

inline std::string serialize_checkpoint(const Checkpoint &c) {
  Json j;
  j["g"] = c.g;
  j["theta"] = c.theta;
  j["energy"] = c.energy;
  j["evaluations"] = c.evaluations;
  j["seed"] = c.seed;
  j["layout_id"] = c.layout_id;
  return j.dump(1) + "\n";
}

inline Checkpoint parse_checkpoint(const std::string &text) {
  try {
    const Json j = Json::parse(text);
    Checkpoint c;
    c.g = j.at("g").get<double>();
    c.theta = j.at("theta").get<std::vector<double>>();
    c.energy = j.at("energy").get<double>();
    c.evaluations = j.at("evaluations").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.layout_id = j.at("layout_id").get<std::string>();
    return c;
  } catch (const Json::exception &err) {
    throw InvalidArgument(std::string("malformed checkpoint: ") + err.what());
  }
}

inline void save_checkpoint(const Checkpoint &c, const std::filesystem::path &path) {
  detail::write_file(path, serialize_checkpoint(c));
}

inline Checkpoint load_checkpoint(const std::filesystem::path &path) {
  return parse_checkpoint(detail::read_file(path));
}

}  // namespace pepsq

#endif  // PEPSQ_IO_HPP
