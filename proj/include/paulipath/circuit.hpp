// Copyright 2026 The paulipath developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PAULIPATH_CIRCUIT_HPP
#define PAULIPATH_CIRCUIT_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paulipath/pauli.hpp"

namespace paulipath {

/// One circuit operation: either a Clifford gate or a parametrized
/// single-qubit Z rotation referring to a shared parameter slot.
struct CircuitOp {
  bool is_rz = false;
  CliffordGate gate{GateKind::H, 0, 0};  // rz stores its qubit in gate.q0
  std::uint32_t param = 0;               // rz only

  static CircuitOp clifford(CliffordGate g) { return {false, g, 0}; }
  static CircuitOp rz(std::uint32_t qubit, std::uint32_t param) {
    return {true, CliffordGate::one(GateKind::Z, qubit), param};
  }
  std::uint32_t qubit() const { return gate.q0; }
  bool operator==(const CircuitOp&) const = default;
};

/// Clifford + RZ circuit with parameter sharing. Ops are stored in
/// application order: ops[0] acts first on |0..0>.
struct ParamCircuit {
  std::uint32_t n = 0;
  std::uint32_t num_params = 0;
  std::vector<CircuitOp> ops;

  void add(CliffordGate g) { ops.push_back(CircuitOp::clifford(g)); }
  void add(GateKind k, std::uint32_t q) { add(CliffordGate::one(k, q)); }
  void add(GateKind k, std::uint32_t a, std::uint32_t b) {
    add(CliffordGate::two(k, a, b));
  }
  void add_rz(std::uint32_t qubit, std::uint32_t param) {
    ops.push_back(CircuitOp::rz(qubit, param));
  }

  /// Number of RZ gates (m). This is the length of every frequency vector.
  std::uint32_t rz_count() const {
    std::uint32_t m = 0;
    for (const auto& op : ops) m += op.is_rz;
    return m;
  }

  std::uint32_t clifford_count(GateKind k) const {
    std::uint32_t c = 0;
    for (const auto& op : ops) c += !op.is_rz && op.gate.kind == k;
    return c;
  }

  /// param_id of each RZ gate in application order.
  std::vector<std::uint32_t> rz_params() const {
    std::vector<std::uint32_t> out;
    out.reserve(rz_count());
    for (const auto& op : ops)
      if (op.is_rz) out.push_back(op.param);
    return out;
  }

  void validate() const {
    std::vector<bool> used(num_params, false);
    for (const auto& op : ops) {
      std::uint32_t q0 = op.gate.q0, q1 = op.gate.q1;
      if (q0 >= n) throw std::invalid_argument("op qubit out of range");
      if (!op.is_rz && is_two_qubit(op.gate.kind)) {
        if (q1 >= n) throw std::invalid_argument("op qubit out of range");
        if (q0 == q1) throw std::invalid_argument("two-qubit gate with equal qubits");
      }
      if (op.is_rz) {
        if (op.param >= num_params) throw std::invalid_argument("param id out of range");
        used[op.param] = true;
      }
    }
    for (std::uint32_t p = 0; p < num_params; ++p)
      if (!used[p])
        throw std::invalid_argument("param " + std::to_string(p) +
                                    " is referenced by no RZ gate");
  }

  /// Line-oriented text form:
  ///   qubits <n>
  ///   params <num_params>
  ///   <GATE> <q> [<q2>]        e.g. "CX 0 1", "H 2"
  ///   RZ <q> p<param_id>
  std::string to_text() const {
    std::string out;
    out += "qubits " + std::to_string(n) + "\n";
    out += "params " + std::to_string(num_params) + "\n";
    for (const auto& op : ops) {
      if (op.is_rz) {
        out += "RZ " + std::to_string(op.qubit()) + " p" + std::to_string(op.param) + "\n";
      } else {
        out += std::string(gate_name(op.gate.kind)) + " " + std::to_string(op.gate.q0);
        if (is_two_qubit(op.gate.kind)) out += " " + std::to_string(op.gate.q1);
        out += "\n";
      }
    }
    return out;
  }

  static ParamCircuit from_text(std::string_view text) {
    ParamCircuit c;
    std::istringstream in{std::string(text)};
    std::string line;
    bool have_n = false, have_params = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string tok;
      if (!(ls >> tok) || tok[0] == '#') continue;
      auto fail = [&](const std::string& why) {
        throw parse_error("circuit line " + std::to_string(lineno) + ": " + why);
      };
      auto read_u32 = [&]() {
        long long v;
        if (!(ls >> v) || v < 0) fail("expected a nonnegative integer");
        return static_cast<std::uint32_t>(v);
      };
      if (tok == "qubits") {
        c.n = read_u32();
        have_n = true;
      } else if (tok == "params") {
        c.num_params = read_u32();
        have_params = true;
      } else if (tok == "RZ") {
        if (!have_n || !have_params) fail("RZ before header");
        std::uint32_t q = read_u32();
        std::string p;
        if (!(ls >> p) || p.size() < 2 || p[0] != 'p') fail("expected p<param_id>");
        c.add_rz(q, static_cast<std::uint32_t>(std::stoul(p.substr(1))));
      } else {
        if (!have_n) fail("gate before header");
        GateKind k = gate_kind_from_name(tok);
        std::uint32_t a = read_u32();
        if (is_two_qubit(k))
          c.add(k, a, read_u32());
        else
          c.add(k, a);
      }
      std::string extra;
      if (ls >> extra) fail("trailing token '" + extra + "'");
    }
    if (!have_n || !have_params) throw parse_error("circuit file missing header");
    c.validate();
    return c;
  }

  std::uint64_t digest() const { return detail::fnv1a(to_text()); }
  bool operator==(const ParamCircuit&) const = default;
};

inline ParamCircuit load_circuit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open circuit file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParamCircuit::from_text(ss.str());
}

inline void save_circuit(const ParamCircuit& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write circuit file: " + path);
  out << c.to_text();
}

/// Maps shared parameters to one angle per RZ gate, in RZ application order.
inline std::vector<double> bind_params(const ParamCircuit& c, std::span<const double> params) {
  if (params.size() != c.num_params)
    throw std::invalid_argument("parameter vector length mismatch");
  std::vector<double> angles;
  angles.reserve(c.rz_count());
  for (const auto& op : c.ops)
    if (op.is_rz) angles.push_back(params[op.param]);
  return angles;
}

// --- Topology ---------------------------------------------------------------

/// Undirected interaction graph: node count plus unordered edges, duplicates
/// and self-loops rejected.
struct Topology {
  std::uint32_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  void validate() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [a, b] : edges) {
      if (a == b) throw parse_error("self-loop edge " + std::to_string(a));
      if (a >= n || b >= n) throw parse_error("edge index out of range");
      auto key = std::minmax(a, b);
      if (!seen.insert({key.first, key.second}).second)
        throw parse_error("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    }
  }

  /// Edges in ascending (i, j) lexicographic order with i < j.
  Topology sorted() const {
    Topology t = *this;
    for (auto& [a, b] : t.edges)
      if (a > b) std::swap(a, b);
    std::sort(t.edges.begin(), t.edges.end());
    return t;
  }

  bool operator==(const Topology&) const = default;
};

/// Topology file format: first non-comment line is the node count, then one
/// "i j" pair per line. '#' starts a comment.
inline Topology parse_topology(std::string_view text) {
  Topology t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_n = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw parse_error("topology line " + std::to_string(lineno) + ": " + why);
    };
    if (!have_n) {
      try {
        t.n = static_cast<std::uint32_t>(std::stoul(first));
      } catch (...) {
        fail("expected node count");
      }
      have_n = true;
    } else {
      long long a, b;
      std::istringstream es(line);
      if (!(es >> a >> b) || a < 0 || b < 0) fail("expected an 'i j' edge");
      std::string extra;
      if (es >> extra) fail("trailing token");
      t.edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    }
  }
  if (!have_n) throw parse_error("topology file missing node count");
  t.validate();
  return t;
}

inline Topology load_topology(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open topology file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_topology(ss.str());
}

/// n-site open chain, edges (i, i+1).
inline Topology chain_topology(std::uint32_t n) {
  Topology t;
  t.n = n;
  for (std::uint32_t i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
  return t;
}

// --- Trotterized transverse-field Ising builder ------------------------------

enum class CouplingMode : std::uint8_t {
  clifford_fixed,  // theta_J = -pi/2 folded into pure Clifford gates
  shared,          // one shared coupling parameter
  per_edge,        // one parameter per (layer, edge)
};

enum class FieldMode : std::uint8_t {
  shared,    // one shared field parameter
  per_site,  // one parameter per (layer, site)
};

struct TfiSpec {
  Topology topology;
  std::uint32_t layers = 1;
  CouplingMode coupling = CouplingMode::clifford_fixed;
  FieldMode field = FieldMode::shared;
  bool extra_x_layer = false;
};

/// What a parameter slot of a TFI circuit controls; kept alongside the
/// circuit so bindings can address parameters by role.
struct ParamInfo {
  enum class Kind : std::uint8_t { field = 0, coupling = 1 };
  Kind kind = Kind::field;
  std::uint32_t layer = 0;       // 0-based Trotter step; extra X layer = L
  std::uint32_t site = 0;        // field: site index; coupling: edge index
  std::uint32_t a = 0, b = 0;    // coupling: edge endpoints

  bool operator==(const ParamInfo&) const = default;
};

struct TfiCircuit {
  ParamCircuit circuit;
  std::vector<ParamInfo> params;
};

/// Compiles the spec into Clifford + RZ form. Each Trotter step applies the
/// X-field layer first, then the ZZ-coupling layer; R_X(t) compiles to
/// H . RZ(t) . H and R_ZZ(t) on (i, j) to CX(i,j) . RZ(t on j) . CX(i,j).
/// In clifford_fixed mode the ZZ block at -pi/2 is emitted as
/// CX . SDG(j) . CX with no parameter.
inline TfiCircuit build_tfi_circuit(const TfiSpec& spec) {
  if (spec.layers == 0) throw std::invalid_argument("layer count must be positive");
  spec.topology.validate();
  Topology topo = spec.topology.sorted();

  TfiCircuit out;
  ParamCircuit& c = out.circuit;
  c.n = topo.n;

  std::uint32_t shared_field = UINT32_MAX, shared_coupling = UINT32_MAX;
  auto alloc = [&](ParamInfo info) {
    out.params.push_back(info);
    return c.num_params++;
  };
  auto field_param = [&](std::uint32_t layer, std::uint32_t site) {
    if (spec.field == FieldMode::per_site)
      return alloc({ParamInfo::Kind::field, layer, site, site, site});
    if (shared_field == UINT32_MAX)
      shared_field = alloc({ParamInfo::Kind::field, 0, 0, 0, 0});
    return shared_field;
  };
  auto coupling_param = [&](std::uint32_t layer, std::uint32_t edge) {
    auto [a, b] = topo.edges[edge];
    if (spec.coupling == CouplingMode::per_edge)
      return alloc({ParamInfo::Kind::coupling, layer, edge, a, b});
    if (shared_coupling == UINT32_MAX)
      shared_coupling = alloc({ParamInfo::Kind::coupling, 0, 0, topo.edges.empty() ? 0 : topo.edges[0].first,
                               topo.edges.empty() ? 0 : topo.edges[0].second});
    return shared_coupling;
  };

  auto emit_x_layer = [&](std::uint32_t layer) {
    for (std::uint32_t q = 0; q < c.n; ++q) {
      c.add(GateKind::H, q);
      c.add_rz(q, field_param(layer, q));
      c.add(GateKind::H, q);
    }
  };
  auto emit_zz_layer = [&](std::uint32_t layer) {
    for (std::uint32_t e = 0; e < topo.edges.size(); ++e) {
      auto [i, j] = topo.edges[e];
      c.add(GateKind::CX, i, j);
      if (spec.coupling == CouplingMode::clifford_fixed)
        c.add(GateKind::Sdg, j);
      else
        c.add_rz(j, coupling_param(layer, static_cast<std::uint32_t>(e)));
      c.add(GateKind::CX, i, j);
    }
  };

  for (std::uint32_t layer = 0; layer < spec.layers; ++layer) {
    emit_x_layer(layer);
    emit_zz_layer(layer);
  }
  if (spec.extra_x_layer) emit_x_layer(spec.layers);

  c.validate();
  return out;
}

// --- Lightcone ---------------------------------------------------------------

/// RZ gates (as 0-based indices in application order) whose qubit can
/// intersect the backward-grown support of the observable. Support grows at
/// every two-qubit Clifford touching it, walking the circuit last to first.
/// RZ gates outside this set take channel 0 on every path.
inline std::vector<std::uint32_t> lightcone_params(const ParamCircuit& c,
                                                   const SparsePauli& obs) {
  if (obs.n != c.n) throw std::invalid_argument("observable width mismatch");
  std::vector<char> support(c.n, 0);
  for (const auto& [q, p] : obs.sites) support[q] = 1;
  std::uint32_t m = c.rz_count();
  std::vector<std::uint32_t> in_cone;
  std::uint32_t rz_seen = 0;
  for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
    const CircuitOp& op = *it;
    if (op.is_rz) {
      ++rz_seen;
      if (support[op.qubit()]) in_cone.push_back(m - rz_seen);
    } else if (is_two_qubit(op.gate.kind)) {
      if (support[op.gate.q0] || support[op.gate.q1])
        support[op.gate.q0] = support[op.gate.q1] = 1;
    }
  }
  std::sort(in_cone.begin(), in_cone.end());
  return in_cone;
}

template <std::size_t W>
inline std::vector<std::uint32_t> lightcone_params(const ParamCircuit& c,
                                                   const PauliString<W>& obs) {
  return lightcone_params(c, obs.to_sparse());
}

}  // namespace paulipath

#endif  // PAULIPATH_CIRCUIT_HPP
