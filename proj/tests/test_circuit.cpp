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

#include "paulipath/circuit.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <numbers>
#include <random>
#include <set>

#include "paulipath/oracle.hpp"

using namespace paulipath;

namespace {

const std::string kDataDir = PAULIPATH_DATA_DIR;

Topology heavy_hex() { return load_topology(kDataDir + "/heavy_hex_127.txt"); }

// Exact per-layer evolution: every Trotter factor applied as its own matrix
// exponential, with the same layer ordering the builder emits.
double layered_expectation(const TfiCircuit& tfi, const TfiSpec& spec,
                           std::span<const double> params, const SparsePauli& obs) {
  Statevector sv(spec.topology.n);
  Topology topo = spec.topology.sorted();
  auto angle_of = [&](ParamInfo::Kind kind, std::uint32_t layer, std::uint32_t which) {
    for (std::size_t p = 0; p < tfi.params.size(); ++p) {
      const ParamInfo& info = tfi.params[p];
      if (info.kind != kind) continue;
      bool shared = (kind == ParamInfo::Kind::field && spec.field == FieldMode::shared) ||
                    (kind == ParamInfo::Kind::coupling && spec.coupling == CouplingMode::shared);
      if (shared || (info.layer == layer && info.site == which)) return params[p];
    }
    FAIL("missing parameter role");
    return 0.0;
  };
  std::uint32_t total_x_layers = spec.layers + (spec.extra_x_layer ? 1 : 0);
  for (std::uint32_t layer = 0; layer < total_x_layers; ++layer) {
    for (std::uint32_t q = 0; q < topo.n; ++q)
      sv.apply_rx(q, angle_of(ParamInfo::Kind::field, layer, q));
    if (layer == spec.layers) break;  // the extra layer has no coupling block
    for (std::uint32_t e = 0; e < topo.edges.size(); ++e) {
      double theta = spec.coupling == CouplingMode::clifford_fixed
                         ? -std::numbers::pi / 2
                         : angle_of(ParamInfo::Kind::coupling, layer, e);
      sv.apply_rzz(topo.edges[e].first, topo.edges[e].second, theta);
    }
  }
  return sv.expectation(obs);
}

}  // namespace

TEST_CASE("circuit text round trip") {
  ParamCircuit c;
  c.n = 3;
  c.num_params = 2;
  c.add(GateKind::H, 0);
  c.add_rz(0, 1);
  c.add(GateKind::CX, 0, 1);
  c.add(GateKind::Sdg, 2);
  c.add_rz(2, 0);
  c.validate();

  std::string text = c.to_text();
  CHECK(text == "qubits 3\nparams 2\nH 0\nRZ 0 p1\nCX 0 1\nSDG 2\nRZ 2 p0\n");
  CHECK(ParamCircuit::from_text(text) == c);
  CHECK(ParamCircuit::from_text(text).digest() == c.digest());
}

TEST_CASE("circuit parse and validation errors") {
  CHECK_THROWS_AS(ParamCircuit::from_text("H 0\n"), parse_error);
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 0\nFOO 0\n"), parse_error);
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 0\nH 0 1\n"), parse_error);
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 1\nRZ 0 q0\n"), parse_error);
  // structural problems are caught by validate()
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 1\nH 0\n"),
                  std::invalid_argument);  // unused param
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 1\nRZ 5 p0\n"),
                  std::invalid_argument);  // qubit range
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 0\nCX 1 1\n"),
                  std::invalid_argument);  // equal qubits
  CHECK_THROWS_AS(ParamCircuit::from_text("qubits 2\nparams 1\nRZ 0 p1\n"),
                  std::invalid_argument);  // param range
}

TEST_CASE("random circuits serialize losslessly") {
  std::mt19937_64 rng(0xc1c1u);
  for (int i = 0; i < 25; ++i) {
    auto inst = random_clifford_rz_circuit(rng);
    CHECK(ParamCircuit::from_text(inst.circuit.to_text()) == inst.circuit);
  }
}

TEST_CASE("bind broadcasts shared parameters") {
  TfiSpec spec{heavy_hex(), 5, CouplingMode::clifford_fixed, FieldMode::shared, false};
  auto tfi = build_tfi_circuit(spec);
  std::vector<double> params{0.3};
  auto angles = bind_params(tfi.circuit, params);
  REQUIRE(angles.size() == 635);
  for (double a : angles) CHECK(a == 0.3);

  ParamCircuit tiny;
  tiny.n = 1;
  tiny.num_params = 1;
  tiny.add_rz(0, 0);
  std::vector<double> one{0.7};
  CHECK(bind_params(tiny, one) == std::vector<double>{0.7});

  std::vector<double> wrong{0.1, 0.2};
  CHECK_THROWS_AS(bind_params(tiny, wrong), std::invalid_argument);
}

TEST_CASE("topology parsing") {
  Topology t = parse_topology("3\n0 1\n1 2\n");
  CHECK(t.n == 3);
  CHECK(t.edges == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {1, 2}});

  CHECK_THROWS_AS(parse_topology("3\n0 0\n"), parse_error);       // self-loop
  CHECK_THROWS_AS(parse_topology("3\n0 1\n1 0\n"), parse_error);  // duplicate
  CHECK_THROWS_AS(parse_topology("3\n0 7\n"), parse_error);       // range
  CHECK_THROWS_AS(parse_topology("nope\n"), parse_error);
  CHECK_THROWS_AS(load_topology("/does/not/exist"), parse_error);
}

TEST_CASE("bundled heavy-hex asset") {
  Topology t = heavy_hex();
  CHECK(t.n == 127);
  CHECK(t.edges.size() == 144);
  std::vector<int> degree(t.n, 0);
  for (auto [a, b] : t.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (int d : degree) {
    CHECK(d >= 1);
    CHECK(d <= 3);
  }
  // connected
  std::vector<std::vector<std::uint32_t>> adj(t.n);
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::uint32_t> seen{0};
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto w : adj[q])
      if (seen.insert(w).second) stack.push_back(w);
  }
  CHECK(seen.size() == t.n);
}

TEST_CASE("tfi builder emits the documented gate sequence") {
  TfiSpec spec{chain_topology(2), 1, CouplingMode::clifford_fixed, FieldMode::shared, false};
  auto tfi = build_tfi_circuit(spec);
  CHECK(tfi.circuit.to_text() ==
        "qubits 2\nparams 1\n"
        "H 0\nRZ 0 p0\nH 0\nH 1\nRZ 1 p0\nH 1\n"
        "CX 0 1\nSDG 1\nCX 0 1\n");
  REQUIRE(tfi.params.size() == 1);
  CHECK(tfi.params[0].kind == ParamInfo::Kind::field);
}

TEST_CASE("tfi gate and parameter counting identities") {
  Topology hex = heavy_hex();

  TfiSpec l5{hex, 5, CouplingMode::clifford_fixed, FieldMode::shared, false};
  auto c5 = build_tfi_circuit(l5);
  CHECK(c5.circuit.rz_count() == 635);
  CHECK(c5.circuit.num_params == 1);

  TfiSpec l6 = l5;
  l6.extra_x_layer = true;
  auto c6 = build_tfi_circuit(l6);
  CHECK(c6.circuit.rz_count() == 762);
  CHECK(c6.circuit.num_params == 1);

  TfiSpec free{hex, 20, CouplingMode::per_edge, FieldMode::per_site, false};
  auto cf = build_tfi_circuit(free);
  CHECK(cf.circuit.rz_count() == 5420);
  CHECK(cf.circuit.num_params == 5420);
  CHECK(cf.circuit.clifford_count(GateKind::CX) == 5760);
  CHECK(cf.params.size() == 5420);

  // m = L*(n + |edges|) for fully free angles, +n with the extra layer
  TfiSpec small{chain_topology(4), 3, CouplingMode::per_edge, FieldMode::per_site, true};
  auto cs = build_tfi_circuit(small);
  CHECK(cs.circuit.rz_count() == 3 * (4 + 3) + 4);

  TfiSpec shared2{chain_topology(4), 3, CouplingMode::shared, FieldMode::shared, false};
  CHECK(build_tfi_circuit(shared2).circuit.num_params == 2);

  TfiSpec bad = shared2;
  bad.layers = 0;
  CHECK_THROWS_AS(build_tfi_circuit(bad), std::invalid_argument);
}

TEST_CASE("lightcone of a depth-1 field layer is the site itself") {
  ParamCircuit c;
  c.n = 3;
  c.num_params = 3;
  for (std::uint32_t q = 0; q < 3; ++q) {
    c.add(GateKind::H, q);
    c.add_rz(q, q);
    c.add(GateKind::H, q);
  }
  auto cone = lightcone_params(c, parse_pauli("IZI"));
  CHECK(cone == std::vector<std::uint32_t>{1});
}

TEST_CASE("lightcone grows through the coupling layer") {
  TfiSpec spec{chain_topology(3), 1, CouplingMode::clifford_fixed, FieldMode::per_site, false};
  auto tfi = build_tfi_circuit(spec);
  auto cone = lightcone_params(tfi.circuit, parse_pauli("Z0", 3));
  CHECK(cone == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("deep heavy-hex circuit reaches every qubit") {
  TfiSpec spec{heavy_hex(), 20, CouplingMode::per_edge, FieldMode::per_site, false};
  auto tfi = build_tfi_circuit(spec);
  auto cone = lightcone_params(tfi.circuit, parse_pauli("Z62", 127));
  std::vector<std::uint32_t> qubit_of;
  for (const auto& op : tfi.circuit.ops)
    if (op.is_rz) qubit_of.push_back(op.qubit());
  std::set<std::uint32_t> touched;
  for (auto rz : cone) touched.insert(qubit_of[rz]);
  CHECK(touched.size() == 127);
}

TEST_CASE("compiled circuits match the exact layer exponentials") {
  std::mt19937_64 rng(0x7f1u);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int rep = 0; rep < 8; ++rep) {
    Topology topo = rep % 2 == 0 ? chain_topology(4) : parse_topology("4\n0 1\n1 2\n2 3\n0 3\n");
    TfiSpec spec{topo, 2, CouplingMode::per_edge, FieldMode::per_site, rep % 3 == 0};
    auto tfi = build_tfi_circuit(spec);
    std::vector<double> params(tfi.circuit.num_params);
    for (auto& p : params) p = angle(rng);
    SparsePauli obs = parse_pauli(rep % 2 ? "ZXIY" : "IZZI");
    double compiled = exact_expectation(tfi.circuit, params, obs);
    double layered = layered_expectation(tfi, spec, params, obs);
    CHECK(std::abs(compiled - layered) < 1e-10);
  }
}

TEST_CASE("clifford_fixed equals per_edge coupling bound to -pi/2") {
  std::mt19937_64 rng(0xabcdu);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
  for (int rep = 0; rep < 6; ++rep) {
    Topology topo = chain_topology(4);
    TfiSpec fixed{topo, 2, CouplingMode::clifford_fixed, FieldMode::shared, false};
    TfiSpec open = fixed;
    open.coupling = CouplingMode::per_edge;
    auto cf = build_tfi_circuit(fixed);
    auto co = build_tfi_circuit(open);
    double theta_h = angle(rng);
    std::vector<double> pf{theta_h};
    std::vector<double> po(co.circuit.num_params);
    for (std::size_t p = 0; p < po.size(); ++p)
      po[p] = co.params[p].kind == ParamInfo::Kind::field ? theta_h : -std::numbers::pi / 2;
    SparsePauli obs = parse_pauli(rep % 2 ? "Z1" : "X0 Z2", 4);
    double a = exact_expectation(cf.circuit, pf, obs);
    double b = exact_expectation(co.circuit, po, obs);
    CHECK(std::abs(a - b) < 1e-10);
  }
}
