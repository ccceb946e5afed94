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

#include "paulipath/pauli.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <set>
#include <vector>

using namespace paulipath;

namespace {

// Dense-matrix conjugation oracle: completely independent of the lookup
// tables, used to pin every table entry exhaustively.

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

Mat mat_mul(const Mat& a, const Mat& b) {
  std::size_t n = a.size();
  Mat r(n, std::vector<C>(n, C{0, 0}));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat mat_dagger(const Mat& a) {
  std::size_t n = a.size();
  Mat r(n, std::vector<C>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = std::conj(a[j][i]);
  return r;
}

Mat pauli_mat(Pauli p) {
  const C i{0, 1};
  switch (p) {
    case Pauli::I: return {{1, 0}, {0, 1}};
    case Pauli::X: return {{0, 1}, {1, 0}};
    case Pauli::Y: return {{0, -i}, {i, 0}};
    case Pauli::Z: return {{1, 0}, {0, -1}};
  }
  return {};
}

// two-qubit basis index b = b0 + 2*b1 (slot 0 least significant)
Mat pair_mat(Pauli p0, Pauli p1) {
  Mat a = pauli_mat(p0), b = pauli_mat(p1);
  Mat r(4, std::vector<C>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[i & 1][j & 1] * b[(i >> 1) & 1][(j >> 1) & 1];
  return r;
}

Mat gate_mat(GateKind k) {
  const C i{0, 1};
  const double s = 1.0 / std::sqrt(2.0);
  switch (k) {
    case GateKind::H: return {{s, s}, {s, -s}};
    case GateKind::S: return {{1, 0}, {0, i}};
    case GateKind::Sdg: return {{1, 0}, {0, -i}};
    case GateKind::X: return pauli_mat(Pauli::X);
    case GateKind::Y: return pauli_mat(Pauli::Y);
    case GateKind::Z: return pauli_mat(Pauli::Z);
    case GateKind::CX: {
      Mat r(4, std::vector<C>(4, C{0, 0}));
      for (int b = 0; b < 4; ++b) {
        int b0 = b & 1, b1 = (b >> 1) & 1;
        r[b0 + 2 * (b1 ^ b0)][b] = 1;
      }
      return r;
    }
    case GateKind::CZ: {
      Mat r(4, std::vector<C>(4, C{0, 0}));
      for (int b = 0; b < 4; ++b) r[b][b] = (b == 3) ? -1 : 1;
      return r;
    }
  }
  return {};
}

// Expands U P U~ in the Pauli basis; requires exactly one +-1 coefficient.
std::pair<unsigned, int> dense_conjugate(const Mat& u, unsigned idx, unsigned arity) {
  Mat p = arity == 1 ? pauli_mat(static_cast<Pauli>(idx))
                     : pair_mat(static_cast<Pauli>(idx & 3), static_cast<Pauli>((idx >> 2) & 3));
  Mat conj = mat_mul(mat_mul(u, p), mat_dagger(u));
  unsigned found = 0;
  int sign = 0;
  unsigned count = arity == 1 ? 4 : 16;
  double dim = arity == 1 ? 2.0 : 4.0;
  for (unsigned q = 0; q < count; ++q) {
    Mat qm = arity == 1 ? pauli_mat(static_cast<Pauli>(q))
                        : pair_mat(static_cast<Pauli>(q & 3), static_cast<Pauli>((q >> 2) & 3));
    C tr{0, 0};
    for (std::size_t r = 0; r < qm.size(); ++r)
      for (std::size_t c2 = 0; c2 < qm.size(); ++c2) tr += qm[r][c2] * conj[c2][r];
    double coeff = (tr / dim).real();
    double imag = (tr / dim).imag();
    REQUIRE(std::abs(imag) < 1e-12);
    if (std::abs(coeff) > 0.5) {
      REQUIRE(sign == 0);  // only one non-zero coefficient may appear
      found = q;
      sign = coeff > 0 ? 1 : -1;
      REQUIRE(std::abs(std::abs(coeff) - 1.0) < 1e-12);
    } else {
      REQUIRE(std::abs(coeff) < 1e-12);
    }
  }
  REQUIRE(sign != 0);
  return {found, sign};
}

PauliString<1> single(Pauli p, std::uint32_t n = 1, std::uint32_t q = 0) {
  auto s = PauliString<1>::identity(n);
  s.set_local(q, p);
  return s;
}

}  // namespace

TEST_CASE("lookup tables match dense conjugation exhaustively") {
  const auto& t = CliffordTable::instance();
  for (int k = 0; k < kNumGateKinds; ++k) {
    GateKind kind = static_cast<GateKind>(k);
    unsigned arity = is_two_qubit(kind) ? 2 : 1;
    Mat u = gate_mat(kind);
    for (unsigned idx = 0; idx < (arity == 1 ? 4u : 16u); ++idx) {
      auto [want_out, want_sign] = dense_conjugate(u, idx, arity);
      CliffordTable::Entry e =
          arity == 1 ? t.one_qubit(kind)[idx] : t.two_qubit(kind)[idx];
      INFO("gate " << gate_name(kind) << " input " << idx);
      CHECK(e.out == want_out);
      CHECK((e.flip ? -1 : 1) == want_sign);
    }
  }
}

TEST_CASE("conjugate_adjoint matches dense adjoint-direction conjugation") {
  // Backward propagation applies P -> G' P G for each circuit gate G.
  for (int k = 0; k < kNumGateKinds; ++k) {
    GateKind kind = static_cast<GateKind>(k);
    unsigned arity = is_two_qubit(kind) ? 2 : 1;
    Mat u_dag = mat_dagger(gate_mat(kind));
    for (unsigned idx = 0; idx < (arity == 1 ? 4u : 16u); ++idx) {
      auto [want_out, want_sign] = dense_conjugate(u_dag, idx, arity);
      auto p = PauliString<1>::identity(arity);
      p.set_local(0, static_cast<Pauli>(idx & 3));
      if (arity == 2) p.set_local(1, static_cast<Pauli>((idx >> 2) & 3));
      CliffordGate g = arity == 1 ? CliffordGate::one(kind, 0) : CliffordGate::two(kind, 0, 1);
      auto out = conjugate_adjoint(p, g);
      unsigned got = static_cast<unsigned>(out.local(0)) |
                     (arity == 2 ? static_cast<unsigned>(out.local(1)) << 2 : 0u);
      INFO("gate " << gate_name(kind) << " input " << idx);
      CHECK(got == want_out);
      CHECK(out.sign() == want_sign);
    }
  }
}

TEST_CASE("tables are signed permutations fixing the identity") {
  const auto& t = CliffordTable::instance();
  for (int k = 0; k < kNumGateKinds; ++k) {
    GateKind kind = static_cast<GateKind>(k);
    unsigned count = is_two_qubit(kind) ? 16 : 4;
    std::set<unsigned> outputs;
    for (unsigned idx = 0; idx < count; ++idx) {
      CliffordTable::Entry e =
          count == 4 ? t.one_qubit(kind)[idx] : t.two_qubit(kind)[idx];
      outputs.insert(e.out);
    }
    CHECK(outputs.size() == count);
    CliffordTable::Entry id = count == 4 ? t.one_qubit(kind)[0] : t.two_qubit(kind)[0];
    CHECK(id.out == 0);
    CHECK_FALSE(id.flip);
  }
}

TEST_CASE("self-adjoint gates conjugate to themselves twice; S undoes Sdg") {
  for (GateKind kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z}) {
    for (unsigned idx = 0; idx < 4; ++idx) {
      auto p = single(static_cast<Pauli>(idx));
      auto q = conjugate_adjoint(conjugate_adjoint(p, CliffordGate::one(kind, 0)),
                                 CliffordGate::one(kind, 0));
      CHECK(q == p);
    }
  }
  for (GateKind kind : {GateKind::CX, GateKind::CZ}) {
    for (unsigned idx = 0; idx < 16; ++idx) {
      auto p = PauliString<1>::identity(2);
      p.set_local(0, static_cast<Pauli>(idx & 3));
      p.set_local(1, static_cast<Pauli>((idx >> 2) & 3));
      auto g = CliffordGate::two(kind, 0, 1);
      CHECK(conjugate_adjoint(conjugate_adjoint(p, g), g) == p);
    }
  }
  for (unsigned idx = 0; idx < 4; ++idx) {
    auto p = single(static_cast<Pauli>(idx));
    auto q = conjugate_adjoint(conjugate_adjoint(p, CliffordGate::one(GateKind::S, 0)),
                               CliffordGate::one(GateKind::Sdg, 0));
    CHECK(q == p);
  }
}

TEST_CASE("weight") {
  CHECK(PauliString<1>::identity(3).weight() == 0);
  CHECK(PauliString<1>::from_sparse(parse_pauli("XIZY")).weight() == 3);
  auto z62 = PauliString<2>::from_sparse(parse_pauli("Z62", 127));
  CHECK(z62.weight() == 1);
  CHECK(z62.n == 127);
}

TEST_CASE("overlap with |0..0>") {
  CHECK(PauliString<1>::from_sparse(parse_pauli("+ZZI")).overlap_with_zero() == 1);
  CHECK(PauliString<1>::from_sparse(parse_pauli("-ZI")).overlap_with_zero() == -1);
  CHECK(PauliString<1>::from_sparse(parse_pauli("+XZ")).overlap_with_zero() == 0);
  CHECK(PauliString<1>::identity(4).overlap_with_zero() == 1);
}

TEST_CASE("conjugation examples") {
  // X through H gives Z
  auto x = single(Pauli::X);
  auto hx = conjugate_adjoint(x, CliffordGate::one(GateKind::H, 0));
  CHECK(hx.local(0) == Pauli::Z);
  CHECK(hx.sign() == 1);

  // identity is preserved by every gate
  auto id2 = PauliString<1>::identity(2);
  for (int k = 0; k < kNumGateKinds; ++k) {
    GateKind kind = static_cast<GateKind>(k);
    auto g = is_two_qubit(kind) ? CliffordGate::two(kind, 0, 1) : CliffordGate::one(kind, 0);
    CHECK(conjugate_adjoint(id2, g) == id2);
  }

  // X(x)I through CX(0,1) gives X(x)X
  auto xi = PauliString<1>::from_sparse(parse_pauli("XI"));
  auto out = conjugate_adjoint(xi, CliffordGate::two(GateKind::CX, 0, 1));
  CHECK(out.str() == "XX");
  CHECK(out.sign() == 1);

  // out-of-range qubit is a structural error
  CHECK_THROWS_AS(conjugate_adjoint(x, CliffordGate::one(GateKind::H, 5)),
                  std::invalid_argument);
}

TEST_CASE("rz_split channel structure") {
  // Z and I pass through on the single surviving channel.
  auto sz = rz_split(single(Pauli::Z), 0);
  CHECK_FALSE(sz.split);
  CHECK(sz.cos_branch == single(Pauli::Z));
  auto si = rz_split(PauliString<1>::identity(1), 0);
  CHECK_FALSE(si.split);

  // X splits into {cos: X, sin: -Y}; Y into {cos: Y, sin: +X}.
  auto sx = rz_split(single(Pauli::X), 0);
  REQUIRE(sx.split);
  CHECK(sx.cos_branch == single(Pauli::X));
  CHECK(sx.sin_branch.local(0) == Pauli::Y);
  CHECK(sx.sin_branch.sign() == -1);
  auto sy = rz_split(single(Pauli::Y), 0);
  REQUIRE(sy.split);
  CHECK(sy.cos_branch == single(Pauli::Y));
  CHECK(sy.sin_branch.local(0) == Pauli::X);
  CHECK(sy.sin_branch.sign() == 1);

  // both branches keep an X or Y component, so either way the overlap with
  // |0><0| vanishes: a bare RZ cannot make an X observable visible
  CHECK(sx.cos_branch.overlap_with_zero() == 0);
  CHECK(sx.sin_branch.overlap_with_zero() == 0);
}

TEST_CASE("parse and render") {
  SparsePauli sp = parse_pauli("-XIZY");
  CHECK(sp.n == 4);
  CHECK(sp.negative);
  CHECK(sp.str() == "-X0 Y3 Z2");
  CHECK(PauliString<1>::from_sparse(sp).str() == "-XIZY");

  SparsePauli wide = parse_pauli("X13 Y9 Z8", 127);
  CHECK(wide.weight() == 3);
  CHECK(wide.str() == "X13 Y9 Z8");
  CHECK(PauliString<2>::from_sparse(wide).sparse_str() == "X13 Y9 Z8");

  CHECK(parse_pauli("Z62", 127).str() == "Z62");
  CHECK_THROWS_AS(parse_pauli("X3 Y3", 8), parse_error);
  CHECK_THROWS_AS(parse_pauli("Q1", 8), parse_error);
  CHECK_THROWS_AS(parse_pauli("X9", 4), parse_error);
  CHECK_THROWS_AS(parse_pauli("X3", 0), parse_error);
  CHECK_THROWS_AS(parse_pauli(""), parse_error);
  CHECK_THROWS_AS(parse_pauli("XX", 3), parse_error);
}

TEST_CASE("masks above 64 qubits") {
  auto p = PauliString<2>::identity(127);
  p.set_local(90, Pauli::Y);
  p.set_local(63, Pauli::X);
  p.set_local(64, Pauli::Z);
  CHECK(p.local(90) == Pauli::Y);
  CHECK(p.local(63) == Pauli::X);
  CHECK(p.local(64) == Pauli::Z);
  CHECK(p.local(65) == Pauli::I);
  CHECK(p.weight() == 3);
  CHECK(p.sparse_str() == "X63 Y90 Z64");

  auto g = CliffordGate::two(GateKind::CX, 63, 64);
  auto q = conjugate_adjoint(p, g);  // X(63)Z(64) -> X63 X64 * Z63 Z64 = Y63 Y64 (sign?)
  CHECK(q.weight() >= 2);
  CHECK(conjugate_adjoint(q, g) == p);

  apply_rz_sin_adjoint_inplace(p, 90);  // Y -> +X
  CHECK(p.local(90) == Pauli::X);
  CHECK(p.sign() == 1);
}

TEST_CASE("words_for_qubits") {
  CHECK(words_for_qubits(1) == 1);
  CHECK(words_for_qubits(64) == 1);
  CHECK(words_for_qubits(65) == 2);
  CHECK(words_for_qubits(127) == 2);
  CHECK(words_for_qubits(256) == 4);
  CHECK_THROWS_AS(words_for_qubits(257), capacity_error);
}
