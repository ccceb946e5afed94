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

#ifndef PAULIPATH_PAULI_HPP
#define PAULIPATH_PAULI_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paulipath/detail.hpp"
#include "paulipath/errors.hpp"

namespace paulipath {

/// Single-qubit Pauli label. The index is the bit pair (x | z<<1), so that
/// I=(0,0), X=(1,0), Z=(0,1), Y=(1,1); the encoding is bijective.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_letter(Pauli p) {
  constexpr char letters[4] = {'I', 'X', 'Z', 'Y'};
  return letters[static_cast<int>(p)];
}

inline Pauli pauli_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Z': return Pauli::Z;
    case 'Y': return Pauli::Y;
    default: throw parse_error(std::string("invalid Pauli letter '") + c + "'");
  }
}

enum class GateKind : std::uint8_t { H = 0, S, Sdg, X, Y, Z, CX, CZ };

inline constexpr int kNumGateKinds = 8;

inline bool is_two_qubit(GateKind k) { return k == GateKind::CX || k == GateKind::CZ; }

inline GateKind adjoint_kind(GateKind k) {
  if (k == GateKind::S) return GateKind::Sdg;
  if (k == GateKind::Sdg) return GateKind::S;
  return k;  // H, X, Y, Z, CX, CZ are self-adjoint
}

inline std::string_view gate_name(GateKind k) {
  constexpr std::string_view names[kNumGateKinds] = {"H", "S", "SDG", "X",
                                                     "Y", "Z", "CX", "CZ"};
  return names[static_cast<int>(k)];
}

inline GateKind gate_kind_from_name(std::string_view s) {
  for (int i = 0; i < kNumGateKinds; ++i)
    if (gate_name(static_cast<GateKind>(i)) == s) return static_cast<GateKind>(i);
  throw parse_error("unknown gate '" + std::string(s) + "'");
}

/// A Clifford gate instance. q1 is meaningful only for two-qubit kinds
/// (q0 = control for CX).
struct CliffordGate {
  GateKind kind;
  std::uint32_t q0 = 0;
  std::uint32_t q1 = 0;

  static CliffordGate one(GateKind k, std::uint32_t q) { return {k, q, q}; }
  static CliffordGate two(GateKind k, std::uint32_t a, std::uint32_t b) {
    return {k, a, b};
  }
  bool operator==(const CliffordGate&) const = default;
};

/// Width-independent signed Pauli operator: the non-identity sites only.
/// Used at API boundaries (parsing, CLI) before picking a mask width.
struct SparsePauli {
  std::uint32_t n = 0;
  bool negative = false;
  std::vector<std::pair<std::uint32_t, Pauli>> sites;  // sorted by qubit, no I

  std::uint32_t weight() const { return static_cast<std::uint32_t>(sites.size()); }

  void canonicalize() {
    std::sort(sites.begin(), sites.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < sites.size(); ++i)
      if (sites[i].first == sites[i + 1].first)
        throw parse_error("duplicate qubit " + std::to_string(sites[i].first) +
                          " in Pauli string");
    for (const auto& [q, p] : sites)
      if (q >= n) throw parse_error("Pauli site " + std::to_string(q) + " out of range");
  }

  /// Sparse rendering, letters grouped X then Y then Z, ascending indices,
  /// e.g. "-X13 Y9 Z8". The identity renders as "I".
  std::string str() const {
    std::string out;
    if (negative) out += '-';
    for (Pauli letter : {Pauli::X, Pauli::Y, Pauli::Z})
      for (const auto& [q, p] : sites)
        if (p == letter) {
          if (!out.empty() && out.back() != '-') out += ' ';
          out += pauli_letter(p);
          out += std::to_string(q);
        }
    if (sites.empty()) out += 'I';
    return out;
  }

  std::uint64_t digest() const {
    std::uint64_t h = detail::fnv1a("pauli/v1");
    h = detail::hash_mix(h, n);
    h = detail::hash_mix(h, negative ? 1 : 0);
    for (const auto& [q, p] : sites) {
      h = detail::hash_mix(h, q);
      h = detail::hash_mix(h, static_cast<std::uint64_t>(p));
    }
    return h;
  }

  bool operator==(const SparsePauli&) const = default;
};

/// Parses either dense ("-XIZY", leftmost letter = qubit 0) or sparse
/// ("X13 Y9 Z8") form. Dense form fixes n from its length; sparse form
/// requires the register width. Duplicate sites are rejected.
inline SparsePauli parse_pauli(std::string_view text, std::uint32_t n = 0) {
  SparsePauli out;
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    out.negative = text[i] == '-';
    ++i;
  }
  bool sparse = text.find_first_of("0123456789") != std::string_view::npos;
  if (sparse) {
    if (n == 0) throw parse_error("sparse Pauli string requires a register width");
    out.n = n;
    while (i < text.size()) {
      while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) ||
                                 text[i] == ','))
        ++i;
      if (i >= text.size()) break;
      Pauli p = pauli_from_letter(text[i++]);
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw parse_error("missing qubit index in Pauli string");
      std::uint32_t q = static_cast<std::uint32_t>(
          std::stoul(std::string(text.substr(start, i - start))));
      if (p != Pauli::I) out.sites.emplace_back(q, p);
      else if (q >= n) throw parse_error("Pauli site out of range");
    }
  } else {
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::uint32_t len = static_cast<std::uint32_t>(end - i);
    if (len == 0) throw parse_error("empty Pauli string");
    if (n != 0 && n != len)
      throw parse_error("dense Pauli string length does not match register width");
    out.n = len;
    for (std::uint32_t q = 0; q < len; ++q) {
      Pauli p = pauli_from_letter(text[i + q]);
      if (p != Pauli::I) out.sites.emplace_back(q, p);
    }
  }
  out.canonicalize();
  return out;
}

/// Signed n-qubit Pauli operator over W 64-bit mask words (n <= 64*W).
/// Bit q of x/z set means an X/Z component on qubit q; (1,1) is Y. The sign
/// is exactly +-1: Clifford conjugation and the rotation channel maps never
/// produce any other phase on a Hermitian Pauli.
template <std::size_t W>
struct PauliString {
  static_assert(W >= 1 && W <= 8);
  static constexpr std::uint32_t max_qubits = 64 * W;

  std::uint32_t n = 0;
  std::array<std::uint64_t, W> x{};
  std::array<std::uint64_t, W> z{};
  bool negative = false;

  static PauliString identity(std::uint32_t num_qubits) {
    if (num_qubits > max_qubits)
      throw capacity_error("qubit count exceeds mask width");
    PauliString p;
    p.n = num_qubits;
    return p;
  }

  static PauliString from_sparse(const SparsePauli& sp) {
    PauliString p = identity(sp.n);
    p.negative = sp.negative;
    for (const auto& [q, letter] : sp.sites) p.set_local(q, letter);
    return p;
  }

  SparsePauli to_sparse() const {
    SparsePauli sp;
    sp.n = n;
    sp.negative = negative;
    for (std::uint32_t q = 0; q < n; ++q) {
      Pauli p = local(q);
      if (p != Pauli::I) sp.sites.emplace_back(q, p);
    }
    return sp;
  }

  Pauli local(std::uint32_t q) const {
    std::uint32_t w = q >> 6, b = q & 63;
    return static_cast<Pauli>(((x[w] >> b) & 1) | (((z[w] >> b) & 1) << 1));
  }

  void set_local(std::uint32_t q, Pauli p) {
    std::uint32_t w = q >> 6, b = q & 63;
    std::uint64_t mask = 1ull << b;
    std::uint64_t xv = static_cast<std::uint64_t>(p) & 1;
    std::uint64_t zv = (static_cast<std::uint64_t>(p) >> 1) & 1;
    x[w] = (x[w] & ~mask) | (xv << b);
    z[w] = (z[w] & ~mask) | (zv << b);
  }

  int sign() const { return negative ? -1 : +1; }

  std::uint32_t weight() const {
    std::uint32_t w = 0;
    for (std::size_t i = 0; i < W; ++i) w += std::popcount(x[i] | z[i]);
    return w;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < W; ++i)
      if (x[i] | z[i]) return false;
    return true;
  }

  /// Tr[rho0 P] in {-1,0,+1} for rho0 = |0..0><0..0|: any X component
  /// annihilates, otherwise the sign passes through.
  int overlap_with_zero() const {
    for (std::size_t i = 0; i < W; ++i)
      if (x[i]) return 0;
    return sign();
  }

  /// Dense rendering, qubit 0 leftmost, '-' prefix when negative.
  std::string str() const {
    std::string out;
    if (negative) out += '-';
    for (std::uint32_t q = 0; q < n; ++q) out += pauli_letter(local(q));
    return out;
  }

  std::string sparse_str() const { return to_sparse().str(); }

  bool operator==(const PauliString&) const = default;
};

namespace detail {

/// Pauli written as i^e * X^xbits Z^zbits over k <= 2 qubits; used only to
/// build the Clifford lookup tables multiplicatively from generator images.
struct QuarterPauli {
  unsigned x = 0, z = 0, e = 0;  // e mod 4

  friend QuarterPauli operator*(QuarterPauli a, QuarterPauli b) {
    // moving Z^za past X^xb costs (-1)^{|za & xb|}
    unsigned e = (a.e + b.e + 2u * static_cast<unsigned>(std::popcount(a.z & b.x))) & 3u;
    return {a.x ^ b.x, a.z ^ b.z, e};
  }
};

inline QuarterPauli quarter_from_local(Pauli p, unsigned slot) {
  unsigned xb = (p == Pauli::X || p == Pauli::Y) ? 1u << slot : 0u;
  unsigned zb = (p == Pauli::Z || p == Pauli::Y) ? 1u << slot : 0u;
  return {xb, zb, p == Pauli::Y ? 1u : 0u};  // Y = i * X * Z
}

}  // namespace detail

/// Precomputed action of every supported Clifford gate on all 4^k local
/// Paulis: a signed permutation per gate kind (identity fixed with sign +1).
/// Entries store the conjugated label(s) and whether the sign flips.
class CliffordTable {
 public:
  struct Entry {
    std::uint8_t out;  // local index (1q) or pair index p0 | p1<<2 (2q)
    bool flip;
  };

  const std::array<Entry, 4>& one_qubit(GateKind k) const {
    return one_[static_cast<int>(k)];
  }
  const std::array<Entry, 16>& two_qubit(GateKind k) const {
    return two_[static_cast<int>(k) - static_cast<int>(GateKind::CX)];
  }

  static const CliffordTable& instance() {
    static const CliffordTable table;
    return table;
  }

 private:
  CliffordTable() {
    // Images of the generators X_q, Z_q under P -> G P G'.
    using QP = detail::QuarterPauli;
    auto qp = [](Pauli p0, Pauli p1 = Pauli::I, unsigned e_extra = 0) {
      QP q = detail::quarter_from_local(p0, 0) * detail::quarter_from_local(p1, 1);
      q.e = (q.e + e_extra) & 3u;
      return q;
    };
    auto neg = [&](QP q) {
      q.e = (q.e + 2) & 3u;
      return q;
    };

    struct GenImages {
      QP xi[2], zi[2];  // images of X_slot, Z_slot
    };
    std::array<GenImages, kNumGateKinds> gens{};
    auto& g = gens;
    auto set1 = [&](GateKind k, QP xi, QP zi) {
      g[static_cast<int>(k)].xi[0] = xi;
      g[static_cast<int>(k)].zi[0] = zi;
    };
    set1(GateKind::H, qp(Pauli::Z), qp(Pauli::X));
    set1(GateKind::S, qp(Pauli::Y), qp(Pauli::Z));
    set1(GateKind::Sdg, neg(qp(Pauli::Y)), qp(Pauli::Z));
    set1(GateKind::X, qp(Pauli::X), neg(qp(Pauli::Z)));
    set1(GateKind::Y, neg(qp(Pauli::X)), neg(qp(Pauli::Z)));
    set1(GateKind::Z, neg(qp(Pauli::X)), qp(Pauli::Z));
    auto set2 = [&](GateKind k, QP xc, QP zc, QP xt, QP zt) {
      g[static_cast<int>(k)].xi[0] = xc;
      g[static_cast<int>(k)].zi[0] = zc;
      g[static_cast<int>(k)].xi[1] = xt;
      g[static_cast<int>(k)].zi[1] = zt;
    };
    set2(GateKind::CX, qp(Pauli::X, Pauli::X), qp(Pauli::Z), qp(Pauli::I, Pauli::X),
         qp(Pauli::Z, Pauli::Z));
    set2(GateKind::CZ, qp(Pauli::X, Pauli::Z), qp(Pauli::Z), qp(Pauli::Z, Pauli::X),
         qp(Pauli::I, Pauli::Z));

    for (int k = 0; k < kNumGateKinds; ++k) {
      GateKind kind = static_cast<GateKind>(k);
      unsigned arity = is_two_qubit(kind) ? 2 : 1;
      unsigned count = arity == 1 ? 4 : 16;
      for (unsigned idx = 0; idx < count; ++idx) {
        // Decompose the input as i^{#Y} X^x Z^z, conjugate each generator,
        // and re-read the product as signed Pauli letters.
        detail::QuarterPauli acc{0, 0, 0};
        unsigned y_in = 0;
        for (unsigned slot = 0; slot < arity; ++slot) {
          Pauli p = static_cast<Pauli>((idx >> (2 * slot)) & 3);
          if (p == Pauli::Y) ++y_in;
          if (p == Pauli::X || p == Pauli::Y) acc = acc * gens[k].xi[slot];
        }
        for (unsigned slot = 0; slot < arity; ++slot) {
          Pauli p = static_cast<Pauli>((idx >> (2 * slot)) & 3);
          if (p == Pauli::Z || p == Pauli::Y) acc = acc * gens[k].zi[slot];
        }
        acc.e = (acc.e + y_in) & 3u;

        unsigned out = 0, y_out = 0;
        for (unsigned slot = 0; slot < arity; ++slot) {
          unsigned xb = (acc.x >> slot) & 1, zb = (acc.z >> slot) & 1;
          if (xb && zb) ++y_out;
          out |= (xb | (zb << 1)) << (2 * slot);
        }
        unsigned e = (acc.e + 4 - y_out) & 3u;  // divide out i^{#Y} of the output
        // Clifford conjugation of a Hermitian Pauli stays Hermitian: e is 0 or 2.
        if (e & 1) throw std::logic_error("clifford table: non-real phase");
        Entry entry{static_cast<std::uint8_t>(out), e == 2};
        if (arity == 1)
          one_[k][idx] = entry;
        else
          two_[k - static_cast<int>(GateKind::CX)][idx] = entry;
      }
    }
  }

  std::array<std::array<Entry, 4>, kNumGateKinds> one_{};
  std::array<std::array<Entry, 16>, 2> two_{};
};

/// Applies the table map P -> G P G' for the gate's own kind, in place.
template <std::size_t W>
inline void apply_conjugation_inplace(PauliString<W>& p, const CliffordGate& g,
                                      const CliffordTable& t = CliffordTable::instance()) {
  if (g.q0 >= p.n || (is_two_qubit(g.kind) && (g.q1 >= p.n || g.q0 == g.q1)))
    throw std::invalid_argument("gate qubit index out of range");
  if (is_two_qubit(g.kind)) {
    unsigned idx = static_cast<unsigned>(p.local(g.q0)) |
                   (static_cast<unsigned>(p.local(g.q1)) << 2);
    const auto& e = t.two_qubit(g.kind)[idx];
    p.set_local(g.q0, static_cast<Pauli>(e.out & 3));
    p.set_local(g.q1, static_cast<Pauli>((e.out >> 2) & 3));
    p.negative ^= e.flip;
  } else {
    const auto& e = t.one_qubit(g.kind)[static_cast<unsigned>(p.local(g.q0))];
    p.set_local(g.q0, static_cast<Pauli>(e.out));
    p.negative ^= e.flip;
  }
}

/// Heisenberg-direction conjugation used by the backward pass: for a gate G
/// as it appears in the circuit, maps P -> G' P G (the adjoint-kind table).
template <std::size_t W>
inline void conjugate_adjoint_inplace(PauliString<W>& p, const CliffordGate& g,
                                      const CliffordTable& t = CliffordTable::instance()) {
  CliffordGate adj{adjoint_kind(g.kind), g.q0, g.q1};
  apply_conjugation_inplace(p, adj, t);
}

template <std::size_t W>
inline PauliString<W> conjugate_adjoint(PauliString<W> p, const CliffordGate& g,
                                        const CliffordTable& t = CliffordTable::instance()) {
  conjugate_adjoint_inplace(p, g, t);
  return p;
}

/// Sine-channel action of the backward pass through RZ on `qubit`:
/// X -> -Y, Y -> +X (the transposed off-diagonal rotation block).
/// Precondition: the local Pauli there is X or Y.
template <std::size_t W>
inline void apply_rz_sin_adjoint_inplace(PauliString<W>& p, std::uint32_t qubit) {
  std::uint32_t w = qubit >> 6, b = qubit & 63;
  std::uint64_t mask = 1ull << b;
  if (p.z[w] & mask) {
    p.z[w] &= ~mask;  // Y -> +X
  } else {
    p.z[w] |= mask;  // X -> -Y
    p.negative = !p.negative;
  }
}

/// Result of pushing a signed Pauli backward through one RZ gate.
/// If the local Pauli on the rotation qubit is I or Z the operator passes
/// through unchanged (the only surviving channel); otherwise it splits into
/// a cosine branch (unchanged) and a sine branch (X <-> Y with sign).
template <std::size_t W>
struct SplitOutcome {
  bool split = false;
  PauliString<W> cos_branch;  // the unchanged operator when !split
  PauliString<W> sin_branch;  // meaningful only when split
};

template <std::size_t W>
inline SplitOutcome<W> rz_split(const PauliString<W>& p, std::uint32_t qubit) {
  if (qubit >= p.n) throw std::invalid_argument("rz qubit index out of range");
  SplitOutcome<W> out;
  out.cos_branch = p;
  Pauli loc = p.local(qubit);
  if (loc == Pauli::I || loc == Pauli::Z) return out;
  out.split = true;
  out.sin_branch = p;
  apply_rz_sin_adjoint_inplace(out.sin_branch, qubit);
  return out;
}

template <std::size_t W>
inline std::uint32_t weight(const PauliString<W>& p) {
  return p.weight();
}

template <std::size_t W>
inline int overlap_with_zero(const PauliString<W>& p) {
  return p.overlap_with_zero();
}

/// Smallest supported mask width covering n qubits (1, 2 or 4 words).
inline std::size_t words_for_qubits(std::uint32_t n) {
  if (n <= 64) return 1;
  if (n <= 128) return 2;
  if (n <= 256) return 4;
  throw capacity_error("more than 256 qubits are not supported");
}

}  // namespace paulipath

#endif  // PAULIPATH_PAULI_HPP
