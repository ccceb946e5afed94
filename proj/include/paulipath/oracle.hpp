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

#ifndef PAULIPATH_ORACLE_HPP
#define PAULIPATH_ORACLE_HPP

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "paulipath/circuit.hpp"
#include "paulipath/pauli.hpp"
#include "paulipath/surrogate.hpp"

namespace paulipath {

/// Dense forward simulator for desk-scale ground truth. Hard-capped at 22
/// qubits (2^22 amplitudes).
class Statevector {
 public:
  static constexpr std::uint32_t max_qubits = 22;

  explicit Statevector(std::uint32_t n) : n_(n) {
    if (n > max_qubits) throw capacity_error("statevector capped at 22 qubits");
    if (n == 0) throw std::invalid_argument("empty register");
    amp_.assign(std::size_t{1} << n, {0.0, 0.0});
    amp_[0] = {1.0, 0.0};
  }

  std::uint32_t num_qubits() const { return n_; }

  void apply(const CliffordGate& g) {
    std::uint64_t m0 = 1ull << g.q0;
    switch (g.kind) {
      case GateKind::H: {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for_pairs(g.q0, [&](std::complex<double>& a0, std::complex<double>& a1) {
          auto t0 = (a0 + a1) * inv_sqrt2, t1 = (a0 - a1) * inv_sqrt2;
          a0 = t0;
          a1 = t1;
        });
        break;
      }
      case GateKind::S:
        for_set(m0, [](std::complex<double>& a) { a *= std::complex<double>(0, 1); });
        break;
      case GateKind::Sdg:
        for_set(m0, [](std::complex<double>& a) { a *= std::complex<double>(0, -1); });
        break;
      case GateKind::X:
        for_pairs(g.q0, [](std::complex<double>& a0, std::complex<double>& a1) {
          std::swap(a0, a1);
        });
        break;
      case GateKind::Y:
        for_pairs(g.q0, [](std::complex<double>& a0, std::complex<double>& a1) {
          auto t0 = std::complex<double>(0, -1) * a1;
          a1 = std::complex<double>(0, 1) * a0;
          a0 = t0;
        });
        break;
      case GateKind::Z:
        for_set(m0, [](std::complex<double>& a) { a = -a; });
        break;
      case GateKind::CX: {
        check_two(g);
        std::uint64_t mc = 1ull << g.q0, mt = 1ull << g.q1;
        for (std::uint64_t b = 0; b < amp_.size(); ++b)
          if ((b & mc) && !(b & mt)) std::swap(amp_[b], amp_[b | mt]);
        break;
      }
      case GateKind::CZ: {
        check_two(g);
        std::uint64_t mc = 1ull << g.q0, mt = 1ull << g.q1;
        for (std::uint64_t b = 0; b < amp_.size(); ++b)
          if ((b & mc) && (b & mt)) amp_[b] = -amp_[b];
        break;
      }
    }
  }

  void apply_rz(std::uint32_t q, double theta) {
    auto phase0 = std::polar(1.0, -theta / 2), phase1 = std::polar(1.0, theta / 2);
    std::uint64_t m = 1ull << q;
    for (std::uint64_t b = 0; b < amp_.size(); ++b) amp_[b] *= (b & m) ? phase1 : phase0;
  }

  /// exp(-i theta X_q / 2), applied directly (used to cross-check compiled
  /// Trotter layers against the exact layer exponentials).
  void apply_rx(std::uint32_t q, double theta) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    for_pairs(q, [&](std::complex<double>& a0, std::complex<double>& a1) {
      auto t0 = c * a0 - std::complex<double>(0, s) * a1;
      auto t1 = -std::complex<double>(0, s) * a0 + c * a1;
      a0 = t0;
      a1 = t1;
    });
  }

  /// exp(-i theta Z_q0 Z_q1 / 2).
  void apply_rzz(std::uint32_t q0, std::uint32_t q1, double theta) {
    auto even = std::polar(1.0, -theta / 2), odd = std::polar(1.0, theta / 2);
    std::uint64_t m0 = 1ull << q0, m1 = 1ull << q1;
    for (std::uint64_t b = 0; b < amp_.size(); ++b) {
      bool parity = static_cast<bool>(b & m0) != static_cast<bool>(b & m1);
      amp_[b] *= parity ? odd : even;
    }
  }

  template <std::size_t W>
  double expectation(const PauliString<W>& p) const {
    if (p.n != n_) throw std::invalid_argument("observable width mismatch");
    std::uint64_t xm = p.x[0], zm = p.z[0];
    unsigned num_y = std::popcount(xm & zm);
    std::complex<double> iy{1, 0};
    for (unsigned k = 0; k < (num_y & 3); ++k) iy *= std::complex<double>(0, 1);
    std::complex<double> acc{0, 0};
    for (std::uint64_t b = 0; b < amp_.size(); ++b) {
      double sgn = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
      acc += std::conj(amp_[b ^ xm]) * sgn * amp_[b];
    }
    acc *= iy * static_cast<double>(p.sign());
    return acc.real();
  }

  double expectation(const SparsePauli& p) const {
    return expectation(PauliString<1>::from_sparse(p));
  }

  double norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

 private:
  void check_two(const CliffordGate& g) const {
    if (g.q0 == g.q1) throw std::invalid_argument("two-qubit gate with equal qubits");
  }

  template <typename F>
  void for_pairs(std::uint32_t q, F&& f) {
    std::uint64_t m = 1ull << q;
    for (std::uint64_t b = 0; b < amp_.size(); ++b)
      if (!(b & m)) f(amp_[b], amp_[b | m]);
  }

  template <typename F>
  void for_set(std::uint64_t m, F&& f) {
    for (std::uint64_t b = 0; b < amp_.size(); ++b)
      if (b & m) f(amp_[b]);
  }

  std::uint32_t n_;
  std::vector<std::complex<double>> amp_;
};

/// <psi| O |psi> for |psi> = U(params)|0..0>, computed by dense forward
/// simulation. The ground truth for every differential test.
inline double exact_expectation(const ParamCircuit& circuit, std::span<const double> params,
                                const SparsePauli& observable) {
  circuit.validate();
  if (observable.n != circuit.n) throw std::invalid_argument("observable width mismatch");
  std::vector<double> angles = bind_params(circuit, params);
  Statevector sv(circuit.n);
  std::size_t rz = 0;
  for (const auto& op : circuit.ops) {
    if (op.is_rz)
      sv.apply_rz(op.qubit(), angles[rz++]);
    else
      sv.apply(op.gate);
  }
  return sv.expectation(observable);
}

namespace detail {

inline void exact_path_rec(const ParamCircuit& c, std::ptrdiff_t i, PauliString<4> p,
                           std::vector<std::pair<std::uint32_t, std::uint32_t>> exps,
                           std::map<Monomial, std::int64_t>& acc, std::uint64_t& leaves) {
  while (i >= 0) {
    const CircuitOp& op = c.ops[static_cast<std::size_t>(i)];
    if (!op.is_rz) {
      conjugate_adjoint_inplace(p, op.gate);
      --i;
      continue;
    }
    SplitOutcome<4> out = rz_split(p, op.qubit());
    if (!out.split) {
      p = out.cos_branch;
      --i;
      continue;
    }
    auto cos_exps = exps;
    ++cos_exps[op.param].second;
    exact_path_rec(c, i - 1, out.cos_branch, std::move(cos_exps), acc, leaves);
    ++exps[op.param].first;
    exact_path_rec(c, i - 1, out.sin_branch, std::move(exps), acc, leaves);
    return;
  }
  ++leaves;
  int ov = p.overlap_with_zero();
  if (ov == 0) return;
  Monomial mono;
  for (std::uint32_t param = 0; param < c.num_params; ++param) {
    auto [s, cexp] = exps[param];
    if (s || cexp) mono.powers.push_back({param, s, cexp});
  }
  acc[mono] += ov;
}

}  // namespace detail

/// Untruncated path sum by plain recursion over all 2^splits branches.
/// Deliberately shares nothing with the optimized engine beyond the Pauli
/// primitives, so the two can check each other. Cost 2^m: capped at m = 20.
inline Surrogate exact_path_sum(const ParamCircuit& circuit, const SparsePauli& observable) {
  circuit.validate();
  if (observable.n != circuit.n) throw std::invalid_argument("observable width mismatch");
  std::uint32_t m = circuit.rz_count();
  if (m > 20) throw capacity_error("exact path enumeration capped at 20 RZ gates");

  std::map<Monomial, std::int64_t> acc;
  std::uint64_t leaves = 0;
  detail::exact_path_rec(circuit, static_cast<std::ptrdiff_t>(circuit.ops.size()) - 1,
                         PauliString<4>::from_sparse(observable),
                         std::vector<std::pair<std::uint32_t, std::uint32_t>>(
                             circuit.num_params, {0, 0}),
                         acc, leaves);

  Surrogate s;
  s.num_params = circuit.num_params;
  s.prov.n = circuit.n;
  s.prov.observable = observable.str();
  s.prov.circuit_digest = circuit.digest();
  s.prov.observable_digest = observable.digest();
  s.prov.stats.paths_explored = leaves;
  for (auto& [mono, coeff] : acc)
    if (coeff != 0) {
      s.terms.emplace_back(mono, coeff);
      ++s.prov.stats.paths_contributing;
    }
  return s;
}

// --- seeded random instances -------------------------------------------------

struct RandomCircuitOptions {
  std::uint32_t min_qubits = 1, max_qubits = 8;
  std::uint32_t min_rz = 1, max_rz = 12;
  std::uint32_t cliffords_per_rz = 3;
};

struct RandomInstance {
  ParamCircuit circuit;
  SparsePauli observable;
};

/// Uniformly random Clifford+RZ circuit and non-identity observable. All
/// draws come from the caller's seeded generator, so failures replay.
inline RandomInstance random_clifford_rz_circuit(std::mt19937_64& rng,
                                                 const RandomCircuitOptions& o = {}) {
  auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  RandomInstance inst;
  ParamCircuit& c = inst.circuit;
  c.n = uniform(o.min_qubits, o.max_qubits);
  std::uint32_t m = uniform(o.min_rz, o.max_rz);
  std::uint32_t num_cliffords = uniform(m, o.cliffords_per_rz * m + 2);
  c.num_params = uniform(1, m);

  std::vector<char> kinds(m, 'R');
  kinds.insert(kinds.end(), num_cliffords, 'C');
  std::shuffle(kinds.begin(), kinds.end(), rng);

  std::uint32_t rz_emitted = 0;
  for (char k : kinds) {
    if (k == 'R') {
      // the first num_params RZ gates cover every param id once
      std::uint32_t param = rz_emitted < c.num_params ? rz_emitted
                                                      : uniform(0, c.num_params - 1);
      c.add_rz(uniform(0, c.n - 1), param);
      ++rz_emitted;
    } else {
      GateKind kind = static_cast<GateKind>(uniform(0, c.n >= 2 ? kNumGateKinds - 1 : 5));
      if (is_two_qubit(kind)) {
        std::uint32_t a = uniform(0, c.n - 1);
        std::uint32_t b = uniform(0, c.n - 2);
        if (b >= a) ++b;
        c.add(kind, a, b);
      } else {
        c.add(kind, uniform(0, c.n - 1));
      }
    }
  }
  c.validate();

  SparsePauli& obs = inst.observable;
  obs.n = c.n;
  obs.negative = uniform(0, 1) == 1;
  while (obs.sites.empty()) {
    for (std::uint32_t q = 0; q < c.n; ++q) {
      auto p = static_cast<Pauli>(uniform(0, 3));
      if (p != Pauli::I) obs.sites.emplace_back(q, p);
    }
  }
  return inst;
}

}  // namespace paulipath

#endif  // PAULIPATH_ORACLE_HPP
