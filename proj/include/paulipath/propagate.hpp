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

#ifndef PAULIPATH_PROPAGATE_HPP
#define PAULIPATH_PROPAGATE_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "paulipath/circuit.hpp"
#include "paulipath/pauli.hpp"
#include "paulipath/surrogate.hpp"
#include "paulipath/truncation.hpp"

namespace paulipath {

/// One path through the circuit: the RZ gates (by 0-based index in
/// application order, strictly increasing) at which it split, with the
/// chosen channel (+1 cosine, -1 sine). Non-listed RZ gates took channel 0.
struct FrequencyVector {
  std::vector<std::pair<std::uint32_t, std::int8_t>> splits;

  std::uint32_t norm1() const { return static_cast<std::uint32_t>(splits.size()); }
  auto operator<=>(const FrequencyVector&) const = default;
};

enum class BuildStatus : std::uint8_t { ok = 0, memory_capped = 1 };

struct EngineOptions {
  std::uint32_t workers = 1;
  /// Approximate cap on stored monomial entries across all workers;
  /// exceeding it aborts the search with partial results. 0 = unbounded.
  std::uint64_t max_monomials = 0;
  /// Cap on queued subtree roots during work distribution.
  std::uint64_t frontier_cap = 1ull << 20;
  /// Collect the contributing frequency vectors (small instances only).
  bool record_paths = false;
  /// Keep each worker's partial surrogate alongside the merged result.
  bool keep_worker_partials = false;
  /// Called at most once per interval with a running stats snapshot.
  std::function<void(const SearchStats&)> progress;
  double progress_interval_s = 2.0;
};

struct BuildResult {
  Surrogate surrogate;
  SearchStats stats;
  BuildStatus status = BuildStatus::ok;
  std::vector<std::pair<FrequencyVector, int>> recorded_paths;
  std::vector<Surrogate> worker_partials;
};

namespace detail {

/// Circuit preprocessed for the backward pass: Clifford kinds are replaced
/// by their adjoints up front, RZ gates carry their application-order index.
struct EngineOp {
  std::uint8_t code;  // GateKind value, or kRzCode
  std::uint32_t q0 = 0, q1 = 0;
  std::uint32_t rz_index = 0;
};
inline constexpr std::uint8_t kRzCode = 0xff;

inline std::vector<EngineOp> preprocess_ops(const ParamCircuit& c) {
  std::vector<EngineOp> out;
  out.reserve(c.ops.size());
  std::uint32_t rz_index = 0;
  for (const auto& op : c.ops) {
    EngineOp e;
    if (op.is_rz) {
      e.code = kRzCode;
      e.q0 = op.qubit();
      e.rz_index = rz_index++;
    } else {
      e.code = static_cast<std::uint8_t>(adjoint_kind(op.gate.kind));
      e.q0 = op.gate.q0;
      e.q1 = op.gate.q1;
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace detail

/// Depth-first enumeration of frequency vectors: propagates the observable
/// backward through the circuit, splitting at every RZ whose local Pauli is
/// X or Y, pruning by max_freq / trunc_prob / max_weight, and summing each
/// surviving path's +-1 endpoint overlap into its trigonometric monomial.
template <std::size_t W>
class PathEngine {
 public:
  PathEngine(const ParamCircuit& circuit, const PauliString<W>& observable,
             const TruncationConfig& cfg, const EngineOptions& opts)
      : circuit_(circuit), obs_(observable), cfg_(cfg), opts_(opts) {
    cfg_.validate();
    circuit_.validate();
    if (observable.n != circuit.n)
      throw std::invalid_argument("observable width does not match circuit");
    if (observable.weight() == 0)
      throw std::invalid_argument("observable must act on at least one qubit");
    eops_ = detail::preprocess_ops(circuit_);
    rz_param_ = circuit_.rz_params();
    m_ = static_cast<std::uint32_t>(rz_param_.size());
    ell_ = cfg_.max_freq ? *cfg_.max_freq : static_cast<std::uint64_t>(m_);
    wmax_ = cfg_.max_weight ? *cfg_.max_weight : UINT32_MAX;
    p_active_ = cfg_.trunc_prob > 0.0;
    first_channel_ = cfg_.bias == Bias::prefer_sin ? -1 : +1;
  }

  BuildResult run() {
    auto t0 = std::chrono::steady_clock::now();
    BuildResult result;

    std::vector<Worker> workers;
    std::uint32_t nworkers = std::max<std::uint32_t>(1, opts_.workers);
    workers.reserve(nworkers);
    for (std::uint32_t i = 0; i < nworkers; ++i) workers.emplace_back(*this);

    Node initial;
    initial.next = static_cast<std::int32_t>(eops_.size()) - 1;
    initial.pauli = obs_;
    initial.weight = obs_.weight();
    workers[0].note_weight(initial.weight);
    if (initial.weight > wmax_) {
      workers[0].stats.truncated_by_weight++;
      workers[0].stats.paths_explored++;
    } else if (nworkers == 1) {
      workers[0].run_node(initial);
    } else {
      // Seed phase: breadth-first expansion until there are enough subtree
      // roots to hand out. Completed or truncated paths encountered here are
      // accounted by worker 0.
      std::deque<Node> queue;
      queue.push_back(std::move(initial));
      std::size_t target = std::max<std::size_t>(64, 16 * nworkers);
      while (!queue.empty() && queue.size() < target && !aborted_.load()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        Node sibling;
        if (workers[0].advance_to_split(node, sibling)) {
          queue.push_back(std::move(node));
          queue.push_back(std::move(sibling));
          frontier_peak_ = std::max(frontier_peak_, queue.size());
          if (opts_.frontier_cap && queue.size() > opts_.frontier_cap) {
            aborted_.store(true);
            break;
          }
        }
      }
      std::vector<Node> roots(queue.begin(), queue.end());
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(nworkers);
      for (std::uint32_t w = 0; w < nworkers; ++w) {
        pool.emplace_back([&, w] {
          try {
            while (!aborted_.load(std::memory_order_relaxed)) {
              std::size_t i = next.fetch_add(1);
              if (i >= roots.size()) break;
              workers[w].run_node(roots[i]);
            }
          } catch (...) {
            errors[w] = std::current_exception();
            aborted_.store(true);
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }

    // Merge worker accumulators (commutative integer sums, so the result is
    // independent of scheduling and of the worker count).
    SearchStats stats;
    std::uint64_t max_depth = 0;
    for (auto& w : workers) {
      stats += w.stats;
      max_depth = std::max(max_depth, w.max_split_depth);
    }
    stats.max_rss_proxy = std::max<std::uint64_t>(frontier_peak_, max_depth);
    stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (opts_.keep_worker_partials)
      for (auto& w : workers)
        result.worker_partials.push_back(make_surrogate(w.acc, w.stats));

    std::unordered_map<Monomial, std::int64_t, MonomialHash> merged = std::move(workers[0].acc);
    for (std::size_t i = 1; i < workers.size(); ++i) {
      for (auto& [k, v] : workers[i].acc) {
        std::int64_t& slot = merged[k];
        if (__builtin_add_overflow(slot, v, &slot))
          throw std::overflow_error("coefficient overflow");
      }
    }
    result.surrogate = make_surrogate(merged, stats);
    result.stats = stats;
    result.status = aborted_.load() ? BuildStatus::memory_capped : BuildStatus::ok;

    if (opts_.record_paths) {
      for (auto& w : workers)
        result.recorded_paths.insert(result.recorded_paths.end(), w.recorded.begin(),
                                     w.recorded.end());
      std::sort(result.recorded_paths.begin(), result.recorded_paths.end());
    }
    return result;
  }

 private:
  struct Node {
    std::int32_t next = -1;  // index of the next op to process (walking down)
    PauliString<W> pauli;
    std::uint32_t weight = 0;
    std::vector<std::pair<std::uint32_t, std::int8_t>> splits;
  };

  struct Undo {
    std::uint32_t q0, q1;
    std::uint8_t l0, l1;
    std::uint8_t flags;  // bit0: two-qubit, bit1: previous sign
  };

  struct Worker {
    PathEngine& eng;
    PauliString<W> ps;
    std::vector<std::pair<std::uint32_t, std::int8_t>> splits;
    std::vector<Undo> journal;
    std::unordered_map<Monomial, std::int64_t, MonomialHash> acc;
    SearchStats stats;
    SurvivalCache survival;
    std::vector<std::pair<FrequencyVector, int>> recorded;
    std::uint64_t max_split_depth = 0;
    std::uint64_t leaves_since_flush = 0;
    std::uint64_t flushed_explored = 0;
    std::uint64_t flushed_contributing = 0;
    Monomial scratch;

    explicit Worker(PathEngine& e)
        : eng(e), survival(e.m_ == 0 ? 1 : e.m_, std::min<std::uint64_t>(e.ell_, e.m_ == 0 ? 1 : e.m_)) {}

    void note_weight(std::uint32_t w) {
      if (w > stats.max_weight_seen) stats.max_weight_seen = w;
    }

    void run_node(const Node& node) {
      ps = node.pauli;
      splits = node.splits;
      journal.clear();
      explore(node.next, node.weight);
    }

    // Applies one backward Clifford step to `p` and returns the new weight.
    std::uint32_t clifford_step(PauliString<W>& p, const detail::EngineOp& op,
                                std::uint32_t weight, bool journaled) {
      const CliffordTable& t = CliffordTable::instance();
      GateKind kind = static_cast<GateKind>(op.code);
      if (!is_two_qubit(kind)) {
        Pauli l0 = p.local(op.q0);
        if (l0 == Pauli::I) return weight;
        if (journaled)
          journal.push_back({op.q0, 0, static_cast<std::uint8_t>(l0), 0,
                             static_cast<std::uint8_t>(p.negative ? 2 : 0)});
        const auto& e = t.one_qubit(kind)[static_cast<unsigned>(l0)];
        p.set_local(op.q0, static_cast<Pauli>(e.out));
        p.negative ^= e.flip;
        return weight;  // single-qubit Cliffords never change the weight
      }
      Pauli l0 = p.local(op.q0), l1 = p.local(op.q1);
      unsigned idx = static_cast<unsigned>(l0) | (static_cast<unsigned>(l1) << 2);
      if (idx == 0) return weight;
      if (journaled)
        journal.push_back({op.q0, op.q1, static_cast<std::uint8_t>(l0),
                           static_cast<std::uint8_t>(l1),
                           static_cast<std::uint8_t>(1 | (p.negative ? 2 : 0))});
      const auto& e = t.two_qubit(kind)[idx];
      Pauli o0 = static_cast<Pauli>(e.out & 3), o1 = static_cast<Pauli>((e.out >> 2) & 3);
      p.set_local(op.q0, o0);
      p.set_local(op.q1, o1);
      p.negative ^= e.flip;
      weight += static_cast<std::uint32_t>(o0 != Pauli::I) + static_cast<std::uint32_t>(o1 != Pauli::I);
      weight -= static_cast<std::uint32_t>(l0 != Pauli::I) + static_cast<std::uint32_t>(l1 != Pauli::I);
      return weight;
    }

    void rewind(std::size_t mark) {
      while (journal.size() > mark) {
        const Undo& u = journal.back();
        ps.set_local(u.q0, static_cast<Pauli>(u.l0));
        if (u.flags & 1) ps.set_local(u.q1, static_cast<Pauli>(u.l1));
        ps.negative = (u.flags & 2) != 0;
        journal.pop_back();
      }
    }

    void leaf() {
      ++stats.paths_explored;
      if (++leaves_since_flush >= 65536) eng.flush(*this);
    }

    void complete() {
      leaf();
      int ov = ps.overlap_with_zero();
      if (ov == 0) return;
      ++stats.paths_contributing;
      scratch.powers.clear();
      for (auto [rz, channel] : splits) {
        std::uint32_t param = eng.rz_param_[rz];
        ParamPower* slot = nullptr;
        for (auto& f : scratch.powers)
          if (f.param == param) {
            slot = &f;
            break;
          }
        if (!slot) {
          scratch.powers.push_back({param, 0, 0});
          slot = &scratch.powers.back();
        }
        if (channel < 0)
          ++slot->sin_exp;
        else
          ++slot->cos_exp;
      }
      std::sort(scratch.powers.begin(), scratch.powers.end(),
                [](const ParamPower& a, const ParamPower& b) { return a.param < b.param; });
      auto [it, inserted] = acc.try_emplace(scratch, 0);
      if (inserted && eng.opts_.max_monomials &&
          eng.monomial_entries_.fetch_add(1, std::memory_order_relaxed) + 1 >
              eng.opts_.max_monomials) {
        eng.aborted_.store(true);
        return;
      }
      if (__builtin_add_overflow(it->second, static_cast<std::int64_t>(ov), &it->second))
        throw std::overflow_error("coefficient overflow");
      if (eng.opts_.record_paths) {
        FrequencyVector fv;
        fv.splits.assign(splits.rbegin(), splits.rend());
        recorded.emplace_back(std::move(fv), ov);
      }
    }

    /// Depth-first walk of ops[i..0] with in-place mutation and an undo
    /// journal; recursion happens only at splits.
    void explore(std::int32_t i, std::uint32_t weight) {
      if (eng.aborted_.load(std::memory_order_relaxed)) return;
      std::size_t mark = journal.size();
      for (; i >= 0; --i) {
        const detail::EngineOp& op = eng.eops_[i];
        if (op.code != detail::kRzCode) {
          weight = clifford_step(ps, op, weight, true);
          note_weight(weight);
          if (weight > eng.wmax_) {
            ++stats.truncated_by_weight;
            leaf();
            rewind(mark);
            return;
          }
          continue;
        }
        Pauli loc = ps.local(op.q0);
        if (loc == Pauli::I || loc == Pauli::Z) {
          if (eng.p_active_ && !splits.empty() &&
              survival.get(splits.size(), eng.m_ - op.rz_index) < eng.cfg_.trunc_prob) {
            ++stats.truncated_by_prob;
            leaf();
            rewind(mark);
            return;
          }
          continue;
        }
        std::uint64_t l_new = splits.size() + 1;
        if (l_new > eng.ell_) {
          ++stats.truncated_by_freq;
          leaf();
          rewind(mark);
          return;
        }
        if (eng.p_active_ &&
            survival.get(l_new, eng.m_ - op.rz_index) < eng.cfg_.trunc_prob) {
          ++stats.truncated_by_prob;
          leaf();
          rewind(mark);
          return;
        }
        max_split_depth = std::max(max_split_depth, l_new);
        for (int half = 0; half < 2; ++half) {
          std::int8_t channel = half == 0 ? eng.first_channel_
                                          : static_cast<std::int8_t>(-eng.first_channel_);
          if (channel > 0) {
            splits.emplace_back(op.rz_index, channel);
            explore(i - 1, weight);
            splits.pop_back();
          } else {
            bool old_neg = ps.negative;
            apply_rz_sin_adjoint_inplace(ps, op.q0);
            splits.emplace_back(op.rz_index, channel);
            explore(i - 1, weight);
            splits.pop_back();
            ps.set_local(op.q0, loc);
            ps.negative = old_neg;
          }
        }
        rewind(mark);
        return;
      }
      complete();
      rewind(mark);
    }

    /// Seed-phase stepper: advances `node` until it completes, truncates, or
    /// splits. On a split, `node` becomes the first child and `sibling` the
    /// second; returns true. Uses the same predicates as explore().
    bool advance_to_split(Node& node, Node& sibling) {
      for (std::int32_t i = node.next; i >= 0; --i) {
        const detail::EngineOp& op = eng.eops_[i];
        if (op.code != detail::kRzCode) {
          node.weight = clifford_step(node.pauli, op, node.weight, false);
          note_weight(node.weight);
          if (node.weight > eng.wmax_) {
            ++stats.truncated_by_weight;
            leaf();
            return false;
          }
          continue;
        }
        Pauli loc = node.pauli.local(op.q0);
        if (loc == Pauli::I || loc == Pauli::Z) {
          if (eng.p_active_ && !node.splits.empty() &&
              survival.get(node.splits.size(), eng.m_ - op.rz_index) < eng.cfg_.trunc_prob) {
            ++stats.truncated_by_prob;
            leaf();
            return false;
          }
          continue;
        }
        std::uint64_t l_new = node.splits.size() + 1;
        if (l_new > eng.ell_) {
          ++stats.truncated_by_freq;
          leaf();
          return false;
        }
        if (eng.p_active_ &&
            survival.get(l_new, eng.m_ - op.rz_index) < eng.cfg_.trunc_prob) {
          ++stats.truncated_by_prob;
          leaf();
          return false;
        }
        max_split_depth = std::max(max_split_depth, l_new);
        sibling = node;
        Node& cos_child = eng.first_channel_ > 0 ? node : sibling;
        Node& sin_child = eng.first_channel_ > 0 ? sibling : node;
        cos_child.splits.emplace_back(op.rz_index, +1);
        apply_rz_sin_adjoint_inplace(sin_child.pauli, op.q0);
        sin_child.splits.emplace_back(op.rz_index, -1);
        node.next = sibling.next = i - 1;
        return true;
      }
      // completed during seeding: account it through the regular path
      ps = node.pauli;
      splits = node.splits;
      complete();
      return false;
    }
  };

  Surrogate make_surrogate(const std::unordered_map<Monomial, std::int64_t, MonomialHash>& acc,
                           const SearchStats& stats) const {
    Surrogate s;
    s.num_params = circuit_.num_params;
    s.prov.n = circuit_.n;
    s.prov.observable = obs_.sparse_str();
    s.prov.circuit_digest = circuit_.digest();
    s.prov.observable_digest = obs_.to_sparse().digest();
    s.prov.config = cfg_;
    s.prov.stats = stats;
    s.terms.reserve(acc.size());
    for (const auto& [k, v] : acc)
      if (v != 0) s.terms.emplace_back(k, v);
    std::sort(s.terms.begin(), s.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return s;
  }

  void flush(Worker& w) {
    w.leaves_since_flush = 0;
    shared_explored_.fetch_add(w.stats.paths_explored - w.flushed_explored,
                               std::memory_order_relaxed);
    shared_contributing_.fetch_add(w.stats.paths_contributing - w.flushed_contributing,
                                   std::memory_order_relaxed);
    w.flushed_explored = w.stats.paths_explored;
    w.flushed_contributing = w.stats.paths_contributing;
    if (!opts_.progress) return;
    auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    auto last = last_progress_.load(std::memory_order_relaxed);
    auto interval =
        static_cast<std::int64_t>(opts_.progress_interval_s * 1e9);
    if (now - last < interval) return;
    if (!last_progress_.compare_exchange_strong(last, now)) return;
    SearchStats snap;
    snap.paths_explored = shared_explored_.load(std::memory_order_relaxed);
    snap.paths_contributing = shared_contributing_.load(std::memory_order_relaxed);
    std::lock_guard<std::mutex> lock(progress_mutex_);
    opts_.progress(snap);
  }

  ParamCircuit circuit_;
  PauliString<W> obs_;
  TruncationConfig cfg_;
  EngineOptions opts_;
  std::vector<detail::EngineOp> eops_;
  std::vector<std::uint32_t> rz_param_;
  std::uint32_t m_ = 0;
  std::uint64_t ell_ = 0;
  std::uint32_t wmax_ = UINT32_MAX;
  bool p_active_ = false;
  std::int8_t first_channel_ = +1;

  std::atomic<std::uint64_t> monomial_entries_{0};
  std::atomic<bool> aborted_{false};
  std::atomic<std::int64_t> last_progress_{0};
  std::atomic<std::uint64_t> shared_explored_{0};
  std::atomic<std::uint64_t> shared_contributing_{0};
  std::mutex progress_mutex_;
  std::size_t frontier_peak_ = 0;
};

template <std::size_t W>
inline BuildResult enumerate_paths(const ParamCircuit& circuit,
                                   const PauliString<W>& observable,
                                   const TruncationConfig& cfg,
                                   const EngineOptions& opts = {}) {
  PathEngine<W> engine(circuit, observable, cfg, opts);
  return engine.run();
}

/// Width-dispatching overload.
inline BuildResult enumerate_paths(const ParamCircuit& circuit, const SparsePauli& observable,
                                   const TruncationConfig& cfg, const EngineOptions& opts = {}) {
  switch (words_for_qubits(circuit.n)) {
    case 1: return enumerate_paths(circuit, PauliString<1>::from_sparse(observable), cfg, opts);
    case 2: return enumerate_paths(circuit, PauliString<2>::from_sparse(observable), cfg, opts);
    default: return enumerate_paths(circuit, PauliString<4>::from_sparse(observable), cfg, opts);
  }
}

/// Evaluates only the two pure-channel paths (all-cosine and all-sine at
/// every forced split; channel 0 elsewhere) and returns the ones with
/// non-zero endpoint overlap. Linear in the gate count.
template <std::size_t W>
inline std::vector<std::pair<Monomial, std::int64_t>> find_trivial_paths(
    const ParamCircuit& circuit, const PauliString<W>& observable) {
  circuit.validate();
  if (observable.n != circuit.n)
    throw std::invalid_argument("observable width does not match circuit");
  if (observable.weight() == 0)
    throw std::invalid_argument("observable must act on at least one qubit");
  auto eops = detail::preprocess_ops(circuit);
  auto rz_param = circuit.rz_params();
  const CliffordTable& t = CliffordTable::instance();

  std::vector<std::pair<Monomial, std::int64_t>> out;
  for (int pass = 0; pass < 2; ++pass) {
    const bool sine = pass == 1;
    PauliString<W> p = observable;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> exps(circuit.num_params, {0, 0});
    for (auto it = eops.rbegin(); it != eops.rend(); ++it) {
      if (it->code != detail::kRzCode) {
        CliffordGate g{static_cast<GateKind>(it->code), it->q0, it->q1};
        apply_conjugation_inplace(p, g, t);
        continue;
      }
      Pauli loc = p.local(it->q0);
      if (loc == Pauli::I || loc == Pauli::Z) continue;
      auto& [s_exp, c_exp] = exps[rz_param[it->rz_index]];
      if (sine) {
        apply_rz_sin_adjoint_inplace(p, it->q0);
        ++s_exp;
      } else {
        ++c_exp;
      }
    }
    int ov = p.overlap_with_zero();
    if (ov == 0) continue;
    Monomial mono;
    for (std::uint32_t param = 0; param < circuit.num_params; ++param) {
      auto [s_exp, c_exp] = exps[param];
      if (s_exp || c_exp) mono.powers.push_back({param, s_exp, c_exp});
    }
    if (!out.empty() && out.front().first == mono) continue;  // no splits anywhere
    out.emplace_back(std::move(mono), ov);
  }
  return out;
}

inline std::vector<std::pair<Monomial, std::int64_t>> find_trivial_paths(
    const ParamCircuit& circuit, const SparsePauli& observable) {
  switch (words_for_qubits(circuit.n)) {
    case 1: return find_trivial_paths(circuit, PauliString<1>::from_sparse(observable));
    case 2: return find_trivial_paths(circuit, PauliString<2>::from_sparse(observable));
    default: return find_trivial_paths(circuit, PauliString<4>::from_sparse(observable));
  }
}

/// Expectation of the fully Clifford circuit at a parameter corner: each RZ
/// is the identity (angle 0) or an S gate (angle pi/2), chosen per parameter.
/// A single backward pass; returns a value in {-1, 0, +1}.
template <std::size_t W>
inline int clifford_endpoint(const ParamCircuit& circuit, const PauliString<W>& observable,
                             std::span<const std::uint8_t> half_pi) {
  circuit.validate();
  if (observable.n != circuit.n)
    throw std::invalid_argument("observable width does not match circuit");
  if (half_pi.size() != circuit.num_params)
    throw std::invalid_argument("endpoint choice length mismatch");
  const CliffordTable& t = CliffordTable::instance();
  PauliString<W> p = observable;
  for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it) {
    if (it->is_rz) {
      if (half_pi[it->param])
        conjugate_adjoint_inplace(p, CliffordGate::one(GateKind::S, it->qubit()), t);
    } else {
      conjugate_adjoint_inplace(p, it->gate, t);
    }
  }
  return p.overlap_with_zero();
}

inline int clifford_endpoint(const ParamCircuit& circuit, const SparsePauli& observable,
                             std::span<const std::uint8_t> half_pi) {
  switch (words_for_qubits(circuit.n)) {
    case 1: return clifford_endpoint(circuit, PauliString<1>::from_sparse(observable), half_pi);
    case 2: return clifford_endpoint(circuit, PauliString<2>::from_sparse(observable), half_pi);
    default: return clifford_endpoint(circuit, PauliString<4>::from_sparse(observable), half_pi);
  }
}

}  // namespace paulipath

#endif  // PAULIPATH_PROPAGATE_HPP
