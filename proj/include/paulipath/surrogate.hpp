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

#ifndef PAULIPATH_SURROGATE_HPP
#define PAULIPATH_SURROGATE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "paulipath/circuit.hpp"
#include "paulipath/detail.hpp"
#include "paulipath/truncation.hpp"

namespace paulipath {

/// sin/cos powers of one parameter inside a monomial. (0,0) entries are
/// never stored.
struct ParamPower {
  std::uint32_t param = 0;
  std::uint32_t sin_exp = 0;
  std::uint32_t cos_exp = 0;

  auto operator<=>(const ParamPower&) const = default;
};

/// Product of sin^a(theta_p) cos^b(theta_p) factors over distinct parameters,
/// kept sorted by param id. The empty monomial is the constant 1. The total
/// degree equals the split count of every path that contributes to it.
struct Monomial {
  std::vector<ParamPower> powers;

  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (const auto& f : powers) d += f.sin_exp + f.cos_exp;
    return d;
  }

  void canonicalize() {
    std::erase_if(powers, [](const ParamPower& f) { return !f.sin_exp && !f.cos_exp; });
    std::sort(powers.begin(), powers.end());
    for (std::size_t i = 0; i + 1 < powers.size(); ++i)
      if (powers[i].param == powers[i + 1].param)
        throw std::invalid_argument("duplicate parameter in monomial");
  }

  std::string str() const {
    if (powers.empty()) return "1";
    std::string out;
    for (const auto& f : powers) {
      for (auto [exp, name] : {std::pair{f.sin_exp, "sin"}, std::pair{f.cos_exp, "cos"}}) {
        if (!exp) continue;
        if (!out.empty()) out += ' ';
        out += name;
        out += "(p" + std::to_string(f.param) + ")";
        if (exp > 1) out += "^" + std::to_string(exp);
      }
    }
    return out;
  }

  auto operator<=>(const Monomial&) const = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::uint64_t h = detail::kFnvOffset;
    for (const auto& f : m.powers) {
      h = detail::hash_mix(h, f.param);
      h = detail::hash_mix(h, (static_cast<std::uint64_t>(f.sin_exp) << 32) | f.cos_exp);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Where a surrogate came from: enough to detect mismatched reuse and to
/// re-bind parameters by role without the original circuit.
struct Provenance {
  std::uint32_t n = 0;
  std::string observable;  // canonical sparse text
  std::uint64_t circuit_digest = 0;
  std::uint64_t observable_digest = 0;
  TruncationConfig config;
  SearchStats stats;
  std::vector<ParamInfo> param_roles;  // empty when unknown
};

/// The classical landscape object: a finite trigonometric-polynomial
/// approximation of f(theta), stored as sorted (monomial, integer
/// coefficient) entries. Coefficients are exact path-count sums; floating
/// point enters only at evaluation.
class Surrogate {
 public:
  std::uint32_t num_params = 0;
  std::vector<std::pair<Monomial, std::int64_t>> terms;  // sorted, no zeros
  Provenance prov;

  std::size_t size() const { return terms.size(); }

  /// Sorts entries, merges equal monomials and drops zero coefficients.
  void canonicalize() {
    for (auto& [m, c] : terms) m.canonicalize();
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Monomial, std::int64_t>> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
      if (!out.empty() && out.back().first == t.first) {
        if (__builtin_add_overflow(out.back().second, t.second, &out.back().second))
          throw std::overflow_error("coefficient overflow");
        if (out.back().second == 0) out.pop_back();
      } else if (t.second != 0) {
        out.push_back(std::move(t));
      }
    }
    terms = std::move(out);
  }

  std::int64_t coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), m,
                               [](const auto& t, const Monomial& k) { return t.first < k; });
    return (it != terms.end() && it->first == m) ? it->second : 0;
  }

  /// Sum of |coefficients|; bounds |evaluate| over all parameter values.
  std::uint64_t coeff_l1() const {
    std::uint64_t s = 0;
    for (const auto& [m, c] : terms) s += static_cast<std::uint64_t>(c < 0 ? -c : c);
    return s;
  }

  double evaluate(std::span<const double> params) const;

  /// Coefficient-wise integer sum of two surrogates for the same circuit.
  static Surrogate merge(const Surrogate& a, const Surrogate& b) {
    if (a.num_params != b.num_params)
      throw std::invalid_argument("merge: parameter count mismatch");
    if (a.prov.circuit_digest != b.prov.circuit_digest)
      throw std::invalid_argument("merge: circuit digest mismatch");
    Surrogate out;
    out.num_params = a.num_params;
    out.prov = a.prov;
    out.prov.stats += b.prov.stats;
    out.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
        out.terms.push_back(a.terms[i++]);
      } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
        out.terms.push_back(b.terms[j++]);
      } else {
        std::int64_t sum;
        if (__builtin_add_overflow(a.terms[i].second, b.terms[j].second, &sum))
          throw std::overflow_error("coefficient overflow in merge");
        if (sum != 0) out.terms.push_back({a.terms[i].first, sum});
        ++i;
        ++j;
      }
    }
    return out;
  }

  /// Equality of the landscape and its identifying provenance. Search
  /// statistics are volatile accounting and only compared on request.
  bool equals(const Surrogate& o, bool include_stats) const {
    bool base = num_params == o.num_params && terms == o.terms && prov.n == o.prov.n &&
                prov.observable == o.prov.observable &&
                prov.circuit_digest == o.prov.circuit_digest &&
                prov.observable_digest == o.prov.observable_digest &&
                prov.config == o.prov.config && prov.param_roles == o.prov.param_roles;
    if (!base || !include_stats) return base;
    const SearchStats &s = prov.stats, &t = o.prov.stats;
    return s.paths_explored == t.paths_explored &&
           s.paths_contributing == t.paths_contributing &&
           s.truncated_by_freq == t.truncated_by_freq &&
           s.truncated_by_prob == t.truncated_by_prob &&
           s.truncated_by_weight == t.truncated_by_weight &&
           s.max_rss_proxy == t.max_rss_proxy &&
           s.max_weight_seen == t.max_weight_seen && s.wall_time_s == t.wall_time_s;
  }
  bool operator==(const Surrogate& o) const { return equals(o, false); }

  std::string to_bytes() const;
  static Surrogate from_bytes(std::string_view bytes);
  void save(const std::string& path) const;
  static Surrogate load(const std::string& path);
};

/// Reusable evaluator: computes sin/cos of each parameter once per point and
/// reads powers from per-parameter tables grown on demand.
class Evaluator {
 public:
  explicit Evaluator(const Surrogate& s)
      : s_(s), sinv_(s.num_params), cosv_(s.num_params), spow_(s.num_params), cpow_(s.num_params) {}

  double operator()(std::span<const double> params) {
    if (params.size() != s_.num_params)
      throw std::invalid_argument("parameter vector length mismatch");
    for (std::uint32_t i = 0; i < s_.num_params; ++i) {
      sinv_[i] = std::sin(params[i]);
      cosv_[i] = std::cos(params[i]);
      spow_[i].clear();
      cpow_[i].clear();
    }
    double acc = 0.0;
    for (const auto& [mono, coeff] : s_.terms) {
      double v = static_cast<double>(coeff);
      for (const auto& f : mono.powers) {
        if (f.sin_exp) v *= power(spow_[f.param], sinv_[f.param], f.sin_exp);
        if (f.cos_exp) v *= power(cpow_[f.param], cosv_[f.param], f.cos_exp);
      }
      acc += v;
    }
    return acc;
  }

 private:
  static double power(std::vector<double>& table, double base, std::uint32_t e) {
    if (table.empty()) table.push_back(1.0);
    while (table.size() <= e) table.push_back(table.back() * base);
    return table[e];
  }

  const Surrogate& s_;
  std::vector<double> sinv_, cosv_;
  std::vector<std::vector<double>> spow_, cpow_;
};

inline double Surrogate::evaluate(std::span<const double> params) const {
  Evaluator ev(*this);
  return ev(params);
}

// --- slices ------------------------------------------------------------------

/// One-variable slice through parameter space: theta_i = scale_i * t + offset_i.
struct AffineBinding {
  std::vector<double> scale;
  std::vector<double> offset;

  static AffineBinding uniform(std::uint32_t num_params) {
    AffineBinding b;
    b.scale.assign(num_params, 1.0);
    b.offset.assign(num_params, 0.0);
    return b;
  }
  void validate(std::uint32_t num_params) const {
    if (scale.size() != num_params || offset.size() != num_params)
      throw std::invalid_argument("binding length mismatch");
  }
};

/// Two-variable slice: theta_i = scale1_i * t1 + scale2_i * t2 + offset_i.
/// When a parameter belongs to exactly one group (the other scale is 0), the
/// surface diagonal t1 = t2 reproduces the corresponding sweep bit-exactly.
struct SurfaceBinding {
  std::vector<double> scale1;
  std::vector<double> scale2;
  std::vector<double> offset;

  void validate(std::uint32_t num_params) const {
    if (scale1.size() != num_params || scale2.size() != num_params ||
        offset.size() != num_params)
      throw std::invalid_argument("binding length mismatch");
  }
};

inline std::vector<std::pair<double, double>> sweep(const Surrogate& s,
                                                    const AffineBinding& binding,
                                                    std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("empty sweep grid");
  binding.validate(s.num_params);
  Evaluator ev(s);
  std::vector<double> params(s.num_params);
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double t : grid) {
    for (std::uint32_t i = 0; i < s.num_params; ++i)
      params[i] = binding.scale[i] * t + binding.offset[i];
    out.emplace_back(t, ev(params));
  }
  return out;
}

/// values[i][j] = surrogate at (grid1[i], grid2[j]). Rows are distributed
/// over workers; assembly into the preallocated matrix is deterministic.
inline std::vector<std::vector<double>> surface(const Surrogate& s,
                                                const SurfaceBinding& binding,
                                                std::span<const double> grid1,
                                                std::span<const double> grid2,
                                                std::uint32_t workers = 1) {
  if (grid1.empty() || grid2.empty()) throw std::invalid_argument("empty surface grid");
  binding.validate(s.num_params);
  std::vector<std::vector<double>> values(grid1.size(),
                                          std::vector<double>(grid2.size(), 0.0));
  auto run_rows = [&](std::size_t begin, std::size_t end) {
    Evaluator ev(s);
    std::vector<double> params(s.num_params);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < grid2.size(); ++j) {
        for (std::uint32_t p = 0; p < s.num_params; ++p)
          params[p] = binding.scale1[p] * grid1[i] + binding.scale2[p] * grid2[j] +
                      binding.offset[p];
        values[i][j] = ev(params);
      }
    }
  };
  workers = std::max<std::uint32_t>(1, std::min<std::uint32_t>(workers, grid1.size()));
  if (workers == 1) {
    run_rows(0, grid1.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (grid1.size() + workers - 1) / workers;
    for (std::uint32_t w = 0; w < workers; ++w) {
      std::size_t b = w * chunk, e = std::min(grid1.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_rows, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return values;
}

/// Evenly spaced grid over [start, stop] inclusive.
inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) throw std::invalid_argument("empty grid");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = start;
    return g;
  }
  for (std::size_t i = 0; i < count; ++i)
    g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

/// Seeded per-parameter Gaussian offsets (zero mean, given sigma) applied
/// where mask is set; elsewhere zero. Same seed, same offsets.
inline std::vector<double> gaussian_offsets(std::uint32_t num_params, double sigma,
                                            std::uint64_t seed,
                                            const std::vector<char>* mask = nullptr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  std::vector<double> out(num_params, 0.0);
  for (std::uint32_t i = 0; i < num_params; ++i) {
    double v = dist(rng);  // always drawn so masking does not reseed the tail
    if (!mask || (*mask)[i]) out[i] = v;
  }
  return out;
}

// --- CSV emitters --------------------------------------------------------------

inline void write_sweep_csv(std::ostream& os,
                            std::span<const std::pair<double, double>> points) {
  os << "angle,value\n";
  for (const auto& [a, v] : points)
    os << detail::fmt_double(a) << ',' << detail::fmt_double(v) << '\n';
}

/// Row-major matrix; header row carries grid2, each data row starts with its
/// grid1 value.
inline void write_surface_csv(std::ostream& os, std::span<const double> grid1,
                              std::span<const double> grid2,
                              const std::vector<std::vector<double>>& values) {
  os << "angle1\\angle2";
  for (double g : grid2) os << ',' << detail::fmt_double(g);
  os << '\n';
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    os << detail::fmt_double(grid1[i]);
    for (double v : values[i]) os << ',' << detail::fmt_double(v);
    os << '\n';
  }
}

inline void write_sites_csv(std::ostream& os, std::span<const double> per_site) {
  os << "site,value\n";
  for (std::size_t i = 0; i < per_site.size(); ++i)
    os << i << ',' << detail::fmt_double(per_site[i]) << '\n';
}

// --- binary serialization ---------------------------------------------------

namespace detail {
inline constexpr char kSurrogateMagic[8] = {'P', 'P', 'S', 'U', 'R', 'G', '0', '1'};
}

inline std::string Surrogate::to_bytes() const {
  std::string payload;
  detail::put_varint(payload, prov.n);
  detail::put_varint(payload, num_params);
  detail::put_u64(payload, prov.circuit_digest);
  detail::put_u64(payload, prov.observable_digest);
  detail::put_varint(payload, prov.observable.size());
  payload += prov.observable;

  const TruncationConfig& cfg = prov.config;
  payload.push_back(cfg.max_freq ? 1 : 0);
  detail::put_varint(payload, cfg.max_freq.value_or(0));
  detail::put_f64(payload, cfg.trunc_prob);
  payload.push_back(cfg.max_weight ? 1 : 0);
  detail::put_varint(payload, cfg.max_weight.value_or(0));
  payload.push_back(static_cast<char>(cfg.bias));

  const SearchStats& st = prov.stats;
  detail::put_varint(payload, st.paths_explored);
  detail::put_varint(payload, st.paths_contributing);
  detail::put_varint(payload, st.truncated_by_freq);
  detail::put_varint(payload, st.truncated_by_prob);
  detail::put_varint(payload, st.truncated_by_weight);
  detail::put_varint(payload, st.max_rss_proxy);
  detail::put_varint(payload, st.max_weight_seen);
  detail::put_f64(payload, st.wall_time_s);

  detail::put_varint(payload, prov.param_roles.size());
  for (const auto& r : prov.param_roles) {
    payload.push_back(static_cast<char>(r.kind));
    detail::put_varint(payload, r.layer);
    detail::put_varint(payload, r.site);
    detail::put_varint(payload, r.a);
    detail::put_varint(payload, r.b);
  }

  detail::put_varint(payload, terms.size());
  for (const auto& [mono, coeff] : terms) {
    detail::put_varint(payload, mono.powers.size());
    std::uint32_t prev = 0;
    for (const auto& f : mono.powers) {
      detail::put_varint(payload, f.param - prev);
      prev = f.param;
      detail::put_varint(payload, f.sin_exp);
      detail::put_varint(payload, f.cos_exp);
    }
    detail::put_zigzag(payload, coeff);
  }

  std::string out(detail::kSurrogateMagic, sizeof(detail::kSurrogateMagic));
  out += payload;
  detail::put_u64(out, detail::fnv1a(payload.data(), payload.size()));
  return out;
}

inline Surrogate Surrogate::from_bytes(std::string_view bytes) {
  constexpr std::size_t magic_len = sizeof(detail::kSurrogateMagic);
  if (bytes.size() < magic_len + 8 ||
      std::string_view(bytes.data(), magic_len) !=
          std::string_view(detail::kSurrogateMagic, magic_len))
    throw parse_error("not a surrogate file (bad magic)");
  std::string_view payload = bytes.substr(magic_len, bytes.size() - magic_len - 8);
  detail::ByteReader tail(bytes.substr(bytes.size() - 8));
  if (tail.u64() != detail::fnv1a(payload.data(), payload.size()))
    throw parse_error("surrogate file checksum mismatch");

  detail::ByteReader r(payload);
  Surrogate s;
  s.prov.n = static_cast<std::uint32_t>(r.varint());
  s.num_params = static_cast<std::uint32_t>(r.varint());
  s.prov.circuit_digest = r.u64();
  s.prov.observable_digest = r.u64();
  s.prov.observable = r.bytes(r.varint());

  TruncationConfig& cfg = s.prov.config;
  bool has_freq = r.bytes(1)[0] != 0;
  std::uint64_t freq = r.varint();
  if (has_freq) cfg.max_freq = static_cast<std::uint32_t>(freq);
  cfg.trunc_prob = r.f64();
  bool has_weight = r.bytes(1)[0] != 0;
  std::uint64_t wmax = r.varint();
  if (has_weight) cfg.max_weight = static_cast<std::uint32_t>(wmax);
  cfg.bias = static_cast<Bias>(r.bytes(1)[0]);

  SearchStats& st = s.prov.stats;
  st.paths_explored = r.varint();
  st.paths_contributing = r.varint();
  st.truncated_by_freq = r.varint();
  st.truncated_by_prob = r.varint();
  st.truncated_by_weight = r.varint();
  st.max_rss_proxy = r.varint();
  st.max_weight_seen = r.varint();
  st.wall_time_s = r.f64();

  std::uint64_t nroles = r.varint();
  if (nroles > s.num_params) throw parse_error("surrogate file: bad role count");
  s.prov.param_roles.reserve(nroles);
  for (std::uint64_t i = 0; i < nroles; ++i) {
    ParamInfo info;
    info.kind = static_cast<ParamInfo::Kind>(r.bytes(1)[0]);
    info.layer = static_cast<std::uint32_t>(r.varint());
    info.site = static_cast<std::uint32_t>(r.varint());
    info.a = static_cast<std::uint32_t>(r.varint());
    info.b = static_cast<std::uint32_t>(r.varint());
    s.prov.param_roles.push_back(info);
  }

  std::uint64_t count = r.varint();
  s.terms.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Monomial mono;
    std::uint64_t nf = r.varint();
    mono.powers.reserve(nf);
    std::uint32_t prev = 0;
    for (std::uint64_t f = 0; f < nf; ++f) {
      ParamPower pw;
      pw.param = prev + static_cast<std::uint32_t>(r.varint());
      if (f > 0 && pw.param == prev) throw parse_error("surrogate file: unsorted monomial");
      prev = pw.param;
      pw.sin_exp = static_cast<std::uint32_t>(r.varint());
      pw.cos_exp = static_cast<std::uint32_t>(r.varint());
      if (!pw.sin_exp && !pw.cos_exp) throw parse_error("surrogate file: empty factor");
      if (pw.param >= s.num_params) throw parse_error("surrogate file: param out of range");
      mono.powers.push_back(pw);
    }
    std::int64_t coeff = r.zigzag();
    if (coeff == 0) throw parse_error("surrogate file: zero coefficient");
    if (!s.terms.empty() && !(s.terms.back().first < mono))
      throw parse_error("surrogate file: unsorted monomials");
    s.terms.emplace_back(std::move(mono), coeff);
  }
  if (!r.at_end()) throw parse_error("surrogate file: trailing bytes");
  return s;
}

inline void Surrogate::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write surrogate file: " + path);
  std::string bytes = to_bytes();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing surrogate file: " + path);
}

inline Surrogate Surrogate::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open surrogate file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_bytes(bytes);
}

}  // namespace paulipath

#endif  // PAULIPATH_SURROGATE_HPP
