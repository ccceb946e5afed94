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
//
// paulipath: build reusable trigonometric surrogates of Clifford+RZ
// expectation landscapes by backward Pauli path enumeration, then evaluate
// them at arbitrary parameter values.
//
// Exit codes: 0 success, 2 usage error, 3 capacity error, 4 memory-cap abort,
// 1 any other runtime failure.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <thread>

#include "paulipath/io_json.hpp"
#include "paulipath/oracle.hpp"
#include "paulipath/paulipath.hpp"

using namespace paulipath;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitMemoryCap = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MemoryCapAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_angle(std::string tok) {
  double sign = 1.0;
  if (!tok.empty() && tok[0] == '-') {
    sign = -1.0;
    tok = tok.substr(1);
  }
  if (tok == "pi") return sign * std::numbers::pi;
  if (tok == "pi2" || tok == "pi/2") return sign * std::numbers::pi / 2;
  if (tok == "pi4" || tok == "pi/4") return sign * std::numbers::pi / 4;
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return sign * v;
  } catch (...) {
    throw UsageError("cannot parse angle '" + tok + "'");
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  auto c1 = spec.find(':');
  auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw UsageError("grid must be start:stop:count, got '" + spec + "'");
  double start = parse_angle(spec.substr(0, c1));
  double stop = parse_angle(spec.substr(c1 + 1, c2 - c1 - 1));
  long count = std::stol(spec.substr(c2 + 1));
  if (count <= 0) throw UsageError("grid count must be positive");
  return linspace(start, stop, static_cast<std::size_t>(count));
}

std::string data_dir() {
  if (const char* env = std::getenv("PAULIPATH_DATA_DIR")) return env;
#ifdef PAULIPATH_DATA_DIR
  return PAULIPATH_DATA_DIR;
#else
  return "data";
#endif
}

Topology resolve_topology(const std::string& spec) {
  if (spec == "heavyhex127") return load_topology(data_dir() + "/heavy_hex_127.txt");
  if (spec.rfind("chain:", 0) == 0) {
    long n = std::stol(spec.substr(6));
    if (n <= 0) throw UsageError("chain size must be positive");
    return chain_topology(static_cast<std::uint32_t>(n));
  }
  return load_topology(spec);
}

// --- shared option blocks ----------------------------------------------------

struct CircuitOptions {
  std::string circuit_file;
  std::string topology;
  std::uint32_t layers = 1;
  std::string coupling = "fixed";
  std::string field = "shared";
  bool extra_x_layer = false;

  void attach(CLI::App& app) {
    app.add_option("--circuit", circuit_file, "circuit file (see docs/FORMATS.md)");
    app.add_option("--topology", topology,
                   "topology: a file, 'heavyhex127', or 'chain:N'");
    app.add_option("--layers", layers, "Trotter step count")->capture_default_str();
    app.add_option("--coupling", coupling, "coupling mode: fixed|shared|free")
        ->check(CLI::IsMember({"fixed", "shared", "free"}))
        ->capture_default_str();
    app.add_option("--field", field, "field mode: shared|free")
        ->check(CLI::IsMember({"shared", "free"}))
        ->capture_default_str();
    app.add_flag("--extra-x-layer", extra_x_layer, "append one more X-rotation layer");
  }

  bool is_tfi() const { return !topology.empty(); }

  TfiCircuit resolve() const {
    if (circuit_file.empty() == topology.empty())
      throw UsageError("give exactly one of --circuit or --topology");
    if (!circuit_file.empty()) return TfiCircuit{load_circuit(circuit_file), {}};
    TfiSpec spec;
    spec.topology = resolve_topology(topology);
    spec.layers = layers;
    spec.coupling = coupling == "fixed" ? CouplingMode::clifford_fixed
                    : coupling == "shared" ? CouplingMode::shared
                                           : CouplingMode::per_edge;
    spec.field = field == "shared" ? FieldMode::shared : FieldMode::per_site;
    spec.extra_x_layer = extra_x_layer;
    return build_tfi_circuit(spec);
  }
};

struct ObservableOptions {
  std::string observable;
  bool magnetization = false;

  void attach(CLI::App& app) {
    app.add_option("--observable", observable,
                   "Pauli string, sparse ('X13 Y9 Z8', 0-based) or dense ('-XIZY')");
    app.add_flag("--magnetization", magnetization,
                 "per-site Z observables, averaged at evaluation time");
  }
  void require_one() const {
    if (observable.empty() == !magnetization)
      throw UsageError("give exactly one of --observable or --magnetization");
  }
};

struct TruncationOptions {
  std::int64_t max_freq = -1;
  double trunc_prob = 0.0;
  std::int64_t max_weight = -1;
  std::string bias = "none";

  void attach(CLI::App& app) {
    app.add_option("--max-freq", max_freq, "path split cap (-1 = unbounded)")
        ->capture_default_str();
    app.add_option("--trunc-prob", trunc_prob,
                   "survival-probability cutoff in [0,1) (0 disables)")
        ->capture_default_str();
    app.add_option("--max-weight", max_weight, "operator weight cap (-1 = unbounded)")
        ->capture_default_str();
    app.add_option("--bias", bias, "exploration order: none|sin|cos")
        ->check(CLI::IsMember({"none", "sin", "cos"}))
        ->capture_default_str();
  }

  TruncationConfig resolve() const {
    TruncationConfig cfg;
    if (max_freq >= 0) cfg.max_freq = static_cast<std::uint32_t>(max_freq);
    if (max_weight >= 0) cfg.max_weight = static_cast<std::uint32_t>(max_weight);
    cfg.trunc_prob = trunc_prob;
    cfg.bias = bias == "sin" ? Bias::prefer_sin
               : bias == "cos" ? Bias::prefer_cos
                               : Bias::none;
    cfg.validate();
    return cfg;
  }
};

struct EngineCliOptions {
  std::uint32_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t max_monomials = 0;
  std::uint64_t frontier_cap = 1ull << 20;
  bool progress = false;

  void attach(CLI::App& app) {
    app.add_option("--workers", workers, "search worker threads")->capture_default_str();
    app.add_option("--max-monomials", max_monomials,
                   "abort once this many monomials are stored (0 = unbounded)");
    app.add_option("--frontier-cap", frontier_cap,
                   "abort if the queued-subtree frontier exceeds this many nodes")
        ->capture_default_str();
    app.add_flag("--progress", progress, "periodic progress lines on stderr");
  }

  EngineOptions resolve() const {
    EngineOptions opts;
    opts.workers = workers;
    opts.max_monomials = max_monomials;
    opts.frontier_cap = frontier_cap;
    if (progress)
      opts.progress = [](const SearchStats& s) {
        std::cerr << "progress paths_explored=" << s.paths_explored
                  << " paths_contributing=" << s.paths_contributing << "\n";
      };
    return opts;
  }
};

void print_stats_line(const SearchStats& s, std::size_t monomials) {
  std::cerr << "stats paths_explored=" << s.paths_explored
            << " paths_contributing=" << s.paths_contributing
            << " truncated_freq=" << s.truncated_by_freq
            << " truncated_prob=" << s.truncated_by_prob
            << " truncated_weight=" << s.truncated_by_weight
            << " max_weight_seen=" << s.max_weight_seen << " monomials=" << monomials
            << " wall_s=" << s.wall_time_s << "\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

// --- parameter group selectors -------------------------------------------------

std::vector<char> select_params(const std::string& spec, const Surrogate& s) {
  std::vector<char> mask(s.num_params, 0);
  const auto& roles = s.prov.param_roles;
  auto need_roles = [&]() {
    if (roles.empty())
      throw UsageError("selector '" + spec +
                       "' needs parameter roles (build the surrogate from a "
                       "topology, not a raw circuit file)");
  };
  if (spec == "all") {
    std::fill(mask.begin(), mask.end(), 1);
  } else if (spec == "none") {
  } else if (spec == "field" || spec == "coupling") {
    need_roles();
    auto kind = spec == "field" ? ParamInfo::Kind::field : ParamInfo::Kind::coupling;
    for (std::size_t i = 0; i < roles.size(); ++i) mask[i] = roles[i].kind == kind;
  } else if (spec == "even-field" || spec == "odd-field") {
    need_roles();
    bool even = spec == "even-field";
    for (std::size_t i = 0; i < roles.size(); ++i)
      mask[i] = roles[i].kind == ParamInfo::Kind::field &&
                (roles[i].site % 2 == (even ? 0 : 1));
  } else if (spec.rfind("params:", 0) == 0) {
    std::istringstream in(spec.substr(7));
    std::string tok;
    while (std::getline(in, tok, ','))
      mask.at(std::stoul(tok)) = 1;
  } else {
    throw UsageError("unknown parameter selector '" + spec + "'");
  }
  return mask;
}

// "--fix field=0.3", "--fix coupling=-pi/2", "--fix p7=0.1"
void apply_fixes(const std::vector<std::string>& fixes, const Surrogate& s,
                 std::vector<double>& offset) {
  for (const auto& fx : fixes) {
    auto eq = fx.find('=');
    if (eq == std::string::npos) throw UsageError("--fix expects name=angle");
    std::string name = fx.substr(0, eq);
    double value = parse_angle(fx.substr(eq + 1));
    if (name.size() > 1 && name[0] == 'p' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      std::size_t idx = std::stoul(name.substr(1));
      if (idx >= offset.size()) throw UsageError("--fix parameter out of range");
      offset[idx] = value;
    } else {
      for (std::size_t i = 0; i < offset.size(); ++i)
        if (select_params(name, s)[i]) offset[i] = value;
    }
  }
}

// --- manifest handling -----------------------------------------------------------

struct Manifest {
  std::uint32_t n = 0;
  std::vector<std::string> files;
  std::string directory;

  static Manifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open manifest: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
    Manifest m;
    m.n = j.at("n").get<std::uint32_t>();
    m.files = j.at("files").get<std::vector<std::string>>();
    auto slash = path.find_last_of('/');
    m.directory = slash == std::string::npos ? "" : path.substr(0, slash + 1);
    return m;
  }
  std::string file(std::size_t i) const { return directory + files[i]; }
};

// --- subcommand payloads -------------------------------------------------------

struct BuildArgs {
  CircuitOptions circuit;
  ObservableOptions obs;
  TruncationOptions trunc;
  EngineCliOptions engine;
  std::string out;
  std::string stats_json_path;
  bool trivial_only = false;
};

Surrogate build_one(const ParamCircuit& circuit, const std::vector<ParamInfo>& roles,
                    const SparsePauli& obs, const TruncationConfig& cfg,
                    const EngineOptions& opts, bool trivial_only, SearchStats* stats_out) {
  Surrogate s;
  if (trivial_only) {
    auto t0 = std::chrono::steady_clock::now();
    auto paths = find_trivial_paths(circuit, obs);
    s.num_params = circuit.num_params;
    s.prov.n = circuit.n;
    s.prov.observable = obs.str();
    s.prov.circuit_digest = circuit.digest();
    s.prov.observable_digest = obs.digest();
    for (auto& [m, c] : paths) s.terms.emplace_back(std::move(m), c);
    s.canonicalize();
    s.prov.stats.paths_explored = 2;
    s.prov.stats.paths_contributing = s.terms.size();
    s.prov.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    BuildResult res = enumerate_paths(circuit, obs, cfg, opts);
    if (res.status == BuildStatus::memory_capped) {
      print_stats_line(res.stats, res.surrogate.size());
      throw MemoryCapAbort("monomial budget exceeded; partial results discarded");
    }
    s = std::move(res.surrogate);
  }
  s.prov.param_roles = roles;
  if (stats_out) *stats_out = s.prov.stats;
  return s;
}

int cmd_build(const BuildArgs& a) {
  a.obs.require_one();
  if (a.out.empty()) throw UsageError("--out is required");
  TfiCircuit tfi = a.circuit.resolve();
  TruncationConfig cfg = a.trunc.resolve();
  EngineOptions opts = a.engine.resolve();

  nlohmann::json stats_report = nlohmann::json::array();
  if (a.obs.magnetization) {
    std::vector<std::string> files;
    for (std::uint32_t q = 0; q < tfi.circuit.n; ++q) {
      SparsePauli z{tfi.circuit.n, false, {{q, Pauli::Z}}};
      SearchStats st;
      Surrogate s = build_one(tfi.circuit, tfi.params, z, cfg, opts, a.trivial_only, &st);
      std::string file = a.out + ".site" + std::to_string(q) + ".ppsurg";
      s.save(file);
      auto slash = file.find_last_of('/');
      files.push_back(slash == std::string::npos ? file : file.substr(slash + 1));
      print_stats_line(st, s.size());
      stats_report.push_back(stats_json(st));
    }
    nlohmann::json manifest = {{"format", "ppmanifest-v1"},
                               {"n", tfi.circuit.n},
                               {"observable", "magnetization"},
                               {"circuit_digest", tfi.circuit.digest()},
                               {"files", files}};
    write_text_file(a.out + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << a.out + ".manifest.json" << "\n";
  } else {
    SparsePauli obs = parse_pauli(a.obs.observable, tfi.circuit.n);
    SearchStats st;
    Surrogate s = build_one(tfi.circuit, tfi.params, obs, cfg, opts, a.trivial_only, &st);
    s.save(a.out);
    print_stats_line(st, s.size());
    stats_report = stats_json(st);
    std::cout << a.out << "\n";
  }
  if (!a.stats_json_path.empty())
    write_text_file(a.stats_json_path, stats_report.dump(2) + "\n");
  return 0;
}

struct SliceArgs {
  std::string surrogate_file;
  std::string manifest_file;
  std::string vary = "all";
  std::string group1, group2;
  std::vector<std::string> fixes;
  std::string grid = "0:pi/2:158";
  std::string grid2_spec;
  double jitter_sigma = 0.0;
  std::uint64_t jitter_seed = 0;
  std::string jitter_group = "field";
  std::string out;
  std::uint32_t workers = std::max(1u, std::thread::hardware_concurrency());
};

std::vector<double> jitter_offsets(const SliceArgs& a, const Surrogate& s) {
  if (a.jitter_sigma == 0.0) return std::vector<double>(s.num_params, 0.0);
  auto mask = select_params(a.jitter_group, s);
  return gaussian_offsets(s.num_params, a.jitter_sigma, a.jitter_seed, &mask);
}

template <typename Fn>
void for_each_surrogate(const SliceArgs& a, Fn&& fn) {
  if (a.surrogate_file.empty() == a.manifest_file.empty())
    throw UsageError("give exactly one of --surrogate or --manifest");
  if (!a.surrogate_file.empty()) {
    fn(Surrogate::load(a.surrogate_file), 1.0);
  } else {
    Manifest m = Manifest::load(a.manifest_file);
    // loaded one at a time: the joint set may not fit in memory
    for (std::size_t i = 0; i < m.files.size(); ++i)
      fn(Surrogate::load(m.file(i)), 1.0 / static_cast<double>(m.files.size()));
  }
}

int cmd_sweep(const SliceArgs& a) {
  if (a.out.empty()) throw UsageError("--out is required");
  auto grid = parse_grid(a.grid);
  std::vector<double> acc(grid.size(), 0.0);
  for_each_surrogate(a, [&](const Surrogate& s, double scale) {
    AffineBinding b;
    auto mask = select_params(a.vary, s);
    b.scale.assign(mask.begin(), mask.end());
    b.offset = jitter_offsets(a, s);
    apply_fixes(a.fixes, s, b.offset);
    auto pts = sweep(s, b, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) acc[i] += scale * pts[i].second;
  });
  std::vector<std::pair<double, double>> pts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = {grid[i], acc[i]};
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  write_sweep_csv(out, pts);
  std::cout << a.out << "\n";
  return 0;
}

int cmd_surface(const SliceArgs& a) {
  if (a.out.empty()) throw UsageError("--out is required");
  if (a.group1.empty() || a.group2.empty())
    throw UsageError("--group1 and --group2 are required");
  auto grid1 = parse_grid(a.grid);
  auto grid2 = parse_grid(a.grid2_spec.empty() ? a.grid : a.grid2_spec);
  std::vector<std::vector<double>> acc(grid1.size(),
                                       std::vector<double>(grid2.size(), 0.0));
  for_each_surrogate(a, [&](const Surrogate& s, double scale) {
    SurfaceBinding b;
    auto m1 = select_params(a.group1, s);
    auto m2 = select_params(a.group2, s);
    b.scale1.assign(m1.begin(), m1.end());
    b.scale2.assign(m2.begin(), m2.end());
    b.offset = jitter_offsets(a, s);
    apply_fixes(a.fixes, s, b.offset);
    auto values = surface(s, b, grid1, grid2, a.workers);
    for (std::size_t i = 0; i < grid1.size(); ++i)
      for (std::size_t j = 0; j < grid2.size(); ++j) acc[i][j] += scale * values[i][j];
  });
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  write_surface_csv(out, grid1, grid2, acc);
  std::cout << a.out << "\n";
  return 0;
}

struct SnapshotArgs {
  std::string manifest_file;
  double dt = 0.0;
  double h = 0.0;
  double J = 0.0;
  std::string j_ramp;  // "J0:J1" linear over edge index
  std::string flips;   // comma-separated sites prepared in |1>
  std::string out;
};

int cmd_snapshot(const SnapshotArgs& a) {
  if (a.manifest_file.empty()) throw UsageError("--manifest is required");
  if (a.out.empty()) throw UsageError("--out is required");
  Manifest m = Manifest::load(a.manifest_file);

  std::vector<char> flipped(m.n, 0);
  if (!a.flips.empty()) {
    std::istringstream in(a.flips);
    std::string tok;
    while (std::getline(in, tok, ',')) flipped.at(std::stoul(tok)) = 1;
  }
  std::optional<std::pair<double, double>> ramp;
  if (!a.j_ramp.empty()) {
    auto c = a.j_ramp.find(':');
    if (c == std::string::npos) throw UsageError("--j-ramp expects J0:J1");
    ramp = {parse_angle(a.j_ramp.substr(0, c)), parse_angle(a.j_ramp.substr(c + 1))};
  }

  std::vector<double> per_site(m.n, 0.0);
  for (std::uint32_t q = 0; q < m.n; ++q) {
    Surrogate s = Surrogate::load(m.file(q));
    const auto& roles = s.prov.param_roles;
    if (roles.size() != s.num_params)
      throw UsageError("snapshot needs parameter roles in every surrogate");
    std::uint32_t num_edges = 0;
    for (const auto& r : roles)
      if (r.kind == ParamInfo::Kind::coupling) num_edges = std::max(num_edges, r.site + 1);
    // theta_i = a_i * dt + b_i: fields a=h (pi flip replaces the first-layer
    // rotation), couplings a=-J per the angle map
    AffineBinding b;
    b.scale.assign(s.num_params, 0.0);
    b.offset.assign(s.num_params, 0.0);
    for (std::size_t p = 0; p < roles.size(); ++p) {
      const ParamInfo& r = roles[p];
      if (r.kind == ParamInfo::Kind::field) {
        if (flipped[r.site] && r.layer == 0)
          b.offset[p] = std::numbers::pi;
        else
          b.scale[p] = a.h;
      } else {
        double J = a.J;
        if (ramp)
          J = num_edges > 1
                  ? ramp->first + (ramp->second - ramp->first) *
                                      static_cast<double>(r.site) /
                                      static_cast<double>(num_edges - 1)
                  : ramp->first;
        b.scale[p] = -J;
      }
    }
    std::vector<double> grid{a.dt};
    per_site[q] = sweep(s, b, grid)[0].second;
  }

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  write_sites_csv(out, per_site);
  double mz = 0;
  for (double v : per_site) mz += v;
  std::cout << "M_z " << detail::fmt_double(mz / static_cast<double>(m.n)) << "\n";
  std::cout << a.out << "\n";
  return 0;
}

struct TrivialArgs {
  CircuitOptions circuit;
  ObservableOptions obs;
  std::string out;
};

int cmd_trivial(const TrivialArgs& a) {
  a.obs.require_one();
  TfiCircuit tfi = a.circuit.resolve();
  auto run_one = [&](const SparsePauli& obs) {
    auto paths = find_trivial_paths(tfi.circuit, obs);
    std::cout << obs.str() << ":";
    if (paths.empty()) std::cout << " none";
    for (const auto& [m, c] : paths)
      std::cout << "  (" << (c > 0 ? "+" : "") << c << ") * " << m.str();
    std::cout << "\n";
    return paths;
  };
  if (a.obs.magnetization) {
    for (std::uint32_t q = 0; q < tfi.circuit.n; ++q)
      run_one(SparsePauli{tfi.circuit.n, false, {{q, Pauli::Z}}});
  } else {
    auto paths = run_one(parse_pauli(a.obs.observable, tfi.circuit.n));
    if (!a.out.empty()) {
      SparsePauli obs = parse_pauli(a.obs.observable, tfi.circuit.n);
      Surrogate s;
      s.num_params = tfi.circuit.num_params;
      s.prov.n = tfi.circuit.n;
      s.prov.observable = obs.str();
      s.prov.circuit_digest = tfi.circuit.digest();
      s.prov.observable_digest = obs.digest();
      s.prov.param_roles = tfi.params;
      for (auto& [m, c] : paths) s.terms.emplace_back(std::move(m), c);
      s.canonicalize();
      s.save(a.out);
      std::cout << a.out << "\n";
    }
  }
  return 0;
}

struct EndpointsArgs {
  CircuitOptions circuit;
  ObservableOptions obs;
  std::string corner = "0";
};

int cmd_endpoints(const EndpointsArgs& a) {
  a.obs.require_one();
  TfiCircuit tfi = a.circuit.resolve();
  std::vector<std::uint8_t> corner(tfi.circuit.num_params, 0);
  if (a.corner == "pi2" || a.corner == "pi/2") {
    std::fill(corner.begin(), corner.end(), 1);
  } else if (a.corner != "0") {
    // per-parameter comma list of 0 / pi2 tokens
    std::istringstream in(a.corner);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(in, tok, ',')) {
      if (i >= corner.size()) throw UsageError("corner list longer than param count");
      corner[i++] = (tok == "pi2" || tok == "pi/2") ? 1 : 0;
    }
    if (i != corner.size()) throw UsageError("corner list shorter than param count");
  }

  auto t0 = std::chrono::steady_clock::now();
  if (a.obs.magnetization) {
    double mz = 0;
    for (std::uint32_t q = 0; q < tfi.circuit.n; ++q) {
      SparsePauli z{tfi.circuit.n, false, {{q, Pauli::Z}}};
      int v = clifford_endpoint(tfi.circuit, z, corner);
      std::cout << "Z" << q << " " << v << "\n";
      mz += v;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "M_z " << detail::fmt_double(mz / tfi.circuit.n) << "\n";
    std::cerr << "endpoint passes: " << tfi.circuit.n << " in " << secs * 1e3 << " ms\n";
  } else {
    SparsePauli obs = parse_pauli(a.obs.observable, tfi.circuit.n);
    int v = clifford_endpoint(tfi.circuit, obs, corner);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << obs.str() << " " << v << "\n";
    std::cerr << "endpoint pass: " << secs * 1e3 << " ms\n";
  }
  return 0;
}

struct VerifyArgs {
  CircuitOptions circuit;
  ObservableOptions obs;
  std::string surrogate_file;
  std::string grid;  // 1-parameter slice comparison when set
  std::uint32_t points = 50;
  std::uint64_t seed = 1;
  bool endpoints_only = false;
};

int cmd_verify(const VerifyArgs& a) {
  a.obs.require_one();
  if (a.obs.magnetization) throw UsageError("verify works on a single observable");
  if (a.surrogate_file.empty()) throw UsageError("--surrogate is required");
  TfiCircuit tfi = a.circuit.resolve();
  SparsePauli obs = parse_pauli(a.obs.observable, tfi.circuit.n);
  Surrogate s = Surrogate::load(a.surrogate_file);
  if (s.num_params != tfi.circuit.num_params)
    throw UsageError("surrogate/circuit parameter count mismatch");
  if (s.prov.circuit_digest != tfi.circuit.digest())
    std::cerr << "warning: surrogate was built from a different circuit\n";

  std::mt19937_64 rng(a.seed);
  double max_err = 0.0;
  if (!a.endpoints_only && tfi.circuit.n <= Statevector::max_qubits) {
    if (!a.grid.empty()) {
      // correlated slice: every parameter takes the grid angle
      for (double t : parse_grid(a.grid)) {
        std::vector<double> params(s.num_params, t);
        double err =
            std::abs(s.evaluate(params) - exact_expectation(tfi.circuit, params, obs));
        max_err = std::max(max_err, err);
      }
      std::cout << "grid " << a.grid << " max_abs_error " << detail::fmt_double(max_err)
                << "\n";
    } else {
      std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
      std::vector<double> params(s.num_params);
      for (std::uint32_t i = 0; i < a.points; ++i) {
        for (auto& p : params) p = angle(rng);
        double err =
            std::abs(s.evaluate(params) - exact_expectation(tfi.circuit, params, obs));
        max_err = std::max(max_err, err);
      }
      std::cout << "exact points " << a.points << " max_abs_error "
                << detail::fmt_double(max_err) << "\n";
    }
  } else if (!a.endpoints_only) {
    throw capacity_error("register too wide for the statevector oracle; use --endpoints-only");
  }

  // corner checks work at any width
  double corner_err = 0.0;
  std::vector<std::uint8_t> corner(s.num_params);
  std::vector<double> angles(s.num_params);
  for (std::uint32_t rep = 0; rep < std::min<std::uint32_t>(a.points, 32); ++rep) {
    for (std::size_t i = 0; i < corner.size(); ++i) {
      corner[i] = rng() & 1;
      angles[i] = corner[i] ? std::numbers::pi / 2 : 0.0;
    }
    double err = std::abs(s.evaluate(angles) -
                          clifford_endpoint(tfi.circuit, obs, corner));
    corner_err = std::max(corner_err, err);
  }
  std::cout << "endpoint corners max_abs_error " << detail::fmt_double(corner_err) << "\n";
  return 0;
}

struct StatsArgs {
  std::string surrogate_file;
  bool full = false;
};

int cmd_stats(const StatsArgs& a) {
  if (a.surrogate_file.empty()) throw UsageError("--surrogate is required");
  Surrogate s = Surrogate::load(a.surrogate_file);
  std::cout << (a.full ? surrogate_json(s) : provenance_json(s)).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "paulipath: classical surrogates of Clifford+RZ expectation landscapes\n"
      "via truncated backward Pauli path sums"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI file with per-subcommand [sections]; place before the "
                 "subcommand, flags override");

  BuildArgs build_args;
  auto* build = app.add_subcommand("build", "enumerate paths and write a surrogate file");
  build_args.circuit.attach(*build);
  build_args.obs.attach(*build);
  build_args.trunc.attach(*build);
  build_args.engine.attach(*build);
  build->add_option("--out", build_args.out, "output surrogate file (or prefix)");
  build->add_option("--stats-json", build_args.stats_json_path, "write stats JSON here");
  build->add_flag("--trivial-only", build_args.trivial_only,
                  "store only the two pure-channel paths");

  SliceArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a 1-D slice, write CSV");
  sweep_cmd->add_option("--surrogate", sweep_args.surrogate_file, "surrogate file");
  sweep_cmd->add_option("--manifest", sweep_args.manifest_file,
                        "per-site manifest (values are averaged)");
  sweep_cmd->add_option("--vary", sweep_args.vary,
                        "swept params: all|field|coupling|even-field|odd-field|params:i,j")
      ->capture_default_str();
  sweep_cmd->add_option("--fix", sweep_args.fixes, "fixed params, e.g. coupling=-pi/2");
  sweep_cmd->add_option("--grid", sweep_args.grid, "start:stop:count")->capture_default_str();
  sweep_cmd->add_option("--jitter-sigma", sweep_args.jitter_sigma,
                        "gaussian offsets on --jitter-group params");
  sweep_cmd->add_option("--jitter-seed", sweep_args.jitter_seed, "offset seed");
  sweep_cmd->add_option("--jitter-group", sweep_args.jitter_group, "offset target group")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "output CSV");

  SliceArgs surface_args;
  auto* surface_cmd = app.add_subcommand("surface", "evaluate a 2-D slice, write CSV");
  surface_cmd->add_option("--surrogate", surface_args.surrogate_file, "surrogate file");
  surface_cmd->add_option("--manifest", surface_args.manifest_file, "per-site manifest");
  surface_cmd->add_option("--group1", surface_args.group1, "axis-1 params (selector)");
  surface_cmd->add_option("--group2", surface_args.group2, "axis-2 params (selector)");
  surface_cmd->add_option("--fix", surface_args.fixes, "fixed params");
  surface_cmd->add_option("--grid1", surface_args.grid, "start:stop:count")
      ->capture_default_str();
  surface_cmd->add_option("--grid2", surface_args.grid2_spec, "defaults to --grid1");
  surface_cmd->add_option("--jitter-sigma", surface_args.jitter_sigma, "gaussian offsets");
  surface_cmd->add_option("--jitter-seed", surface_args.jitter_seed, "offset seed");
  surface_cmd->add_option("--jitter-group", surface_args.jitter_group, "offset target group")
      ->capture_default_str();
  surface_cmd->add_option("--workers", surface_args.workers, "row evaluation threads")
      ->capture_default_str();
  surface_cmd->add_option("--out", surface_args.out, "output CSV");

  SnapshotArgs snapshot_args;
  auto* snapshot_cmd =
      app.add_subcommand("snapshot", "per-site values at one (h, J, dt) point");
  snapshot_cmd->add_option("--manifest", snapshot_args.manifest_file, "per-site manifest");
  snapshot_cmd->add_option("--dt", snapshot_args.dt, "Trotter time step");
  snapshot_cmd->add_option("--h-coeff", snapshot_args.h, "uniform field coefficient");
  snapshot_cmd->add_option("--j-coeff", snapshot_args.J, "uniform coupling coefficient");
  snapshot_cmd->add_option("--j-ramp", snapshot_args.j_ramp,
                           "linear coupling ramp J0:J1 over edge index");
  snapshot_cmd->add_option("--flips", snapshot_args.flips,
                           "comma-separated sites prepared in |1>");
  snapshot_cmd->add_option("--out", snapshot_args.out, "output CSV");

  TrivialArgs trivial_args;
  auto* trivial_cmd =
      app.add_subcommand("trivial", "print (and optionally store) the pure-channel paths");
  trivial_args.circuit.attach(*trivial_cmd);
  trivial_args.obs.attach(*trivial_cmd);
  trivial_cmd->add_option("--out", trivial_args.out, "write the trivial surrogate here");

  EndpointsArgs endpoints_args;
  auto* endpoints_cmd =
      app.add_subcommand("endpoints", "exact Clifford values at a parameter corner");
  endpoints_args.circuit.attach(*endpoints_cmd);
  endpoints_args.obs.attach(*endpoints_cmd);
  endpoints_cmd->add_option("--corner", endpoints_args.corner,
                            "0 | pi2 | per-parameter comma list")
      ->capture_default_str();

  VerifyArgs verify_args;
  auto* verify_cmd =
      app.add_subcommand("verify", "compare a surrogate against the exact oracles");
  verify_args.circuit.attach(*verify_cmd);
  verify_args.obs.attach(*verify_cmd);
  verify_cmd->add_option("--surrogate", verify_args.surrogate_file, "surrogate file");
  verify_cmd->add_option("--grid", verify_args.grid,
                         "compare along a correlated start:stop:count slice");
  verify_cmd->add_option("--points", verify_args.points, "random test points")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "random seed")->capture_default_str();
  verify_cmd->add_flag("--endpoints-only", verify_args.endpoints_only,
                       "skip the statevector comparison");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "print surrogate provenance as JSON");
  stats_cmd->add_option("--surrogate", stats_args.surrogate_file, "surrogate file");
  stats_cmd->add_flag("--full", stats_args.full, "include every monomial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return cmd_build(build_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args);
    if (*surface_cmd) return cmd_surface(surface_args);
    if (*snapshot_cmd) return cmd_snapshot(snapshot_args);
    if (*trivial_cmd) return cmd_trivial(trivial_args);
    if (*endpoints_cmd) return cmd_endpoints(endpoints_args);
    if (*verify_cmd) return cmd_verify(verify_args);
    if (*stats_cmd) return cmd_stats(stats_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const MemoryCapAbort& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMemoryCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
