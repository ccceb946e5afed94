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

#include "paulipath/surrogate.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "paulipath/io_json.hpp"
#include "paulipath/oracle.hpp"
#include "paulipath/propagate.hpp"

using namespace paulipath;

namespace {

Monomial mono(std::initializer_list<ParamPower> powers) {
  Monomial m;
  m.powers = powers;
  m.canonicalize();
  return m;
}

Surrogate make(std::uint32_t num_params,
               std::initializer_list<std::pair<Monomial, std::int64_t>> terms) {
  Surrogate s;
  s.num_params = num_params;
  s.terms = terms;
  s.canonicalize();
  return s;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("evaluate basics") {
  auto sin25 = make(1, {{mono({{0, 25, 0}}), 1}});
  std::vector<double> half{std::numbers::pi / 2};
  CHECK(sin25.evaluate(half) == Catch::Approx(1.0).margin(1e-14));

  auto cos1 = make(1, {{mono({{0, 0, 1}}), 1}});
  std::vector<double> zero{0.0};
  CHECK(cos1.evaluate(zero) == 1.0);

  Surrogate empty = make(3, {});
  std::vector<double> any{0.3, -1.0, 2.0};
  CHECK(empty.evaluate(any) == 0.0);

  std::vector<double> wrong{0.1};
  CHECK_THROWS_AS(empty.evaluate(wrong), std::invalid_argument);
}

TEST_CASE("evaluation matches the closed form") {
  // 2 sin^2(p0) cos(p1) - 3 cos^3(p0) + 7
  auto s = make(2, {{mono({{0, 2, 0}, {1, 0, 1}}), 2},
                    {mono({{0, 0, 3}}), -3},
                    {Monomial{}, 7}});
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    double a = angle(rng), b = angle(rng);
    double want = 2 * std::sin(a) * std::sin(a) * std::cos(b) -
                  3 * std::pow(std::cos(a), 3) + 7;
    std::vector<double> params{a, b};
    CHECK(s.evaluate(params) == Catch::Approx(want).margin(1e-14));
  }
  CHECK(s.coeff_l1() == 12);
}

TEST_CASE("evaluation is bounded by the coefficient l1 norm") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> angle(-7.0, 7.0);
  std::uniform_int_distribution<int> coeff(-5, 5);
  for (int rep = 0; rep < 20; ++rep) {
    Surrogate s;
    s.num_params = 3;
    for (int t = 0; t < 10; ++t) {
      Monomial m;
      for (std::uint32_t p = 0; p < 3; ++p) {
        std::uint32_t se = rng() % 3, ce = rng() % 3;
        if (se || ce) m.powers.push_back({p, se, ce});
      }
      s.terms.emplace_back(std::move(m), coeff(rng));
    }
    s.canonicalize();
    for (int i = 0; i < 20; ++i) {
      std::vector<double> params{angle(rng), angle(rng), angle(rng)};
      CHECK(std::abs(s.evaluate(params)) <=
            static_cast<double>(s.coeff_l1()) + 1e-12);
    }
  }
}

TEST_CASE("canonicalize merges and drops zeros") {
  Surrogate s;
  s.num_params = 1;
  s.terms.emplace_back(mono({{0, 1, 0}}), 2);
  s.terms.emplace_back(mono({{0, 1, 0}}), -2);
  s.terms.emplace_back(mono({{0, 0, 1}}), 3);
  s.canonicalize();
  REQUIRE(s.terms.size() == 1);
  CHECK(s.terms[0].second == 3);

  Monomial bad;
  bad.powers = {{0, 1, 0}, {0, 0, 1}};
  CHECK_THROWS_AS(bad.canonicalize(), std::invalid_argument);
}

TEST_CASE("merge") {
  auto a = make(2, {{mono({{0, 1, 0}}), 1}});
  auto b = make(2, {{mono({{1, 0, 2}}), -4}});
  auto ab = Surrogate::merge(a, b);
  CHECK(ab.terms.size() == 2);
  CHECK(ab.coefficient(mono({{0, 1, 0}})) == 1);
  CHECK(ab.coefficient(mono({{1, 0, 2}})) == -4);

  auto neg = a;
  for (auto& [m, c] : neg.terms) c = -c;
  CHECK(Surrogate::merge(a, neg).terms.empty());

  auto c = make(3, {});
  CHECK_THROWS_AS(Surrogate::merge(a, c), std::invalid_argument);

  auto d = make(2, {});
  d.prov.circuit_digest = 0xdead;
  CHECK_THROWS_AS(Surrogate::merge(a, d), std::invalid_argument);

  // random split: build two halves from one term list and merge them back
  std::mt19937_64 rng(7);
  TfiSpec spec{chain_topology(3), 2, CouplingMode::clifford_fixed, FieldMode::per_site, false};
  auto tfi = build_tfi_circuit(spec);
  auto whole = enumerate_paths(tfi.circuit, parse_pauli("Z1", 3), {}).surrogate;
  Surrogate left = whole, right = whole;
  left.terms.clear();
  right.terms.clear();
  for (const auto& t : whole.terms) (rng() & 1 ? left : right).terms.push_back(t);
  CHECK(Surrogate::merge(left, right) == whole);
}

TEST_CASE("monomial rendering and ordering") {
  CHECK(Monomial{}.str() == "1");
  CHECK(mono({{0, 25, 0}}).str() == "sin(p0)^25");
  CHECK(mono({{1, 0, 1}, {0, 2, 1}}).str() == "sin(p0)^2 cos(p0) cos(p1)");
  CHECK(mono({{0, 1, 0}}).degree() == 1);
  CHECK((Monomial{} < mono({{0, 1, 0}})));
}

TEST_CASE("sweep endpoints and shape") {
  auto sin25 = make(1, {{mono({{0, 25, 0}}), 1}});
  auto grid = linspace(0.0, std::numbers::pi / 2, 158);
  auto pts = sweep(sin25, AffineBinding::uniform(1), grid);
  REQUIRE(pts.size() == 158);
  CHECK(pts.front().first == 0.0);
  CHECK(pts.front().second == 0.0);
  CHECK(pts.back().first == Catch::Approx(std::numbers::pi / 2));
  CHECK(pts.back().second == Catch::Approx(1.0).margin(1e-14));
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].first > pts[i - 1].first);

  auto constant = make(1, {{Monomial{}, 1}});
  for (auto [a, v] : sweep(constant, AffineBinding::uniform(1), grid)) CHECK(v == 1.0);

  std::vector<double> nogrid;
  CHECK_THROWS_AS(sweep(sin25, AffineBinding::uniform(1), nogrid), std::invalid_argument);
}

TEST_CASE("sweep cross-checked against the statevector oracle") {
  TfiSpec spec{chain_topology(3), 2, CouplingMode::clifford_fixed, FieldMode::shared, false};
  auto tfi = build_tfi_circuit(spec);
  SparsePauli obs = parse_pauli("Z1", 3);
  auto s = enumerate_paths(tfi.circuit, obs, {}).surrogate;
  auto grid = linspace(0.0, std::numbers::pi / 2, 25);
  auto pts = sweep(s, AffineBinding::uniform(s.num_params), grid);
  for (const auto& [theta, value] : pts) {
    std::vector<double> params{theta};
    CHECK(std::abs(value - exact_expectation(tfi.circuit, params, obs)) < 1e-12);
  }
}

TEST_CASE("surface values, diagonal consistency, parallel rows") {
  // sin(p0) * sin(p1) on {0, pi/2}^2
  auto s = make(2, {{mono({{0, 1, 0}, {1, 1, 0}}), 1}});
  SurfaceBinding b;
  b.scale1 = {1.0, 0.0};
  b.scale2 = {0.0, 1.0};
  b.offset = {0.0, 0.0};
  std::vector<double> grid{0.0, std::numbers::pi / 2};
  auto m = surface(s, b, grid, grid);
  CHECK(m[0][0] == 0.0);
  CHECK(m[0][1] == 0.0);
  CHECK(m[1][0] == 0.0);
  CHECK(m[1][1] == Catch::Approx(1.0).margin(1e-14));

  // diagonal == sweep, bit-identical, when each param sits in one group
  auto grid2 = linspace(0.0, 1.5, 37);
  auto mat = surface(s, b, grid2, grid2);
  AffineBinding diag;
  diag.scale = {1.0, 1.0};
  diag.offset = {0.0, 0.0};
  auto line = sweep(s, diag, grid2);
  for (std::size_t i = 0; i < grid2.size(); ++i) CHECK(mat[i][i] == line[i].second);

  auto mat4 = surface(s, b, grid2, grid2, 4);
  CHECK(mat4 == mat);
}

TEST_CASE("seeded gaussian offsets reproduce bit-identical surfaces") {
  auto offs1 = gaussian_offsets(6, 0.1, 2024);
  auto offs2 = gaussian_offsets(6, 0.1, 2024);
  CHECK(offs1 == offs2);
  CHECK(gaussian_offsets(6, 0.1, 2025) != offs1);
  std::vector<char> mask{1, 0, 1, 0, 1, 0};
  auto masked = gaussian_offsets(6, 0.1, 2024, &mask);
  for (int i = 0; i < 6; ++i) CHECK(masked[i] == (mask[i] ? offs1[i] : 0.0));

  auto s = make(2, {{mono({{0, 1, 0}, {1, 0, 1}}), 2}});
  SurfaceBinding b;
  b.scale1 = {1.0, 0.0};
  b.scale2 = {0.0, 1.0};
  b.offset = gaussian_offsets(2, 0.05, 77);
  auto g = linspace(0.0, 1.0, 11);
  auto m1 = surface(s, b, g, g);
  b.offset = gaussian_offsets(2, 0.05, 77);
  auto m2 = surface(s, b, g, g);
  CHECK(m1 == m2);
}

TEST_CASE("csv emitters are deterministic") {
  auto s = make(1, {{mono({{0, 3, 1}}), -2}, {Monomial{}, 1}});
  auto grid = linspace(0.0, 1.0, 9);
  auto pts = sweep(s, AffineBinding::uniform(1), grid);
  std::ostringstream a, b;
  write_sweep_csv(a, pts);
  write_sweep_csv(b, sweep(s, AffineBinding::uniform(1), grid));
  std::string sweep_csv = a.str();
  CHECK(sweep_csv == b.str());
  CHECK(sweep_csv.substr(0, 12) == "angle,value\n");
  CHECK(std::count(sweep_csv.begin(), sweep_csv.end(), '\n') == 10);

  SurfaceBinding sb;
  sb.scale1 = {1.0};
  sb.scale2 = {0.0};
  sb.offset = {0.0};
  auto mat = surface(s, sb, grid, grid);
  std::ostringstream c;
  write_surface_csv(c, grid, grid, mat);
  std::string surface_csv = c.str();
  CHECK(surface_csv.substr(0, 14) == "angle1\\angle2,");
  CHECK(std::count(surface_csv.begin(), surface_csv.end(), '\n') == 10);

  std::ostringstream d;
  std::vector<double> sites{1.0, -1.0, 0.25};
  write_sites_csv(d, sites);
  CHECK(d.str() == "site,value\n0,1\n1,-1\n2,0.25\n");
}

TEST_CASE("binary round trip preserves everything") {
  TfiSpec spec{chain_topology(4), 2, CouplingMode::per_edge, FieldMode::per_site, false};
  auto tfi = build_tfi_circuit(spec);
  TruncationConfig cfg;
  cfg.max_freq = 6;
  cfg.max_weight = 3;
  cfg.trunc_prob = 0.01;
  cfg.bias = Bias::prefer_sin;
  auto res = enumerate_paths(tfi.circuit, parse_pauli("Z2", 4), cfg);
  Surrogate s = res.surrogate;
  s.prov.param_roles = tfi.params;

  std::string path = temp_path("paulipath_roundtrip.ppsurg");
  s.save(path);
  Surrogate back = Surrogate::load(path);
  CHECK(back.equals(s, true));
  CHECK(back.to_bytes() == s.to_bytes());
  std::remove(path.c_str());
}

TEST_CASE("corrupt surrogate files are rejected") {
  auto s = make(1, {{mono({{0, 1, 0}}), 1}});
  std::string bytes = s.to_bytes();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(Surrogate::from_bytes(bad_magic), parse_error);

  std::string bad_payload = bytes;
  bad_payload[bytes.size() / 2] ^= 0x40;
  CHECK_THROWS_AS(Surrogate::from_bytes(bad_payload), parse_error);

  std::string truncated = bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(Surrogate::from_bytes(truncated), parse_error);

  CHECK_THROWS_AS(Surrogate::load("/does/not/exist.ppsurg"), parse_error);
}

TEST_CASE("json export") {
  auto s = make(2, {{mono({{0, 2, 0}, {1, 0, 1}}), -3}});
  s.prov.n = 4;
  s.prov.observable = "Z1";
  auto j = surrogate_json(s);
  CHECK(j["n"] == 4);
  CHECK(j["num_params"] == 2);
  CHECK(j["monomials"] == 1);
  CHECK(j["coeff_l1"] == 3);
  REQUIRE(j["terms"].size() == 1);
  CHECK(j["terms"][0]["coeff"] == -3);
  CHECK(j["terms"][0]["powers"].size() == 2);
  CHECK(j["config"]["max_freq"].is_null());
}
