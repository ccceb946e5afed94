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

#ifndef PAULIPATH_IO_JSON_HPP
#define PAULIPATH_IO_JSON_HPP

#include <json.hpp>

#include "paulipath/surrogate.hpp"
#include "paulipath/truncation.hpp"

namespace paulipath {

inline nlohmann::json stats_json(const SearchStats& s) {
  return {
      {"paths_explored", s.paths_explored},
      {"paths_contributing", s.paths_contributing},
      {"truncated_by_freq", s.truncated_by_freq},
      {"truncated_by_prob", s.truncated_by_prob},
      {"truncated_by_weight", s.truncated_by_weight},
      {"max_rss_proxy", s.max_rss_proxy},
      {"max_weight_seen", s.max_weight_seen},
      {"wall_time_s", s.wall_time_s},
  };
}

inline nlohmann::json config_json(const TruncationConfig& cfg) {
  nlohmann::json j;
  j["max_freq"] = cfg.max_freq ? nlohmann::json(*cfg.max_freq) : nlohmann::json();
  j["trunc_prob"] = cfg.trunc_prob;
  j["max_weight"] = cfg.max_weight ? nlohmann::json(*cfg.max_weight) : nlohmann::json();
  j["bias"] = cfg.bias == Bias::none ? "none"
              : cfg.bias == Bias::prefer_sin ? "prefer_sin"
                                             : "prefer_cos";
  return j;
}

/// Header/provenance view of a surrogate file, without the monomials.
inline nlohmann::json provenance_json(const Surrogate& s) {
  nlohmann::json j;
  j["format"] = "ppsurg-v1";
  j["n"] = s.prov.n;
  j["num_params"] = s.num_params;
  j["observable"] = s.prov.observable;
  j["circuit_digest"] = s.prov.circuit_digest;
  j["observable_digest"] = s.prov.observable_digest;
  j["monomials"] = s.terms.size();
  j["coeff_l1"] = s.coeff_l1();
  j["config"] = config_json(s.prov.config);
  j["stats"] = stats_json(s.prov.stats);
  if (!s.prov.param_roles.empty()) {
    nlohmann::json roles = nlohmann::json::array();
    for (const auto& r : s.prov.param_roles) {
      roles.push_back({{"kind", r.kind == ParamInfo::Kind::field ? "field" : "coupling"},
                       {"layer", r.layer},
                       {"site", r.site},
                       {"edge", {r.a, r.b}}});
    }
    j["param_roles"] = std::move(roles);
  }
  return j;
}

/// Full JSON export: provenance plus every monomial as
///   {"powers": [[param, sin_exp, cos_exp], ...], "coeff": c}.
inline nlohmann::json surrogate_json(const Surrogate& s) {
  nlohmann::json j = provenance_json(s);
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [mono, coeff] : s.terms) {
    nlohmann::json powers = nlohmann::json::array();
    for (const auto& f : mono.powers)
      powers.push_back({f.param, f.sin_exp, f.cos_exp});
    terms.push_back({{"powers", std::move(powers)}, {"coeff", coeff}});
  }
  j["terms"] = std::move(terms);
  return j;
}

}  // namespace paulipath

#endif  // PAULIPATH_IO_JSON_HPP
