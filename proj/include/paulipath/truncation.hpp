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

#ifndef PAULIPATH_TRUNCATION_HPP
#define PAULIPATH_TRUNCATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace paulipath {

/// Exploration-order hint for the two children of a split. Never changes
/// which paths survive truncation, only the order they are visited in.
enum class Bias : std::uint8_t { none = 0, prefer_sin = 1, prefer_cos = 2 };

/// Path-search truncation knobs.
///   max_freq:   drop any path once its split count would exceed this.
///   trunc_prob: drop a path early when the estimated probability of staying
///               within max_freq falls below this value (0 disables).
///   max_weight: drop a path when the back-propagated operator acts
///               non-trivially on more than this many qubits at any stage.
/// Unset optionals mean unbounded.
struct TruncationConfig {
  std::optional<std::uint32_t> max_freq;
  double trunc_prob = 0.0;
  std::optional<std::uint32_t> max_weight;
  Bias bias = Bias::none;

  void validate() const {
    if (trunc_prob < 0.0 || trunc_prob >= 1.0)
      throw std::invalid_argument("trunc_prob must lie in [0, 1)");
    if (trunc_prob > 0.0 && !max_freq)
      throw std::invalid_argument("trunc_prob requires a finite max_freq");
    if (max_weight && *max_weight == 0)
      throw std::invalid_argument("max_weight must be positive");
  }

  bool operator==(const TruncationConfig&) const = default;
};

/// Search accounting. paths_explored counts every leaf event (completed or
/// truncated); paths_contributing counts completions with non-zero overlap.
/// max_rss_proxy is a coarse live-frontier proxy: the peak of the root queue
/// size and of any worker's split-stack depth.
struct SearchStats {
  std::uint64_t paths_explored = 0;
  std::uint64_t paths_contributing = 0;
  std::uint64_t truncated_by_freq = 0;
  std::uint64_t truncated_by_prob = 0;
  std::uint64_t truncated_by_weight = 0;
  std::uint64_t max_rss_proxy = 0;
  std::uint64_t max_weight_seen = 0;
  double wall_time_s = 0.0;

  SearchStats& operator+=(const SearchStats& o) {
    paths_explored += o.paths_explored;
    paths_contributing += o.paths_contributing;
    truncated_by_freq += o.truncated_by_freq;
    truncated_by_prob += o.truncated_by_prob;
    truncated_by_weight += o.truncated_by_weight;
    max_rss_proxy = std::max(max_rss_proxy, o.max_rss_proxy);
    max_weight_seen = std::max(max_weight_seen, o.max_weight_seen);
    return *this;
  }
};

/// Probability that a path which split l times in its first k RZ encounters
/// (out of m total) finishes with at most `max_freq` splits, assuming a
/// constant split rate l/k for the remaining gates:
///
///   P = sum_{i=0}^{max_freq - l} C(m-k, i) (l/k)^i (1 - l/k)^(m-k-i)
///
/// The summation limit is the remaining split budget max_freq - l; with any
/// larger limit the sum is identically 1 and the estimate could never
/// truncate anything. Returns 1 exactly when l = 0 or k = m.
inline double estimate_survival_prob(std::uint64_t l, std::uint64_t k,
                                     std::uint64_t m, std::uint64_t max_freq) {
  if (k < 1 || k > m) throw std::invalid_argument("need 1 <= k <= m");
  if (l > k) throw std::invalid_argument("need l <= k");
  if (l > max_freq) throw std::invalid_argument("need l <= max_freq");
  if (l == 0 || k == m) return 1.0;

  std::uint64_t remaining = m - k;
  std::uint64_t budget = std::min(max_freq - l, remaining);
  double r = static_cast<double>(l) / static_cast<double>(k);
  if (l == k)  // split every time so far: all remaining gates split
    return remaining <= max_freq - l ? 1.0 : 0.0;

  double log_r = std::log(r);
  double log_q = std::log1p(-r);
  double sum = 0.0;
  double log_binom = 0.0;  // log C(remaining, 0)
  for (std::uint64_t i = 0;; ++i) {
    sum += std::exp(log_binom + static_cast<double>(i) * log_r +
                    static_cast<double>(remaining - i) * log_q);
    if (i == budget) break;
    log_binom += std::log(static_cast<double>(remaining - i)) -
                 std::log(static_cast<double>(i + 1));
  }
  return std::min(sum, 1.0);
}

/// Lazy per-search memo of estimate_survival_prob over (l, k); the formula
/// is evaluated at millions of decision points with few distinct arguments.
class SurvivalCache {
 public:
  SurvivalCache(std::uint64_t m, std::uint64_t max_freq)
      : m_(m),
        // l never exceeds m, and for max_freq >= m the estimate is 1 anyway
        max_freq_(std::min(max_freq, m)),
        table_((max_freq_ + 1) * (m + 1), std::numeric_limits<double>::quiet_NaN()) {}

  double get(std::uint64_t l, std::uint64_t k) {
    double& slot = table_[l * (m_ + 1) + k];
    if (std::isnan(slot)) slot = estimate_survival_prob(l, k, m_, max_freq_);
    return slot;
  }

 private:
  std::uint64_t m_, max_freq_;
  std::vector<double> table_;
};

}  // namespace paulipath

#endif  // PAULIPATH_TRUNCATION_HPP
