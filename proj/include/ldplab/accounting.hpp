// Copyright 2026 The ldplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LDPLAB_ACCOUNTING_HPP_
#define LDPLAB_ACCOUNTING_HPP_

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ldplab/math.hpp"

namespace ldplab::accounting {

// One privatized release in a composed protocol: participant i, round t,
// with its per-release differential privacy level.
struct LedgerEntry {
  int i = 0;
  int t = 0;
  double eps = 0.0;
  double delta = 0.0;
};

struct CompositionLedger {
  std::vector<LedgerEntry> entries;
  int n = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("participant count must be >= 1");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : entries) {
      if (!(e.eps >= 0.0)) throw std::invalid_argument("ledger eps must be nonnegative");
      if (!(e.delta >= 0.0 && e.delta <= 1.0))
        throw std::invalid_argument("ledger delta must be in [0, 1]");
      if (!seen.insert({e.i, e.t}).second)
        throw std::invalid_argument("duplicate (participant, round) ledger entry");
    }
  }
};

inline void to_json(nlohmann::json& j, const CompositionLedger& ledger) {
  j = nlohmann::json::array();
  for (const auto& e : ledger.entries)
    j.push_back({{"i", e.i}, {"t", e.t}, {"eps", e.eps}, {"delta", e.delta}});
}

inline void from_json(const nlohmann::json& j, CompositionLedger& ledger) {
  ledger.entries.clear();
  int max_i = 0;
  for (const auto& item : j) {
    LedgerEntry e{item.at("i").get<int>(), item.at("t").get<int>(),
                  item.at("eps").get<double>(), item.at("delta").get<double>()};
    max_i = std::max(max_i, e.i);
    ledger.entries.push_back(e);
  }
  ledger.n = std::max(1, max_i + 1);
}

// Renyi divergence guaranteed by a pure eps-private release at order alpha:
// min{2(alpha - 1) eps^2 + min{2, e^eps - 1} eps, eps}.
inline double dp_to_renyi_bound(double eps, double alpha) {
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  const double quad = 2.0 * (alpha - 1.0) * eps * eps +
                      std::min(2.0, std::expm1(eps)) * eps;
  return std::min(quad, eps);
}

// Average KL-privacy level implied by per-release pure DP levels:
// (1/n) sum_i min{eps_i, eps_i^2 / log 2}.
inline double dp_to_kl_average(const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw std::invalid_argument("empty epsilon list");
  double acc = 0.0;
  for (double e : epsilons) {
    if (!(e >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    acc += std::min(e, e * e / kLn2);
  }
  return acc / static_cast<double>(epsilons.size());
}

// Parameter checks for fully interactive approximate privacy over a finite
// data alphabet. delta = 0 passes vacuously. All comparisons are non-strict;
// every violated clause is reported, not just the first.
struct A1PrimeResult {
  bool pass = true;
  std::vector<std::string> violated;
};

inline A1PrimeResult check_assumption_a1prime(double eps, double delta,
                                              int alphabet_size) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be >= 2");
  A1PrimeResult result;
  auto fail = [&result](const char* name) {
    result.pass = false;
    result.violated.emplace_back(name);
  };
  const double log_alpha = std::log(static_cast<double>(alphabet_size));
  const double log_alpha_sq = log_alpha * log_alpha;
  if (!(delta <= std::min(eps, 1.0) / 256.0)) fail("delta <= min{eps,1}/256");
  const double scaled = delta * std::max(1.0 / eps, 1.0);
  const double growth = scaled > 0.0 ? scaled * std::log(1.0 / scaled) : 0.0;
  if (!(growth <= eps * eps)) fail("delta max{1/eps,1} log(1/(delta max{1/eps,1})) <= eps^2");
  if (!(delta <= std::min(eps, eps * eps) / log_alpha_sq))
    fail("delta <= min{eps,eps^2}/log^2|X|");
  if (eps <= 1.0 / 6.0) {
    if (!(delta <= std::pow(eps, 5) / (64.0 * log_alpha_sq)))
      fail("delta <= eps^5/(64 log^2|X|)");
    const double logsq = delta > 0.0 ? delta * std::pow(std::log(eps / delta), 2) : 0.0;
    if (!(logsq <= std::pow(eps, 5) / 16.0)) fail("delta log^2(eps/delta) <= eps^5/16");
  }
  return result;
}

// Compositional budget check: total delta within Delta <= 1/2 and summed
// KL-converted eps levels within n * eps_kl. Privacy levels are fixed
// per-entry values; the simulator only builds pipelines with deterministic
// schedules, so the expectations in the general statement degenerate.
inline bool check_compositional_budget(const CompositionLedger& ledger,
                                       double eps_kl, double total_delta) {
  ledger.validate();
  if (!(eps_kl >= 0.0) || !(total_delta >= 0.0))
    throw std::invalid_argument("budget parameters must be nonnegative");
  if (total_delta > 0.5) return false;
  double delta_sum = 0.0, kl_sum = 0.0;
  for (const auto& e : ledger.entries) {
    delta_sum += e.delta;
    kl_sum += std::min(e.eps * e.eps / kLn2, e.eps);
  }
  return delta_sum <= total_delta && kl_sum <= ledger.n * eps_kl;
}

}  // namespace ldplab::accounting

#endif  // LDPLAB_ACCOUNTING_HPP_
