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
#ifndef LDPLAB_CHANNELS_HPP_
#define LDPLAB_CHANNELS_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldplab/math.hpp"

namespace ldplab::channels {

// Privacy regime and parameters for a single release or a whole protocol.
struct PrivacySpec {
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> renyi_order;
  std::optional<double> epsilon_kl;

  void validate() const {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in [0, 1]");
    if (renyi_order && !(*renyi_order >= 1.0))
      throw std::invalid_argument("renyi_order must be >= 1");
    if (epsilon_kl && !(*epsilon_kl >= 0.0))
      throw std::invalid_argument("epsilon_kl must be nonnegative");
  }
};

// Row-stochastic conditional probability table q(z|x) over finite alphabets.
// Immutable by convention after construction; audits and the projection below
// are pure functions, safe for concurrent readers.
class DiscreteChannel {
 public:
  DiscreteChannel() = default;
  DiscreteChannel(int input_size, int output_size, std::vector<double> probs)
      : input_size_(input_size), output_size_(output_size), probs_(std::move(probs)) {
    validate();
  }

  static DiscreteChannel FromRows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows[0].empty())
      throw std::invalid_argument("channel needs at least one input and output");
    std::vector<double> flat;
    flat.reserve(rows.size() * rows[0].size());
    for (const auto& r : rows) {
      if (r.size() != rows[0].size())
        throw std::invalid_argument("ragged channel rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return DiscreteChannel(static_cast<int>(rows.size()),
                           static_cast<int>(rows[0].size()), std::move(flat));
  }

  int input_size() const { return input_size_; }
  int output_size() const { return output_size_; }
  double at(int x, int z) const { return probs_[static_cast<size_t>(x) * output_size_ + z]; }
  const std::vector<double>& probs() const { return probs_; }

  // Every row sums to 1 within 1e-12 and all entries lie in [0, 1].
  void validate() const {
    if (input_size_ <= 0 || output_size_ <= 0)
      throw std::invalid_argument("channel alphabet sizes must be positive");
    if (probs_.size() != static_cast<size_t>(input_size_) * output_size_)
      throw std::invalid_argument("channel table size mismatch");
    for (int x = 0; x < input_size_; ++x) {
      double row_sum = 0.0;
      for (int z = 0; z < output_size_; ++z) {
        const double p = at(x, z);
        if (!(p >= 0.0 && p <= 1.0))
          throw std::invalid_argument("channel entry outside [0, 1]");
        row_sum += p;
      }
      if (std::abs(row_sum - 1.0) > 1e-12)
        throw std::invalid_argument("channel row does not sum to 1");
    }
  }

 private:
  int input_size_ = 0;
  int output_size_ = 0;
  std::vector<double> probs_;
};

inline void to_json(nlohmann::json& j, const DiscreteChannel& ch) {
  std::vector<std::vector<double>> rows(ch.input_size());
  for (int x = 0; x < ch.input_size(); ++x) {
    rows[x].resize(ch.output_size());
    for (int z = 0; z < ch.output_size(); ++z) rows[x][z] = ch.at(x, z);
  }
  j = nlohmann::json{{"inputs", ch.input_size()},
                     {"outputs", ch.output_size()},
                     {"rows", rows}};
}

inline void from_json(const nlohmann::json& j, DiscreteChannel& ch) {
  const int inputs = j.at("inputs").get<int>();
  const int outputs = j.at("outputs").get<int>();
  auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
  ch = DiscreteChannel::FromRows(rows);
  if (ch.input_size() != inputs || ch.output_size() != outputs)
    throw std::invalid_argument("channel JSON sizes disagree with rows");
}

// Tightest eps such that q(z|x) <= e^eps q(z|x') for all x, x', z. A 0/0
// ratio counts as 1; any q(z|x) > 0 against q(z|x') = 0 yields infinity.
// Zero probabilities are taken at face value rather than floored: clamping
// would hide support violations.
inline double audit_pure_dp(const DiscreteChannel& ch) {
  ch.validate();
  double worst = 0.0;
  for (int z = 0; z < ch.output_size(); ++z) {
    double lo = kInfinity, hi = 0.0;
    for (int x = 0; x < ch.input_size(); ++x) {
      const double p = ch.at(x, z);
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    if (hi == 0.0) continue;  // unused output symbol
    if (lo == 0.0) return kInfinity;
    worst = std::max(worst, std::log(hi / lo));
  }
  return worst;
}

// Tightest delta at privacy level eps: the largest hockey-stick divergence
// max_{x,x'} sum_z max{q(z|x) - e^eps q(z|x'), 0}.
inline double audit_approx_dp(const DiscreteChannel& ch, double eps) {
  ch.validate();
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  if (std::isinf(eps)) return 0.0;  // every channel is (inf, 0)-private
  const double factor = std::exp(eps);
  double worst = 0.0;
  for (int x = 0; x < ch.input_size(); ++x) {
    for (int xp = 0; xp < ch.input_size(); ++xp) {
      if (x == xp) continue;
      double mass = 0.0;
      for (int z = 0; z < ch.output_size(); ++z) {
        const double gap = ch.at(x, z) - factor * ch.at(xp, z);
        if (gap > 0.0) mass += gap;
      }
      worst = std::max(worst, mass);
    }
  }
  return std::min(worst, 1.0);
}

// Renyi divergence of order alpha between two finite pmfs, in nats.
// alpha = 1 is the KL limit. Support violations yield infinity.
inline double renyi_divergence(const std::vector<double>& p,
                               const std::vector<double>& q, double alpha) {
  if (p.size() != q.size()) throw std::invalid_argument("pmf size mismatch");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  if (alpha == 1.0) {
    double kl = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      if (q[i] == 0.0) return kInfinity;
      kl += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(kl, 0.0);
  }
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfinity;
    acc += std::exp(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  }
  return std::max(std::log(acc) / (alpha - 1.0), 0.0);
}

// Largest order-alpha Renyi divergence over ordered input pairs.
inline double audit_renyi(const DiscreteChannel& ch, double alpha) {
  ch.validate();
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  double worst = 0.0;
  std::vector<double> p(ch.output_size()), q(ch.output_size());
  for (int x = 0; x < ch.input_size(); ++x) {
    for (int xp = 0; xp < ch.input_size(); ++xp) {
      if (x == xp) continue;
      for (int z = 0; z < ch.output_size(); ++z) {
        p[z] = ch.at(x, z);
        q[z] = ch.at(xp, z);
      }
      worst = std::max(worst, renyi_divergence(p, q, alpha));
    }
  }
  return worst;
}

// Projects an (eps, delta)-approximately private channel onto a purely
// eps-private one.
//
// Per output symbol z, all rows must end up inside a multiplicative band
// [l(z), e^eps * l(z)]. Columns already satisfying the ratio keep their
// band anchored at the column minimum, so compliant channels pass through
// bit-identically. A violating column gets the two-point band level
// l(z) = (min + max) / (1 + e^eps); rows above the band are cut to its top,
// rows below are raised to its bottom, which charges each row at most its
// hockey-stick violation against the column extremes divided by (1 + e^eps).
// Row mass is then rebalanced inside the bands, which is always feasible for
// a row-stochastic table and keeps every pairwise ratio at e^eps or below.
//
// For a two-input channel this is exactly the classical pairwise repair of an
// approximately private pair of distributions; the per-column band replaces
// averaging the pairwise constructions over a reference measure, which does
// not preserve the eps ratio once renormalized.
//
// Channels whose violations are far from the pure regime (many inputs with
// near-disjoint supports) can make the band system infeasible — the floors
// alone may exceed unit row mass — in which case this throws a
// std::runtime_error instead of returning a table outside the contract.
inline DiscreteChannel project_to_pure_dp(const DiscreteChannel& ch, double eps,
                                          double delta) {
  ch.validate();
  if (!(eps >= 0.0) || std::isinf(eps))
    throw std::invalid_argument("eps must be finite and nonnegative");
  const double factor = std::exp(eps);
  if (!(delta >= 0.0) || delta >= 1.0 + factor)
    throw std::invalid_argument("delta outside [0, 1 + e^eps)");
  if (audit_approx_dp(ch, eps) > delta + 1e-9)
    throw std::invalid_argument("channel is not (eps, delta)-approximately private");

  const int k = ch.input_size();
  const int m = ch.output_size();
  std::vector<double> lo(m), hi(m);
  bool any_violation = false;
  for (int z = 0; z < m; ++z) {
    double mn = kInfinity, mx = 0.0;
    for (int x = 0; x < k; ++x) {
      mn = std::min(mn, ch.at(x, z));
      mx = std::max(mx, ch.at(x, z));
    }
    // Relative slack keeps columns sitting exactly on the ratio boundary
    // (e.g. an exactly eps-private channel) bit-identical; it contributes at
    // most 1e-12 to the audited level, far inside the 1e-9 contract.
    if (mx <= factor * mn * (1.0 + 1e-12)) {
      lo[z] = mn;
      hi[z] = factor * mn;
    } else {
      any_violation = true;
      const double level = (mn + mx) / (1.0 + factor);
      lo[z] = level;
      hi[z] = factor * level;
    }
  }
  if (!any_violation) return ch;

  std::vector<double> out(ch.probs());
  for (int x = 0; x < k; ++x) {
    double* row = out.data() + static_cast<size_t>(x) * m;
    bool touched = false;
    double sum = 0.0;
    for (int z = 0; z < m; ++z) {
      if (row[z] > hi[z]) {
        row[z] = hi[z];
        touched = true;
      } else if (row[z] < lo[z]) {
        row[z] = lo[z];
        touched = true;
      }
      sum += row[z];
    }
    if (!touched) continue;
    double net = 1.0 - sum;
    if (net > 0.0) {
      double headroom = 0.0;
      for (int z = 0; z < m; ++z) headroom += hi[z] - row[z];
      if (headroom < net) throw std::runtime_error("projection rebalance infeasible");
      const double scale = net / headroom;
      for (int z = 0; z < m; ++z) row[z] += (hi[z] - row[z]) * scale;
    } else if (net < 0.0) {
      double slack = 0.0;
      for (int z = 0; z < m; ++z) slack += row[z] - lo[z];
      if (slack < -net) throw std::runtime_error("projection rebalance infeasible");
      const double scale = -net / slack;
      for (int z = 0; z < m; ++z) row[z] -= (row[z] - lo[z]) * scale;
    }
  }
  return DiscreteChannel(k, m, std::move(out));
}

// Total variation between two rows of equal length.
inline double total_variation(const std::vector<double>& p,
                              const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("pmf size mismatch");
  double tv = 0.0;
  for (size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

// Per-row total variation guarantee of project_to_pure_dp as a function of
// the certified (eps, delta) level of the input.
inline double projection_tv_bound(double eps, double delta) {
  const double factor = std::exp(eps);
  return 0.5 * (delta / (1.0 + factor) + delta / (1.0 + factor - delta));
}

inline std::vector<double> channel_row(const DiscreteChannel& ch, int x) {
  std::vector<double> row(ch.output_size());
  for (int z = 0; z < ch.output_size(); ++z) row[z] = ch.at(x, z);
  return row;
}

}  // namespace ldplab::channels

#endif  // LDPLAB_CHANNELS_HPP_
