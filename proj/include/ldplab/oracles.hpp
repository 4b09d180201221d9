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
#ifndef LDPLAB_ORACLES_HPP_
#define LDPLAB_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ldplab/channels.hpp"
#include "ldplab/math.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::oracles {

constexpr long kMaxAtoms = 1000000;

struct Divergences {
  double tv = 0.0;
  double hellinger2 = 0.0;  // 1 - Bhattacharyya coefficient, in [0, 1]
  double kl = 0.0;
  double renyi = 0.0;
};

// Exact divergences between two pmfs on a common support indexing. KL and
// Renyi return the infinite sentinel on support violations.
inline Divergences exact_divergences(const std::vector<double>& p,
                                     const std::vector<double>& q,
                                     double alpha = 2.0) {
  if (p.size() != q.size()) throw std::invalid_argument("pmf size mismatch");
  Divergences d;
  double bc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    d.tv += std::abs(p[i] - q[i]);
    bc += std::sqrt(p[i] * q[i]);
  }
  d.tv *= 0.5;
  d.hellinger2 = std::max(0.0, 1.0 - bc);
  d.kl = channels::renyi_divergence(p, q, 1.0);
  d.renyi = channels::renyi_divergence(p, q, alpha);
  return d;
}

// Mutual information in nats of a joint pmf over A x B given as a row-major
// table; zero cells contribute zero.
inline double mutual_information(const std::vector<double>& joint, int na, int nb) {
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  double total = 0.0;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const double w = joint[static_cast<size_t>(a) * nb + b];
      pa[a] += w;
      pb[b] += w;
      total += w;
    }
  if (total <= 0.0) return 0.0;
  double info = 0.0;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const double w = joint[static_cast<size_t>(a) * nb + b];
      if (w > 0.0) info += w * std::log(w * total / (pa[a] * pb[b]));
    }
  return std::max(info / total, 0.0);
}

// Exact joint law of a sequential release pipeline on finite alphabets.
//
// A latent V lives on the hypercube {-1,+1}^d. Conditional on V, the n
// samples are i.i.d. and their d coordinates independent: coordinate j
// follows coord_minus[j] or coord_plus[j] depending on the sign of V_j.
// Sample i is privatized by a channel that may condition on the full history
// of earlier releases (one round of communication, sequential order).
class FiniteJoint {
 public:
  // channel(i, x_index, z_history_index, z) -> probability. x_index is the
  // mixed-radix composite of sample i's coordinates; z_history_index the
  // composite of z_1..z_{i-1}.
  using Channel = std::function<double(int, int, long, int)>;

  FiniteJoint(int n, std::vector<int> x_card,
              std::vector<std::vector<double>> coord_minus,
              std::vector<std::vector<double>> coord_plus,
              std::vector<int> z_card, Channel channel,
              std::vector<double> v_prior = {})
      : n_(n),
        d_(static_cast<int>(x_card.size())),
        x_card_(std::move(x_card)),
        coord_minus_(std::move(coord_minus)),
        coord_plus_(std::move(coord_plus)),
        z_card_(std::move(z_card)),
        channel_(std::move(channel)),
        v_prior_(std::move(v_prior)) {
    if (n_ < 1 || d_ < 1) throw std::invalid_argument("n and d must be positive");
    if (static_cast<int>(z_card_.size()) != n_)
      throw std::invalid_argument("need one output alphabet per sample");
    num_v_ = 1 << d_;
    if (v_prior_.empty()) v_prior_.assign(num_v_, 1.0 / num_v_);
    if (static_cast<int>(v_prior_.size()) != num_v_)
      throw std::invalid_argument("prior size must be 2^d");
    sample_card_ = 1;
    for (int j = 0; j < d_; ++j) {
      check_pmf(coord_minus_.at(j), x_card_[j]);
      check_pmf(coord_plus_.at(j), x_card_[j]);
      sample_card_ *= x_card_[j];
    }
    x_total_ = 1;
    for (int i = 0; i < n_; ++i) x_total_ *= sample_card_;
    z_total_ = 1;
    for (int i = 0; i < n_; ++i) z_total_ *= z_card_[i];
    const long atoms = static_cast<long>(num_v_) * x_total_ * z_total_;
    if (atoms > kMaxAtoms) throw std::invalid_argument("instance exceeds enumeration ceiling");
    build();
  }

  int n() const { return n_; }
  int d() const { return d_; }
  int num_v() const { return num_v_; }
  long x_total() const { return x_total_; }
  long z_total() const { return z_total_; }

  double joint_at(int v, long x, long z) const {
    return joint_[(static_cast<size_t>(v) * x_total_ + x) * z_total_ + z];
  }

  // I(X_{<=n}; Z) with the latent marginalized out.
  double mi_x_z() const {
    std::vector<double> table(static_cast<size_t>(x_total_) * z_total_, 0.0);
    for (int v = 0; v < num_v_; ++v)
      for (long x = 0; x < x_total_; ++x)
        for (long z = 0; z < z_total_; ++z)
          table[static_cast<size_t>(x) * z_total_ + z] += joint_at(v, x, z);
    return mutual_information(table, static_cast<int>(x_total_), static_cast<int>(z_total_));
  }

  // I(V; Z) of the full latent vector.
  double mi_v_z() const {
    std::vector<double> table(static_cast<size_t>(num_v_) * z_total_, 0.0);
    for (int v = 0; v < num_v_; ++v)
      for (long x = 0; x < x_total_; ++x)
        for (long z = 0; z < z_total_; ++z)
          table[static_cast<size_t>(v) * z_total_ + z] += joint_at(v, x, z);
    return mutual_information(table, num_v_, static_cast<int>(z_total_));
  }

  // I(X_{<=n}; Z | V) = sum_v P(v) I(X; Z | V = v).
  double mi_x_z_given_v() const {
    double acc = 0.0;
    for (int v = 0; v < num_v_; ++v) acc += conditional_weight(v) * mi_x_z_at_v(v);
    return acc;
  }

  // I(X_{<=n}; Z | V = v) for a single latent value.
  double mi_x_z_at_v(int v) const {
    std::vector<double> table(static_cast<size_t>(x_total_) * z_total_);
    for (long x = 0; x < x_total_; ++x)
      for (long z = 0; z < z_total_; ++z)
        table[static_cast<size_t>(x) * z_total_ + z] = joint_at(v, x, z);
    return mutual_information(table, static_cast<int>(x_total_), static_cast<int>(z_total_));
  }

  // I(X_{<=n, j}; Z | V): the j-th coordinate across all samples.
  double mi_coord_z_given_v(int j) const {
    long coord_total = 1;
    for (int i = 0; i < n_; ++i) coord_total *= x_card_[j];
    double acc = 0.0;
    std::vector<double> table(static_cast<size_t>(coord_total) * z_total_);
    for (int v = 0; v < num_v_; ++v) {
      std::fill(table.begin(), table.end(), 0.0);
      for (long x = 0; x < x_total_; ++x) {
        const long cx = coord_tuple(x, j);
        for (long z = 0; z < z_total_; ++z)
          table[static_cast<size_t>(cx) * z_total_ + z] += joint_at(v, x, z);
      }
      acc += conditional_weight(v) *
             mutual_information(table, static_cast<int>(coord_total),
                                static_cast<int>(z_total_));
    }
    return acc;
  }

  // Marginal distribution of the release tuple conditional on V_j = sign.
  std::vector<double> marginal_given_vj(int j, int sign) const {
    std::vector<double> out(z_total_, 0.0);
    double weight = 0.0;
    for (int v = 0; v < num_v_; ++v) {
      const int bit = (v >> j) & 1;
      if ((sign > 0) != (bit == 1)) continue;
      weight += v_prior_[v];
      for (long x = 0; x < x_total_; ++x)
        for (long z = 0; z < z_total_; ++z) out[z] += joint_at(v, x, z);
    }
    if (weight <= 0.0) throw std::invalid_argument("latent value has zero prior mass");
    for (double& w : out) w /= weight;
    return out;
  }

 private:
  static void check_pmf(const std::vector<double>& p, int card) {
    if (static_cast<int>(p.size()) != card)
      throw std::invalid_argument("coordinate pmf size mismatch");
    double s = 0.0;
    for (double w : p) {
      if (!(w >= 0.0)) throw std::invalid_argument("negative pmf entry");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("pmf does not sum to 1");
  }

  double conditional_weight(int v) const { return v_prior_[v]; }

  // Extract the coordinate-j value of every sample from a composite x index.
  long coord_tuple(long x, int j) const {
    long out = 0;
    long base = 1;
    for (int i = 0; i < n_; ++i) {
      long sample = x % sample_card_;
      x /= sample_card_;
      for (int jj = 0; jj < j; ++jj) sample /= x_card_[jj];
      out += (sample % x_card_[j]) * base;
      base *= x_card_[j];
    }
    return out;
  }

  double sample_prob(int v, long sample_idx) const {
    double p = 1.0;
    for (int j = 0; j < d_; ++j) {
      const int a = static_cast<int>(sample_idx % x_card_[j]);
      sample_idx /= x_card_[j];
      p *= ((v >> j) & 1) ? coord_plus_[j][a] : coord_minus_[j][a];
    }
    return p;
  }

  void build() {
    joint_.assign(static_cast<size_t>(num_v_) * x_total_ * z_total_, 0.0);
    std::vector<long> x_samples(n_), z_vals(n_);
    for (int v = 0; v < num_v_; ++v) {
      for (long x = 0; x < x_total_; ++x) {
        long rem = x;
        double px = 1.0;
        for (int i = 0; i < n_; ++i) {
          x_samples[i] = rem % sample_card_;
          rem /= sample_card_;
          px *= sample_prob(v, x_samples[i]);
        }
        if (px == 0.0) continue;
        for (long z = 0; z < z_total_; ++z) {
          long zrem = z;
          double pz = 1.0;
          long hist = 0, hist_base = 1;
          for (int i = 0; i < n_ && pz > 0.0; ++i) {
            const int zi = static_cast<int>(zrem % z_card_[i]);
            zrem /= z_card_[i];
            pz *= channel_(i, static_cast<int>(x_samples[i]), hist, zi);
            hist += zi * hist_base;
            hist_base *= z_card_[i];
          }
          joint_[(static_cast<size_t>(v) * x_total_ + x) * z_total_ + z] =
              v_prior_[v] * px * pz;
        }
      }
    }
    double total = 0.0;
    for (double w : joint_) total += w;
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("channel rows do not define a probability law");
  }

  int n_, d_;
  std::vector<int> x_card_;
  std::vector<std::vector<double>> coord_minus_, coord_plus_;
  std::vector<int> z_card_;
  Channel channel_;
  std::vector<double> v_prior_;
  int num_v_ = 0;
  long sample_card_ = 0, x_total_ = 0, z_total_ = 0;
  std::vector<double> joint_;
};

enum class MiKind { kXZ, kVZ, kXZGivenV };

inline double exact_mutual_information(const FiniteJoint& joint, MiKind which) {
  switch (which) {
    case MiKind::kXZ: return joint.mi_x_z();
    case MiKind::kVZ: return joint.mi_v_z();
    case MiKind::kXZGivenV: return joint.mi_x_z_given_v();
  }
  throw std::invalid_argument("unknown mutual information kind");
}

// Exact marginals of the release tuple per latent value, for d = 1.
inline std::pair<std::vector<double>, std::vector<double>> pipeline_marginal(
    const FiniteJoint& joint) {
  if (joint.d() != 1) throw std::invalid_argument("pipeline_marginal expects d = 1");
  return {joint.marginal_given_vj(0, -1), joint.marginal_given_vj(0, +1)};
}

// Assouad testing risk (1/2) sum_j (1 - TV(M_{+j}, M_{-j})) from exact
// per-coordinate marginals.
inline double exact_assouad_testing_risk(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& marginals) {
  double acc = 0.0;
  for (const auto& [m_minus, m_plus] : marginals)
    acc += 0.5 * (1.0 - channels::total_variation(m_minus, m_plus));
  return acc;
}

// Falsification search for the strong data processing constant of the pair
// (p_minus, p_plus): the largest observed I(V;Z)/I(X;Z) over random and
// extreme channels X -> Z is a certified lower estimate of the constant.
// Output alphabets of size 2..max_output_size are tried; the exact supremum
// over all channels is not computable, so this only ever under-reports.
inline double sdpi_constant_search(const std::vector<double>& p_minus,
                                   const std::vector<double>& p_plus,
                                   int max_output_size, int trials,
                                   SeededRng& rng) {
  const int nx = static_cast<int>(p_minus.size());
  if (static_cast<int>(p_plus.size()) != nx)
    throw std::invalid_argument("pair must share an alphabet");
  if (nx > 8) throw std::invalid_argument("input alphabet too large for search");
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  double best = 0.0;
  auto consider = [&](const std::vector<std::vector<double>>& rows) {
    const int nz = static_cast<int>(rows[0].size());
    // Joint over (V, X, Z) with uniform V.
    std::vector<double> vz(2 * nz, 0.0), xz(static_cast<size_t>(nx) * nz, 0.0);
    for (int x = 0; x < nx; ++x)
      for (int z = 0; z < nz; ++z) {
        const double w_minus = 0.5 * p_minus[x] * rows[x][z];
        const double w_plus = 0.5 * p_plus[x] * rows[x][z];
        vz[z] += w_minus;
        vz[nz + z] += w_plus;
        xz[static_cast<size_t>(x) * nz + z] += w_minus + w_plus;
      }
    const double ixz = mutual_information(xz, nx, nz);
    if (ixz < 1e-12) return;  // degenerate channel carries no signal
    best = std::max(best, mutual_information(vz, 2, nz) / ixz);
  };

  // Deterministic extremes: identity, thresholds, erasures.
  {
    std::vector<std::vector<double>> identity(nx, std::vector<double>(nx, 0.0));
    for (int x = 0; x < nx; ++x) identity[x][x] = 1.0;
    consider(identity);
    for (int c = 1; c < nx; ++c) {
      std::vector<std::vector<double>> threshold(nx, std::vector<double>(2, 0.0));
      for (int x = 0; x < nx; ++x) threshold[x][x >= c ? 1 : 0] = 1.0;
      consider(threshold);
    }
    for (double erase : {0.25, 0.5, 0.75}) {
      std::vector<std::vector<double>> erasure(nx, std::vector<double>(nx + 1, 0.0));
      for (int x = 0; x < nx; ++x) {
        erasure[x][x] = 1.0 - erase;
        erasure[x][nx] = erase;
      }
      consider(erasure);
    }
  }
  for (int t = 0; t < trials; ++t) {
    const int nz = 2 + rng.next_int(std::max(1, max_output_size - 1));
    std::vector<std::vector<double>> rows(nx);
    for (int x = 0; x < nx; ++x) rows[x] = random_pmf(rng, nz);
    consider(rows);
  }
  return best;
}

// Verifies sum_j I(X_{<=n,j}; Z | V) <= I(X_{<=n}; Z | V) on an exact
// instance; returns the slack (right side minus left side).
inline double info_decomposition_gap(const FiniteJoint& joint) {
  double coord_sum = 0.0;
  for (int j = 0; j < joint.d(); ++j) coord_sum += joint.mi_coord_z_given_v(j);
  return joint.mi_x_z_given_v() - coord_sum;
}

inline bool info_decomposition_check(const FiniteJoint& joint) {
  return info_decomposition_gap(joint) >= -1e-10;
}

}  // namespace ldplab::oracles

#endif  // LDPLAB_ORACLES_HPP_
