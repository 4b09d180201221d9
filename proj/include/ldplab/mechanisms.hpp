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
#ifndef LDPLAB_MECHANISMS_HPP_
#define LDPLAB_MECHANISMS_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ldplab/channels.hpp"
#include "ldplab/math.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::mechanisms {

// One privatized observation plus its debiasing metadata. Missing
// (non-sampled) coordinates are encoded as NaN, never as zeros, so that
// estimators inverse-propensity-weight only observed coordinates.
struct PrivateRelease {
  std::vector<double> values;
  double magnitude_bound = 0.0;  // |Z_j| <= magnitude_bound for observed j
  double unbias_factor = 1.0;    // E[Z_j | input] = unbias_factor * target
  std::optional<std::vector<int>> sampled_coords;

  void validate() const {
    if (!(unbias_factor > 0.0)) throw std::invalid_argument("unbias factor must be positive");
    for (double v : values) {
      if (std::isnan(v)) continue;
      if (!(std::abs(v) <= magnitude_bound + 1e-12))
        throw std::invalid_argument("release exceeds magnitude bound");
    }
  }
};

// Experiment logs keep releases as JSON; missing coordinates become null.
inline void to_json(nlohmann::json& j, const PrivateRelease& release) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : release.values) {
    if (std::isnan(v)) {
      values.push_back(nullptr);
    } else {
      values.push_back(v);
    }
  }
  j = nlohmann::json{{"values", std::move(values)},
                     {"magnitude_bound", release.magnitude_bound},
                     {"unbias_factor", release.unbias_factor}};
  if (release.sampled_coords) j["sampled_coords"] = *release.sampled_coords;
}

// Debiased magnitude (e^eps + 1) / (e^eps - 1) of a sign-flip release.
inline double rr_scale(double eps) {
  return (std::exp(eps) + 1.0) / (std::exp(eps) - 1.0);
}

// Sign-flip kernel: keeps the sign with probability e^eps/(e^eps + 1) and
// scales so that E[Z | sign] = sign.
inline double rr_sign_draw(double sign, double eps, SeededRng& rng) {
  const double keep = std::exp(eps) / (std::exp(eps) + 1.0);
  return rr_scale(eps) * (rng.next_bernoulli(keep) ? sign : -sign);
}

inline PrivateRelease rr_sign_mechanism(double x, double eps, SeededRng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  PrivateRelease release;
  release.values = {rr_sign_draw(sign_of(x), eps, rng)};
  release.magnitude_bound = rr_scale(eps);
  release.unbias_factor = 1.0;
  release.validate();
  return release;
}

// Privatizes a known data bit; the channel acts on the bit alone.
inline PrivateRelease correlated_bit_mechanism(int bit, double eps, SeededRng& rng) {
  if (bit != 1 && bit != -1) throw std::invalid_argument("bit must be +1 or -1");
  return rr_sign_mechanism(static_cast<double>(bit), eps, rng);
}

// Per-coordinate budget of the subsampled release: the floor(eps) ^ d
// released coordinates split eps evenly, so composition spends it exactly.
// Equals 1 whenever eps is an integer at most d.
inline double subsample_unit_budget(double eps, int d) {
  const int s = std::min(static_cast<int>(std::floor(eps)), d);
  return eps / s;
}

// Releases floor(eps) ^ d coordinates chosen uniformly without replacement,
// each through the sign-flip kernel at the per-coordinate budget above.
// The coordinate set is data-independent and is released in the clear.
inline PrivateRelease coordinate_subsample_mechanism(const std::vector<double>& x,
                                                     double eps, SeededRng& rng) {
  if (!(eps >= 1.0)) throw std::invalid_argument("eps must be at least 1");
  const int d = static_cast<int>(x.size());
  if (d < 1) throw std::invalid_argument("empty input vector");
  const int s = std::min(static_cast<int>(std::floor(eps)), d);
  const double eps0 = subsample_unit_budget(eps, d);
  PrivateRelease release;
  release.values.assign(d, kNan);
  release.sampled_coords = rng.sample_without_replacement(d, s);
  for (int j : *release.sampled_coords)
    release.values[j] = rr_sign_draw(sign_of(x[j]), eps0, rng);
  release.magnitude_bound = rr_scale(eps0);
  release.unbias_factor = 1.0;
  release.validate();
  return release;
}

// Exact per-coordinate bias E[W_j v_j] of the halfspace-conditioned uniform
// sign vector below: ((e^eps - 1)/(e^eps + 1)) * C(d-1, floor((d-1)/2)) / 2^{d-1}.
inline double linf_debias_factor(int d, double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  const double tilt = (std::exp(eps) - 1.0) / (std::exp(eps) + 1.0);
  return tilt * std::exp(log_choose(d - 1, (d - 1) / 2) - (d - 1) * kLn2);
}

namespace internal {

// Draws W uniform on {-1,1}^d conditioned on the halfspace <W, v> > 0 with
// probability e^eps/(1 + e^eps) and on <W, v> <= 0 otherwise. A zero inner
// product (even d) is split between the two events by a fair coin, which
// keeps the per-point output masses inside the e^eps band; committing ties
// to one side would not.
inline void linf_draw_signs(const std::vector<int>& v, double eps, SeededRng& rng,
                            std::vector<int>& w) {
  const int d = static_cast<int>(v.size());
  const bool positive_side = rng.next_bernoulli(std::exp(eps) / (1.0 + std::exp(eps)));
  w.resize(d);
  for (;;) {
    int dot = 0;
    for (int j = 0; j < d; ++j) {
      w[j] = rng.next_sign();
      dot += w[j] * v[j];
    }
    bool side;
    if (dot > 0) {
      side = true;
    } else if (dot < 0) {
      side = false;
    } else {
      side = rng.next_bernoulli(0.5);
    }
    if (side == positive_side) return;
  }
}

}  // namespace internal

// Hypercube release with E[Z | sgn(x)] = sgn(x) exactly; the released vector
// lives on (1/m) * {-1,1}^d for the closed-form bias m above.
inline PrivateRelease linf_mechanism(const std::vector<double>& x, double eps,
                                     SeededRng& rng) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const int d = static_cast<int>(x.size());
  if (d < 1) throw std::invalid_argument("empty input vector");
  std::vector<int> v(d);
  for (int j = 0; j < d; ++j) v[j] = x[j] < 0.0 ? -1 : 1;
  std::vector<int> w;
  internal::linf_draw_signs(v, eps, rng, w);
  const double m = linf_debias_factor(d, eps);
  PrivateRelease release;
  release.values.resize(d);
  for (int j = 0; j < d; ++j) release.values[j] = w[j] / m;
  release.magnitude_bound = 1.0 / m;
  release.unbias_factor = 1.0;
  release.validate();
  return release;
}

// Additive Gaussian release for KL-private aggregation: the KL divergence
// between releases at inputs a shift apart is shift^2 / (2 s^2), so
// s^2 = sensitivity^2 / (2 eps_kl) caps it at eps_kl.
inline PrivateRelease gaussian_noise_mechanism(double x, double sensitivity,
                                               double eps_kl, SeededRng& rng) {
  if (!(sensitivity > 0.0)) throw std::invalid_argument("sensitivity must be positive");
  if (!(eps_kl > 0.0)) throw std::invalid_argument("eps_kl must be positive");
  const double noise_sd = sensitivity / std::sqrt(2.0 * eps_kl);
  PrivateRelease release;
  release.values = {x + noise_sd * rng.next_gaussian()};
  release.magnitude_bound = kInfinity;
  release.unbias_factor = 1.0;
  return release;
}

inline double gaussian_noise_variance(double sensitivity, double eps_kl) {
  return sensitivity * sensitivity / (2.0 * eps_kl);
}

// ---- Induced finite channels, for privacy audits. ----

// Two-point channel of the sign-flip release: inputs {+1, -1}, outputs
// {+scale, -scale}.
inline channels::DiscreteChannel rr_induced_channel(double eps) {
  const double keep = std::exp(eps) / (std::exp(eps) + 1.0);
  return channels::DiscreteChannel::FromRows({{keep, 1.0 - keep}, {1.0 - keep, keep}});
}

// Channel of the hypercube release over sign inputs v and outputs w, both
// indexed by d-bit masks (bit set = +1).
inline channels::DiscreteChannel linf_induced_channel(double eps, int d) {
  if (d < 1 || d > 16) throw std::invalid_argument("d outside [1, 16]");
  const int size = 1 << d;
  const double p_plus = std::exp(eps) / (1.0 + std::exp(eps));
  const double cell = std::exp(-(d - 1) * kLn2);  // 1 / 2^{d-1}
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 0.0));
  for (int vm = 0; vm < size; ++vm) {
    for (int wm = 0; wm < size; ++wm) {
      int dot = 0;
      for (int j = 0; j < d; ++j) {
        const int vj = (vm >> j) & 1 ? 1 : -1;
        const int wj = (wm >> j) & 1 ? 1 : -1;
        dot += vj * wj;
      }
      double mass;
      if (dot > 0) {
        mass = p_plus * cell;
      } else if (dot < 0) {
        mass = (1.0 - p_plus) * cell;
      } else {
        mass = 0.5 * cell;
      }
      rows[vm][wm] = mass;
    }
  }
  return channels::DiscreteChannel::FromRows(rows);
}

// Channel of the coordinate-subsample release conditional on a released
// coordinate set of size s: the product of s unit-budget sign flips.
inline channels::DiscreteChannel subsample_conditional_channel(double eps0, int s) {
  if (s < 1 || s > 16) throw std::invalid_argument("s outside [1, 16]");
  const double keep = std::exp(eps0) / (std::exp(eps0) + 1.0);
  const int size = 1 << s;
  std::vector<std::vector<double>> rows(size, std::vector<double>(size, 1.0));
  for (int xm = 0; xm < size; ++xm)
    for (int zm = 0; zm < size; ++zm)
      for (int j = 0; j < s; ++j)
        rows[xm][zm] *= (((xm >> j) & 1) == ((zm >> j) & 1)) ? keep : 1.0 - keep;
  return channels::DiscreteChannel::FromRows(rows);
}

}  // namespace ldplab::mechanisms

#endif  // LDPLAB_MECHANISMS_HPP_
