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
#ifndef LDPLAB_ESTIMATORS_HPP_
#define LDPLAB_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ldplab/math.hpp"
#include "ldplab/mechanisms.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::estimators {

enum class Family { kBernoulli, kGaussian, kSparseGaussian, kCorrelated, kLogistic };

inline std::string family_name(Family family) {
  switch (family) {
    case Family::kBernoulli: return "bernoulli";
    case Family::kGaussian: return "gaussian";
    case Family::kSparseGaussian: return "sparse_gaussian";
    case Family::kCorrelated: return "correlated";
    case Family::kLogistic: return "logistic";
  }
  throw std::invalid_argument("unknown family");
}

inline Family family_from_name(const std::string& name) {
  if (name == "bernoulli") return Family::kBernoulli;
  if (name == "gaussian") return Family::kGaussian;
  if (name == "sparse_gaussian") return Family::kSparseGaussian;
  if (name == "correlated") return Family::kCorrelated;
  if (name == "logistic") return Family::kLogistic;
  throw std::invalid_argument("unknown family: " + name);
}

struct ProblemSpec {
  Family family = Family::kBernoulli;
  int d = 1;
  long n = 1;
  std::vector<double> theta;
  double sigma = 1.0;
  int k = 1;
  std::vector<int> b_vector;

  void validate() const {
    if (d < 1 || n < 1) throw std::invalid_argument("d and n must be positive");
    if (static_cast<int>(theta.size()) != d)
      throw std::invalid_argument("theta must have length d");
    switch (family) {
      case Family::kBernoulli:
        for (double t : theta)
          if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("bernoulli theta entries must be in [0, 1]");
        break;
      case Family::kGaussian:
      case Family::kSparseGaussian:
        if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
        for (double t : theta)
          if (!(t >= -1.0 && t <= 1.0))
            throw std::invalid_argument("gaussian theta entries must be in [-1, 1]");
        if (family == Family::kSparseGaussian && (k < 1 || k > d))
          throw std::invalid_argument("sparsity k must be in [1, d]");
        break;
      case Family::kCorrelated:
        if (static_cast<int>(b_vector.size()) != d)
          throw std::invalid_argument("b_vector must have length d");
        for (int b : b_vector)
          if (b != 1 && b != -1)
            throw std::invalid_argument("b_vector entries must be +1 or -1");
        break;
      case Family::kLogistic:
        break;
    }
  }
};

// Inverts E[Z] = 1 - 2 Phi(-theta/sigma) for a debiased sign-release average
// and projects onto [-1, 1]. Averages outside (-1, 1) clip to the boundary.
inline double gaussian_location_estimator(double z_bar, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (z_bar >= 1.0) return 1.0;
  if (z_bar <= -1.0) return -1.0;
  const double theta = -sigma * norm_quantile((1.0 - z_bar) / 2.0);
  return clamp(theta, -1.0, 1.0);
}

// Inverse-propensity-weighted per-coordinate average of releases. Missing
// coordinates carry NaN; a coordinate observed in no release reports 0 and
// raises the warning flag.
inline std::vector<double> debiased_average(
    const std::vector<mechanisms::PrivateRelease>& releases, int d,
    std::vector<bool>* never_sampled = nullptr) {
  if (releases.empty()) throw std::invalid_argument("empty release list");
  std::vector<double> sums(d, 0.0);
  std::vector<long> seen(d, 0);
  const long n = static_cast<long>(releases.size());
  for (const auto& release : releases) {
    if (static_cast<int>(release.values.size()) != d)
      throw std::invalid_argument("release dimension mismatch");
    if (release.sampled_coords) {
      const double propensity =
          static_cast<double>(release.sampled_coords->size()) / d;
      for (int j : *release.sampled_coords) {
        sums[j] += release.values[j] / propensity;
        ++seen[j];
      }
    } else {
      for (int j = 0; j < d; ++j) {
        sums[j] += release.values[j];
        ++seen[j];
      }
    }
  }
  if (never_sampled) never_sampled->assign(d, false);
  std::vector<double> avg(d, 0.0);
  for (int j = 0; j < d; ++j) {
    if (seen[j] == 0) {
      if (never_sampled) (*never_sampled)[j] = true;
      continue;
    }
    avg[j] = sums[j] / static_cast<double>(n);
  }
  return avg;
}

// Per-coordinate location estimates from sign releases of Gaussian draws.
inline std::vector<double> gaussian_vector_estimator(
    const std::vector<mechanisms::PrivateRelease>& releases, const ProblemSpec& spec,
    std::vector<bool>* never_sampled = nullptr) {
  spec.validate();
  std::vector<bool> missing;
  std::vector<double> z_bar = debiased_average(releases, spec.d, &missing);
  std::vector<double> estimate(spec.d, 0.0);
  for (int j = 0; j < spec.d; ++j) {
    if (missing[j]) continue;  // estimate stays 0, flagged below
    estimate[j] = gaussian_location_estimator(clamp(z_bar[j], -1.0, 1.0), spec.sigma);
  }
  if (never_sampled) *never_sampled = std::move(missing);
  return estimate;
}

// Mean of a Bernoulli vector from releases unbiased for 2 theta - 1.
inline std::vector<double> bernoulli_mean_estimator(
    const std::vector<mechanisms::PrivateRelease>& releases, int d) {
  std::vector<double> z_bar = debiased_average(releases, d);
  std::vector<double> estimate(d);
  for (int j = 0; j < d; ++j) estimate[j] = clamp01((1.0 + z_bar[j]) / 2.0);
  return estimate;
}

// theta_hat = b * Z_bar for correlated data with a known sign vector.
inline std::vector<double> correlated_estimator(
    const std::vector<mechanisms::PrivateRelease>& releases,
    const std::vector<int>& b_vector) {
  if (releases.empty()) throw std::invalid_argument("empty release list");
  double z_bar = 0.0;
  for (const auto& release : releases) {
    if (release.values.size() != 1)
      throw std::invalid_argument("correlated releases are scalar");
    z_bar += release.values[0];
  }
  z_bar /= static_cast<double>(releases.size());
  std::vector<double> estimate(b_vector.size());
  for (size_t j = 0; j < b_vector.size(); ++j) estimate[j] = b_vector[j] * z_bar;
  return estimate;
}

// Two-stage support recovery and re-estimation for a 1-sparse Gaussian mean.
// `sample(i, j)` returns coordinate j of draw i, for i in [0, 2n). The first
// n draws split into d contiguous bins; bin j screens coordinate j at the
// full budget (bins hold disjoint individuals). The second half re-estimates
// the selected coordinate. Leftover draws from an indivisible split are
// discarded; argmax ties break to the lowest index.
template <typename SampleFn>
std::vector<double> sparse_two_stage_estimator(SampleFn&& sample, long two_n,
                                               double eps, const ProblemSpec& spec,
                                               SeededRng& rng) {
  spec.validate();
  if (spec.family != Family::kSparseGaussian || spec.k != 1)
    throw std::invalid_argument("two-stage estimator requires the 1-sparse family");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (two_n < 2) throw std::invalid_argument("need at least two draws");
  const long n = two_n / 2;
  const long bin = n / spec.d;
  if (bin < 1) throw std::invalid_argument("fewer first-stage draws than bins");

  int best = 0;
  double best_mag = -1.0;
  for (int j = 0; j < spec.d; ++j) {
    double z_sum = 0.0;
    for (long i = static_cast<long>(j) * bin; i < (j + 1) * bin; ++i)
      z_sum += mechanisms::rr_sign_draw(sign_of(sample(i, j)), eps, rng);
    const double pre = gaussian_location_estimator(
        clamp(z_sum / static_cast<double>(bin), -1.0, 1.0), spec.sigma);
    if (std::abs(pre) > best_mag) {
      best_mag = std::abs(pre);
      best = j;
    }
  }

  double z_sum = 0.0;
  for (long i = n; i < 2 * n; ++i)
    z_sum += mechanisms::rr_sign_draw(sign_of(sample(i, best)), eps, rng);
  std::vector<double> estimate(spec.d, 0.0);
  estimate[best] = gaussian_location_estimator(
      clamp(z_sum / static_cast<double>(n), -1.0, 1.0), spec.sigma);
  return estimate;
}

// ---- Logistic data model ----

struct LogisticSample {
  std::vector<int> x;  // in {-1, +1}^d
  int y = 1;           // in {-1, +1}
};

// Class-conditional generator: Y uniform on {-1,+1}; independently per
// coordinate, X_j = Y with probability e^{theta_j}/(1 + e^{theta_j}) (so
// Y X_j is a Bernoulli sign with that success rate), which makes Y | X
// logistic with parameter theta.
inline std::vector<LogisticSample> logistic_data_generator(
    const std::vector<double>& theta, long n, SeededRng& rng) {
  const int d = static_cast<int>(theta.size());
  if (d < 1) throw std::invalid_argument("empty theta");
  std::vector<double> agree(d);
  for (int j = 0; j < d; ++j) agree[j] = 1.0 / (1.0 + std::exp(-theta[j]));
  std::vector<LogisticSample> out(n);
  for (long i = 0; i < n; ++i) {
    out[i].y = rng.next_sign();
    out[i].x.resize(d);
    for (int j = 0; j < d; ++j)
      out[i].x[j] = rng.next_bernoulli(agree[j]) ? out[i].y : -out[i].y;
  }
  return out;
}

// Population logistic risk E[log(1 + exp(-Y <X, theta>))] under the model
// with true parameter theta_star, by exact enumeration of all 2^{d+1}
// outcomes.
inline double logistic_risk(const std::vector<double>& theta,
                            const std::vector<double>& theta_star) {
  const int d = static_cast<int>(theta_star.size());
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("theta dimension mismatch");
  if (d > 16) throw std::invalid_argument("exact risk limited to d <= 16");
  std::vector<double> agree(d);
  for (int j = 0; j < d; ++j) agree[j] = 1.0 / (1.0 + std::exp(-theta_star[j]));
  double risk = 0.0;
  for (int y_idx = 0; y_idx < 2; ++y_idx) {
    const int y = y_idx ? 1 : -1;
    for (int mask = 0; mask < (1 << d); ++mask) {
      double prob = 0.5;
      double margin = 0.0;
      for (int j = 0; j < d; ++j) {
        const int xj = (mask >> j) & 1 ? 1 : -1;
        prob *= (xj == y) ? agree[j] : 1.0 - agree[j];
        margin += theta[j] * xj;
      }
      risk += prob * std::log1p(std::exp(-y * margin));
    }
  }
  return risk;
}

// Excess logistic risk of theta_hat against the population minimizer
// theta_star; exact and nonnegative.
inline double logistic_excess_risk(const std::vector<double>& theta_hat,
                                   const std::vector<double>& theta_star, int d) {
  if (static_cast<int>(theta_star.size()) != d)
    throw std::invalid_argument("theta_star must have length d");
  if (d > 16) throw std::invalid_argument("exact risk limited to d <= 16");
  const double excess = logistic_risk(theta_hat, theta_star) -
                        logistic_risk(theta_star, theta_star);
  return std::max(excess, 0.0);
}

}  // namespace ldplab::estimators

#endif  // LDPLAB_ESTIMATORS_HPP_
