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
#ifndef LDPLAB_BOUNDS_HPP_
#define LDPLAB_BOUNDS_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldplab/math.hpp"

namespace ldplab::bounds {

// Upper bound beta on a strong data processing constant together with the
// log-likelihood-ratio bound b of the testing pair that produced it.
struct SdpiEstimate {
  double beta = 0.0;       // clamped to [0, 1]
  double llr_bound = 0.0;  // b with |log dP_1/dP_-1| <= b

  // Range checks only. The factory functions below additionally guarantee
  // that beta and llr_bound vanish together, as any real testing pair must;
  // hand-built estimates may evaluate the formulas at free (beta, b) points.
  void validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta outside [0, 1]");
    if (!(llr_bound >= 0.0)) throw std::invalid_argument("negative likelihood-ratio bound");
  }
};

struct SeparationSpec {
  double delta_sep = 0.0;  // Hamming separation constant
  int dimension = 1;

  void validate() const {
    if (!(delta_sep > 0.0)) throw std::invalid_argument("separation must be positive");
    if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  }
};

// Evaluated minimax lower bound with its ingredients. `scaling_bound` is the
// constant-free form (all unspecified absolute constants set to 1);
// `risk_bound` additionally carries a numerically instantiated value when the
// derivation pins the structure, and equals the scaling form otherwise.
struct LowerBoundReport {
  std::string setting;
  std::string formula_id;
  long n = 0;
  int d = 0;
  double epsilon_kl = 0.0;
  double delta_sep = 0.0;
  double beta = 0.0;
  double llr_bound = 0.0;
  double info_budget = 0.0;
  double sigma2 = 0.0;
  int k = 0;
  double testing_bound = 0.0;
  double scaling_bound = 0.0;
  double risk_bound = 0.0;
};

inline void to_json(nlohmann::json& j, const LowerBoundReport& r) {
  j = nlohmann::json{{"setting", r.setting},
                     {"formula_id", r.formula_id},
                     {"n", r.n},
                     {"d", r.d},
                     {"epsilon_kl", r.epsilon_kl},
                     {"delta_sep", r.delta_sep},
                     {"beta", r.beta},
                     {"llr_bound", r.llr_bound},
                     {"info_budget", r.info_budget},
                     {"sigma2", r.sigma2},
                     {"k", r.k},
                     {"testing_bound", r.testing_bound},
                     {"scaling_bound", r.scaling_bound},
                     {"risk_bound", r.risk_bound}};
}

// Contraction constant from a bounded log-likelihood ratio:
// beta <= 2 (e^b - 1)^2, clamped to 1.
inline SdpiEstimate sdpi_bounded_likelihood(double llr_bound) {
  if (!(llr_bound >= 0.0)) throw std::invalid_argument("negative likelihood-ratio bound");
  const double raw = 2.0 * std::pow(std::expm1(llr_bound), 2);
  return {std::min(raw, 1.0), llr_bound};
}

// Contraction pair for Ber(1/2) against Ber((1+delta)/2):
// beta <= 2 delta^2 / (1 - delta)^2 with b = -log(1 - delta).
inline SdpiEstimate sdpi_bernoulli_pair(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta outside [0, 1)");
  const double raw = 2.0 * delta * delta / ((1.0 - delta) * (1.0 - delta));
  return {std::min(raw, 1.0), -std::log1p(-delta)};
}

// Assouad testing lower bound
//   sum_j P(Vhat_j != V_j) >= (d/2)(1 - sqrt(7 (e^b + 1) beta info / d) - slack),
// clamped below at 0. `slack` carries the additive total-delta term of the
// compositional variant; pass 0 for the fully interactive one.
inline double assouad_testing_bound(int d, const SdpiEstimate& sdpi,
                                    double info_budget, double slack = 0.0) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  sdpi.validate();
  if (!(info_budget >= 0.0)) throw std::invalid_argument("negative information budget");
  if (!(slack >= 0.0 && slack <= 1.0)) throw std::invalid_argument("slack outside [0, 1]");
  const double radicand =
      7.0 * (std::exp(sdpi.llr_bound) + 1.0) * sdpi.beta * info_budget / d;
  const double value = 0.5 * d * (1.0 - std::sqrt(radicand) - slack);
  return std::max(value, 0.0);
}

// Information ceiling of any fully interactive protocol that is
// eps_kl-KL-private on average: n * eps_kl.
inline double info_budget_full_interactive(long n, double eps_kl) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(eps_kl >= 0.0)) throw std::invalid_argument("negative eps_kl");
  return static_cast<double>(n) * eps_kl;
}

// Information ceiling under approximate privacy with admissible parameters:
// n * min{9 eps, 75 eps^2}.
inline double info_budget_approx_dp(long n, double eps) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return static_cast<double>(n) * std::min(9.0 * eps, 75.0 * eps * eps);
}

// Both per-sample information displays for an (eps, delta)-private release
// of a finite-alphabet datum, evaluated at smoothing level eta. A display
// whose precondition fails is flagged unavailable.
struct EtaInfoBound {
  double p_eta = 0.0;
  double first = kNan;    // 6 eps + p_eta log|X| + h2(p_eta), needs p_eta <= 1
  double second = kNan;   // refined eps^2-regime display, needs small eta
  bool first_available = false;
  bool second_available = false;
};

inline EtaInfoBound info_bound_eta(double eps, double delta, double eta,
                                   int alphabet_size) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("negative delta");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be >= 2");
  EtaInfoBound out;
  const double e1 = std::exp(eps), e3 = std::exp(3.0 * eps);
  out.p_eta = 2.0 * (delta / eta + eta * e3 / (e3 - 1.0) + delta * e1 / (e1 - 1.0));
  const double log_alpha = std::log(static_cast<double>(alphabet_size));
  if (out.p_eta <= 1.0) {
    out.first_available = true;
    out.first = 6.0 * eps + out.p_eta * log_alpha + binary_entropy(out.p_eta);
  }
  if (eta * (2.0 * std::exp(6.0 * eps) / (e3 - 1.0) + 1.0) <= 0.5 && out.p_eta <= 1.0) {
    out.second_available = true;
    const double e12 = std::exp(12.0 * eps);
    out.second = 6.0 * eps * std::expm1(6.0 * eps) +
                 3.0 * eta * (e3 + 3.0 * eta * e12 / ((e3 - 1.0) * (e3 - 1.0))) +
                 out.p_eta * log_alpha + binary_entropy(out.p_eta);
  }
  return out;
}

// Assouad's method: minimax risk >= separation * summed testing error.
inline double assouad_minimax_bound(const SeparationSpec& sep, double testing_bound) {
  sep.validate();
  if (!(testing_bound >= 0.0 && testing_bound <= sep.dimension))
    throw std::invalid_argument("testing bound outside [0, d]");
  return sep.delta_sep * testing_bound;
}

enum class Loss { kSquared, kAbsolute };

inline double loss_at(Loss loss, double t) {
  return loss == Loss::kSquared ? t * t : std::abs(t);
}

// Product-form minimax lower bound for Bernoulli means. The constant-free
// scaling is d * loss(sqrt(d/(n eps_kl)) ^ 1). The instantiated value runs
// the hypercube-packing product: maximize
//   loss(delta/2) * (d/2)(1 - sqrt(7 (e^b + 1) beta n eps_kl / d))
// over the packing width delta, with (beta, b) from sdpi_bernoulli_pair
// (sign flips of width delta separate coordinate means by delta/2).
inline LowerBoundReport corollary_bernoulli_bound(long n, int d, double eps_kl,
                                                  Loss loss) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  if (!(eps_kl > 0.0)) throw std::invalid_argument("eps_kl must be positive");
  LowerBoundReport report;
  report.setting = "bernoulli";
  report.formula_id = "bernoulli_minimax";
  report.n = n;
  report.d = d;
  report.epsilon_kl = eps_kl;
  report.info_budget = info_budget_full_interactive(n, eps_kl);
  report.scaling_bound =
      d * loss_at(loss, std::min(std::sqrt(d / (n * eps_kl)), 1.0));

  double best = 0.0, best_delta = 0.0, best_testing = 0.0;
  SdpiEstimate best_sdpi;
  const int grid = 4000;
  for (int g = 1; g < grid; ++g) {
    const double delta = static_cast<double>(g) / grid;
    const SdpiEstimate sdpi = sdpi_bernoulli_pair(delta);
    const double testing = assouad_testing_bound(d, sdpi, report.info_budget);
    const double value = loss_at(loss, delta / 2.0) * testing;
    if (value > best) {
      best = value;
      best_delta = delta;
      best_testing = testing;
      best_sdpi = sdpi;
    }
  }
  report.delta_sep = loss_at(loss, best_delta / 2.0);
  report.beta = best_sdpi.beta;
  report.llr_bound = best_sdpi.llr_bound;
  report.testing_bound = best_testing;
  report.risk_bound = best;
  return report;
}

// Gaussian location, squared l2 loss:
// min{d, max{(d/eps_kl)(d sigma^2/n), d sigma^2/n}} (constant-free).
inline LowerBoundReport corollary_gaussian_bound(long n, int d, double sigma2,
                                                 double eps_kl) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  if (!(sigma2 > 0.0) || !(eps_kl > 0.0))
    throw std::invalid_argument("sigma2 and eps_kl must be positive");
  LowerBoundReport report;
  report.setting = "gaussian";
  report.formula_id = "gaussian_minimax";
  report.n = n;
  report.d = d;
  report.sigma2 = sigma2;
  report.epsilon_kl = eps_kl;
  report.info_budget = info_budget_full_interactive(n, eps_kl);
  const double base = d * sigma2 / static_cast<double>(n);
  report.scaling_bound = std::min(static_cast<double>(d),
                                  std::max(d / eps_kl * base, base));
  report.risk_bound = report.scaling_bound;
  return report;
}

// k-sparse Gaussian location, squared l2 loss; requires d >= 2k:
// min{k, max{(d/eps_kl)(k sigma^2/n), k sigma^2 log(d/k)/n}}.
inline LowerBoundReport corollary_sparse_gaussian_bound(long n, int d, int k,
                                                        double sigma2,
                                                        double eps_kl) {
  if (n < 1 || d < 1 || k < 1) throw std::invalid_argument("n, d, k must be positive");
  if (d < 2 * k) throw std::invalid_argument("requires d >= 2k");
  if (!(sigma2 > 0.0) || !(eps_kl > 0.0))
    throw std::invalid_argument("sigma2 and eps_kl must be positive");
  LowerBoundReport report;
  report.setting = "sparse_gaussian";
  report.formula_id = "sparse_gaussian_minimax";
  report.n = n;
  report.d = d;
  report.k = k;
  report.sigma2 = sigma2;
  report.epsilon_kl = eps_kl;
  report.info_budget = info_budget_full_interactive(n, eps_kl);
  const double base = k * sigma2 / static_cast<double>(n);
  report.scaling_bound =
      std::min(static_cast<double>(k),
               std::max(d / eps_kl * base,
                        base * std::log(static_cast<double>(d) / k)));
  report.risk_bound = report.scaling_bound;
  return report;
}

// Excess logistic risk, large-n regime: (d/n)(d/eps_kl) (constant-free).
inline LowerBoundReport corollary_logistic_bound(long n, int d, double eps_kl) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  if (!(eps_kl > 0.0)) throw std::invalid_argument("eps_kl must be positive");
  LowerBoundReport report;
  report.setting = "logistic";
  report.formula_id = "logistic_minimax";
  report.n = n;
  report.d = d;
  report.epsilon_kl = eps_kl;
  report.info_budget = info_budget_full_interactive(n, eps_kl);
  report.scaling_bound = static_cast<double>(d) * d / (n * eps_kl);
  report.risk_bound = report.scaling_bound;
  return report;
}

// Multi-sample contraction of the squared Hellinger distance between the
// release marginals of the two latent values:
// H^2(M_-1, M_1) <= (7/2)(e^b + 1) beta * info, clamped to the definitional
// ceiling 1.
inline double braverman_hellinger_bound(const SdpiEstimate& sdpi, double info) {
  sdpi.validate();
  if (!(info >= 0.0)) throw std::invalid_argument("negative information");
  const double raw = 3.5 * (std::exp(sdpi.llr_bound) + 1.0) * sdpi.beta * info;
  return std::min(raw, 1.0);
}

}  // namespace ldplab::bounds

#endif  // LDPLAB_BOUNDS_HPP_
