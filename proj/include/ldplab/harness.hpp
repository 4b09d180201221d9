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
#ifndef LDPLAB_HARNESS_HPP_
#define LDPLAB_HARNESS_HPP_

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ldplab/accounting.hpp"
#include "ldplab/bounds.hpp"
#include "ldplab/channels.hpp"
#include "ldplab/estimators.hpp"
#include "ldplab/mechanisms.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::harness {

// Deterministic parallel map: item i writes only slot i, workers take a
// static stride, results are identical for any worker count.
template <typename Fn>
void parallel_for(long items, int workers, Fn&& fn) {
  if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers == 1 || items <= 1) {
    for (long i = 0; i < items; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&fn, items, workers, w] {
      for (long i = w; i < items; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct GridSpec {
  std::vector<long> n;
  std::vector<int> d;
  std::vector<double> epsilon;
};

struct ExperimentConfig {
  estimators::Family family = estimators::Family::kBernoulli;
  long n = 1000;
  int d = 1;
  std::optional<std::vector<double>> theta;  // explicit, length d
  std::optional<double> theta_fill;
  std::optional<std::pair<int, double>> theta_one_hot;
  double sigma = 1.0;
  int k = 1;
  double p = 0.75;  // correlated-family success probability
  std::string b_pattern = "alternating";

  std::string mechanism = "subsample_or_linf";
  std::string estimator = "bernoulli_mean";
  channels::PrivacySpec privacy;
  bounds::Loss loss = bounds::Loss::kSquared;
  int replications = 1;
  uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  GridSpec grid;
};

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig config;
  const auto& problem = j.at("problem");
  config.family = estimators::family_from_name(problem.at("family").get<std::string>());
  config.n = problem.value("n", 1000L);
  config.d = problem.value("d", 1);
  if (problem.contains("theta"))
    config.theta = problem.at("theta").get<std::vector<double>>();
  if (problem.contains("theta_fill"))
    config.theta_fill = problem.at("theta_fill").get<double>();
  if (problem.contains("theta_one_hot")) {
    const auto& oh = problem.at("theta_one_hot");
    config.theta_one_hot = {oh.at("index").get<int>(), oh.at("value").get<double>()};
  }
  config.sigma = problem.value("sigma", 1.0);
  config.k = problem.value("k", 1);
  config.p = problem.value("p", 0.75);
  config.b_pattern = problem.value("b_pattern", std::string("alternating"));

  const auto& mech = j.at("mechanism");
  config.mechanism = mech.at("name").get<std::string>();
  if (j.contains("privacy")) {
    config.privacy.epsilon = j.at("privacy").value("epsilon", 1.0);
    config.privacy.delta = j.at("privacy").value("delta", 0.0);
  }
  if (mech.contains("epsilon")) config.privacy.epsilon = mech.at("epsilon").get<double>();
  config.privacy.validate();
  config.estimator = j.at("estimator").get<std::string>();
  const std::string loss = j.value("loss", std::string("squared"));
  if (loss == "squared") {
    config.loss = bounds::Loss::kSquared;
  } else if (loss == "absolute") {
    config.loss = bounds::Loss::kAbsolute;
  } else {
    throw std::invalid_argument("unknown loss: " + loss);
  }
  config.replications = j.value("replications", 1);
  if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");
  config.seed = j.value("seed", 0ULL);
  config.workers = j.value("workers", 0);
  if (j.contains("grid")) {
    const auto& grid = j.at("grid");
    if (grid.contains("n")) config.grid.n = grid.at("n").get<std::vector<long>>();
    if (grid.contains("d")) config.grid.d = grid.at("d").get<std::vector<int>>();
    if (grid.contains("epsilon"))
      config.grid.epsilon = grid.at("epsilon").get<std::vector<double>>();
    for (long n : config.grid.n)
      if (n < 1) throw std::invalid_argument("grid n entries must be positive");
    for (int d : config.grid.d)
      if (d < 1) throw std::invalid_argument("grid d entries must be positive");
    for (double e : config.grid.epsilon)
      if (!(e > 0.0)) throw std::invalid_argument("grid epsilon entries must be positive");
  }
  return config;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

struct RiskRow {
  std::string family;
  long n = 0;
  int d = 0;
  double epsilon = 0.0;
  double epsilon_kl = 0.0;
  std::string mechanism;
  std::string estimator;
  double mean_loss = 0.0;
  double std_error = 0.0;
  double lower_bound_scaling = 0.0;
  double lower_bound_instantiated = 0.0;
  uint64_t seed = 0;
  std::vector<double> per_coordinate_loss;
  long failures = 0;
};

namespace internal {

inline std::vector<double> resolve_theta(const ExperimentConfig& config, int d) {
  if (config.theta) {
    if (static_cast<int>(config.theta->size()) != d)
      throw std::invalid_argument("explicit theta incompatible with grid dimension");
    return *config.theta;
  }
  std::vector<double> theta(d, 0.0);
  if (config.theta_one_hot) {
    if (config.theta_one_hot->first < 0 || config.theta_one_hot->first >= d)
      throw std::invalid_argument("theta_one_hot index out of range");
    theta[config.theta_one_hot->first] = config.theta_one_hot->second;
    return theta;
  }
  const double fill = config.theta_fill.value_or(
      config.family == estimators::Family::kBernoulli ? 0.5 : 0.0);
  std::fill(theta.begin(), theta.end(), fill);
  return theta;
}

inline std::vector<int> resolve_b_vector(const ExperimentConfig& config, int d) {
  std::vector<int> b(d, 1);
  if (config.b_pattern == "alternating") {
    for (int j = 0; j < d; ++j) b[j] = (j % 2 == 0) ? 1 : -1;
  } else if (config.b_pattern == "ones") {
    // all +1
  } else {
    throw std::invalid_argument("unknown b_pattern: " + config.b_pattern);
  }
  return b;
}

// Picks the release scheme per the two budget regimes: coordinate
// subsampling needs at least unit budget, the hypercube release covers the
// rest.
inline std::string resolve_mechanism(const std::string& name, double eps) {
  if (name != "subsample_or_linf") return name;
  return eps >= 1.0 ? "coordinate_subsample" : "linf";
}

struct RepOutcome {
  double loss = 0.0;
  std::vector<double> per_coordinate;
  long failures = 0;
};

// One replication of a sign-release mean pipeline (bernoulli or gaussian
// family). Per-coordinate averages are inverse-propensity weighted over the
// released coordinate sets.
inline RepOutcome run_mean_pipeline(const ExperimentConfig& config,
                                    const std::string& mechanism, long n, int d,
                                    double eps, const std::vector<double>& theta,
                                    SeededRng rng) {
  RepOutcome outcome;
  std::vector<double> sums(d, 0.0);
  std::vector<long> seen(d, 0);
  const bool gaussian = config.family == estimators::Family::kGaussian;

  if (mechanism == "coordinate_subsample") {
    const int s = std::min(static_cast<int>(std::floor(eps)), d);
    const double eps0 = mechanisms::subsample_unit_budget(eps, d);
    const double weight = static_cast<double>(d) / s;
    for (long i = 0; i < n; ++i) {
      const auto coords = rng.sample_without_replacement(d, s);
      for (int j : coords) {
        double sign;
        if (gaussian) {
          sign = sign_of(theta[j] + config.sigma * rng.next_gaussian());
        } else {
          sign = rng.next_bernoulli(theta[j]) ? 1.0 : -1.0;
        }
        sums[j] += weight * mechanisms::rr_sign_draw(sign, eps0, rng);
        ++seen[j];
      }
    }
  } else if (mechanism == "linf") {
    const double m = mechanisms::linf_debias_factor(d, eps);
    std::vector<int> v(d), w(d);
    for (long i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        if (gaussian) {
          v[j] = theta[j] + config.sigma * rng.next_gaussian() < 0.0 ? -1 : 1;
        } else {
          v[j] = rng.next_bernoulli(theta[j]) ? 1 : -1;
        }
      }
      mechanisms::internal::linf_draw_signs(v, eps, rng, w);
      for (int j = 0; j < d; ++j) {
        sums[j] += w[j] / m;
        ++seen[j];
      }
    }
  } else if (mechanism == "rr_sign") {
    if (d != 1) throw std::invalid_argument("rr_sign pipeline is one-dimensional");
    for (long i = 0; i < n; ++i) {
      double sign;
      if (gaussian) {
        sign = sign_of(theta[0] + config.sigma * rng.next_gaussian());
      } else {
        sign = rng.next_bernoulli(theta[0]) ? 1.0 : -1.0;
      }
      sums[0] += mechanisms::rr_sign_draw(sign, eps, rng);
      ++seen[0];
    }
  } else {
    throw std::invalid_argument("mechanism incompatible with mean pipeline: " + mechanism);
  }

  outcome.per_coordinate.resize(d);
  for (int j = 0; j < d; ++j) {
    double estimate;
    if (seen[j] == 0) {
      ++outcome.failures;
      estimate = gaussian ? 0.0 : 0.5;
    } else {
      const double z_bar = sums[j] / static_cast<double>(n);
      if (gaussian) {
        estimate = estimators::gaussian_location_estimator(clamp(z_bar, -1.0, 1.0),
                                                           config.sigma);
      } else {
        estimate = clamp01((1.0 + z_bar) / 2.0);
      }
    }
    outcome.per_coordinate[j] = bounds::loss_at(config.loss, estimate - theta[j]);
    outcome.loss += outcome.per_coordinate[j];
  }
  return outcome;
}

inline RepOutcome run_correlated_pipeline(const ExperimentConfig& config, long n,
                                          int d, double eps, SeededRng rng) {
  RepOutcome outcome;
  const auto b = resolve_b_vector(config, d);
  double z_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double sign = rng.next_bernoulli(config.p) ? 1.0 : -1.0;
    z_sum += mechanisms::rr_sign_draw(sign, eps, rng);
  }
  const double z_bar = z_sum / static_cast<double>(n);
  const double target = 2.0 * config.p - 1.0;
  outcome.per_coordinate.resize(d);
  for (int j = 0; j < d; ++j) {
    outcome.per_coordinate[j] =
        bounds::loss_at(config.loss, b[j] * z_bar - b[j] * target);
    outcome.loss += outcome.per_coordinate[j];
  }
  return outcome;
}

inline RepOutcome run_sparse_pipeline(const ExperimentConfig& config, long n, int d,
                                      double eps, const std::vector<double>& theta,
                                      SeededRng rng) {
  RepOutcome outcome;
  estimators::ProblemSpec spec;
  spec.family = estimators::Family::kSparseGaussian;
  spec.d = d;
  spec.n = n;
  spec.theta = theta;
  spec.sigma = config.sigma;
  spec.k = 1;
  SeededRng data_rng = rng.substream(0);
  SeededRng mech_rng = rng.substream(1);
  auto sample = [&](long i, int j) {
    SeededRng cell = data_rng.substream(static_cast<uint64_t>(i) * d + j);
    return theta[j] + config.sigma * cell.next_gaussian();
  };
  const auto estimate =
      estimators::sparse_two_stage_estimator(sample, 2 * n, eps, spec, mech_rng);
  outcome.per_coordinate.resize(d);
  for (int j = 0; j < d; ++j) {
    outcome.per_coordinate[j] = bounds::loss_at(config.loss, estimate[j] - theta[j]);
    outcome.loss += outcome.per_coordinate[j];
  }
  return outcome;
}

inline void check_compatibility(const ExperimentConfig& config) {
  using estimators::Family;
  const auto& est = config.estimator;
  switch (config.family) {
    case Family::kBernoulli:
      if (est != "bernoulli_mean")
        throw std::invalid_argument("bernoulli family requires the bernoulli_mean estimator");
      break;
    case Family::kGaussian:
      if (est != "gaussian_vector")
        throw std::invalid_argument("gaussian family requires the gaussian_vector estimator");
      break;
    case Family::kSparseGaussian:
      if (est != "sparse_two_stage" || config.mechanism != "rr_sign")
        throw std::invalid_argument(
            "sparse_gaussian family requires rr_sign with sparse_two_stage");
      if (config.k != 1) throw std::invalid_argument("sparse pipeline supports k = 1 only");
      break;
    case Family::kCorrelated:
      if (est != "correlated" || config.mechanism != "correlated_bit")
        throw std::invalid_argument(
            "correlated family requires correlated_bit with the correlated estimator");
      break;
    case Family::kLogistic:
      throw std::invalid_argument("no private training pipeline for the logistic family");
  }
}

inline void fill_lower_bounds(RiskRow& row, const ExperimentConfig& config,
                              long n, int d, double eps) {
  // Pure-DP releases enter the budget through the KL conversion; the
  // approximate-DP route only applies when delta > 0, which no shipped
  // mechanism uses.
  row.epsilon_kl = accounting::dp_to_kl_average({eps});
  switch (config.family) {
    case estimators::Family::kBernoulli: {
      const auto report =
          bounds::corollary_bernoulli_bound(n, d, row.epsilon_kl, config.loss);
      row.lower_bound_scaling = report.scaling_bound;
      row.lower_bound_instantiated = report.risk_bound;
      break;
    }
    case estimators::Family::kGaussian: {
      const auto report = bounds::corollary_gaussian_bound(
          n, d, config.sigma * config.sigma, row.epsilon_kl);
      row.lower_bound_scaling = report.scaling_bound;
      row.lower_bound_instantiated = report.risk_bound;
      break;
    }
    case estimators::Family::kSparseGaussian: {
      const auto report = bounds::corollary_sparse_gaussian_bound(
          n, d, config.k, config.sigma * config.sigma, row.epsilon_kl);
      row.lower_bound_scaling = report.scaling_bound;
      row.lower_bound_instantiated = report.risk_bound;
      break;
    }
    case estimators::Family::kCorrelated: {
      // Known sign structure reduces to d copies of the one-dimensional
      // problem, so the reference is d times the 1-d product bound.
      const auto report =
          bounds::corollary_bernoulli_bound(n, 1, row.epsilon_kl, config.loss);
      row.lower_bound_scaling = d * report.scaling_bound;
      row.lower_bound_instantiated = d * report.risk_bound;
      break;
    }
    case estimators::Family::kLogistic: {
      const auto report = bounds::corollary_logistic_bound(n, d, row.epsilon_kl);
      row.lower_bound_scaling = report.scaling_bound;
      row.lower_bound_instantiated = report.risk_bound;
      break;
    }
  }
}

}  // namespace internal

// Monte Carlo risk estimation over the configured grid. Deterministic for a
// fixed (config, seed) pair across runs and worker counts: replication r of
// grid point g always uses the substream (seed, g, r), and the reduction
// runs in replication order.
inline std::vector<RiskRow> run_experiment(const ExperimentConfig& config) {
  internal::check_compatibility(config);
  const std::vector<long> grid_n = config.grid.n.empty() ? std::vector<long>{config.n}
                                                         : config.grid.n;
  const std::vector<int> grid_d =
      config.grid.d.empty() ? std::vector<int>{config.d} : config.grid.d;
  const std::vector<double> grid_eps = config.grid.epsilon.empty()
                                           ? std::vector<double>{config.privacy.epsilon}
                                           : config.grid.epsilon;
  SeededRng master(config.seed);
  std::vector<RiskRow> rows;
  long grid_index = 0;
  for (long n : grid_n) {
    for (int d : grid_d) {
      for (double eps : grid_eps) {
        const std::vector<double> theta = internal::resolve_theta(config, d);
        const std::string mechanism = internal::resolve_mechanism(config.mechanism, eps);
        if (mechanism == "coordinate_subsample" && eps < 1.0)
          throw std::invalid_argument("coordinate subsampling needs eps >= 1");

        const int reps = config.replications;
        std::vector<internal::RepOutcome> outcomes(reps);
        SeededRng point_rng = master.substream(static_cast<uint64_t>(grid_index));
        parallel_for(reps, config.workers, [&](long rep) {
          SeededRng rng = point_rng.substream(static_cast<uint64_t>(rep));
          switch (config.family) {
            case estimators::Family::kBernoulli:
            case estimators::Family::kGaussian:
              outcomes[rep] = internal::run_mean_pipeline(config, mechanism, n, d,
                                                          eps, theta, rng);
              break;
            case estimators::Family::kSparseGaussian:
              outcomes[rep] = internal::run_sparse_pipeline(config, n, d, eps, theta, rng);
              break;
            case estimators::Family::kCorrelated:
              outcomes[rep] = internal::run_correlated_pipeline(config, n, d, eps, rng);
              break;
            case estimators::Family::kLogistic:
              break;  // rejected by check_compatibility
          }
        });

        RiskRow row;
        row.family = estimators::family_name(config.family);
        row.n = n;
        row.d = d;
        row.epsilon = eps;
        row.mechanism = mechanism;
        row.estimator = config.estimator;
        row.seed = config.seed;
        row.per_coordinate_loss.assign(d, 0.0);
        double mean = 0.0;
        for (int r = 0; r < reps; ++r) {
          mean += outcomes[r].loss;
          row.failures += outcomes[r].failures;
          for (int j = 0; j < d; ++j)
            row.per_coordinate_loss[j] += outcomes[r].per_coordinate[j];
        }
        mean /= reps;
        for (int j = 0; j < d; ++j) row.per_coordinate_loss[j] /= reps;
        double var = 0.0;
        for (int r = 0; r < reps; ++r) {
          const double dev = outcomes[r].loss - mean;
          var += dev * dev;
        }
        row.mean_loss = mean;
        row.std_error = reps > 1 ? std::sqrt(var / (reps - 1.0) / reps) : 0.0;
        internal::fill_lower_bounds(row, config, n, d, eps);
        rows.push_back(std::move(row));
        ++grid_index;
      }
    }
  }
  return rows;
}

// ---- Result emission ----

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline constexpr const char* kCsvHeader =
    "family,n,d,epsilon,epsilon_kl,mechanism,estimator,mean_loss,std_error,"
    "lower_bound_scaling,lower_bound_instantiated,seed";

inline std::string results_to_csv(const std::vector<RiskRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.family << ',' << r.n << ',' << r.d << ',' << format_double(r.epsilon)
        << ',' << format_double(r.epsilon_kl) << ',' << r.mechanism << ','
        << r.estimator << ',' << format_double(r.mean_loss) << ','
        << format_double(r.std_error) << ',' << format_double(r.lower_bound_scaling)
        << ',' << format_double(r.lower_bound_instantiated) << ',' << r.seed << "\n";
  }
  return out.str();
}

inline void to_json(nlohmann::json& j, const RiskRow& r) {
  j = nlohmann::json{{"family", r.family},
                     {"n", r.n},
                     {"d", r.d},
                     {"epsilon", r.epsilon},
                     {"epsilon_kl", r.epsilon_kl},
                     {"mechanism", r.mechanism},
                     {"estimator", r.estimator},
                     {"mean_loss", r.mean_loss},
                     {"std_error", r.std_error},
                     {"lower_bound_scaling", r.lower_bound_scaling},
                     {"lower_bound_instantiated", r.lower_bound_instantiated},
                     {"seed", r.seed},
                     {"per_coordinate_loss", r.per_coordinate_loss},
                     {"failures", r.failures}};
}

inline void from_json(const nlohmann::json& j, RiskRow& r) {
  j.at("family").get_to(r.family);
  j.at("n").get_to(r.n);
  j.at("d").get_to(r.d);
  j.at("epsilon").get_to(r.epsilon);
  j.at("epsilon_kl").get_to(r.epsilon_kl);
  j.at("mechanism").get_to(r.mechanism);
  j.at("estimator").get_to(r.estimator);
  j.at("mean_loss").get_to(r.mean_loss);
  j.at("std_error").get_to(r.std_error);
  j.at("lower_bound_scaling").get_to(r.lower_bound_scaling);
  j.at("lower_bound_instantiated").get_to(r.lower_bound_instantiated);
  j.at("seed").get_to(r.seed);
  r.per_coordinate_loss = j.value("per_coordinate_loss", std::vector<double>{});
  r.failures = j.value("failures", 0L);
}

enum class ResultFormat { kCsv, kJson };

inline void emit_results(const std::vector<RiskRow>& rows, ResultFormat format,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  if (format == ResultFormat::kCsv) {
    out << results_to_csv(rows);
  } else {
    out << nlohmann::json(rows).dump(2) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<RiskRow> read_results_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  nlohmann::json j;
  in >> j;
  return j.get<std::vector<RiskRow>>();
}

}  // namespace ldplab::harness

#endif  // LDPLAB_HARNESS_HPP_
