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
#include "ldplab/estimators.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ldplab/mechanisms.hpp"
#include "ldplab/rng.hpp"

namespace ldplab::estimators {
namespace {

TEST(GaussianLocation, ZeroAverageGivesZero) {
  EXPECT_EQ(gaussian_location_estimator(0.0, 1.0), 0.0);
}

TEST(GaussianLocation, ExactInversionFixedPoint) {
  const double z_bar = 1.0 - 2.0 * norm_cdf(-0.5);
  EXPECT_NEAR(gaussian_location_estimator(z_bar, 1.0), 0.5, 1e-12);
}

TEST(GaussianLocation, BoundaryClips) {
  EXPECT_EQ(gaussian_location_estimator(1.0, 1.0), 1.0);
  EXPECT_EQ(gaussian_location_estimator(-1.0, 1.0), -1.0);
  EXPECT_EQ(gaussian_location_estimator(1.5, 1.0), 1.0);
}

TEST(GaussianLocation, FixedPointAcrossParameterRange) {
  for (double sigma : {0.5, 1.0, 2.0}) {
    for (double theta = -1.0; theta <= 1.0 + 1e-12; theta += 0.125) {
      const double z_bar = 1.0 - 2.0 * norm_cdf(-theta / sigma);
      EXPECT_NEAR(gaussian_location_estimator(z_bar, sigma), theta, 1e-10)
          << "sigma=" << sigma << " theta=" << theta;
    }
  }
}

TEST(GaussianLocation, OddAndMonotone) {
  double prev = -2.0;
  for (double z = -0.95; z <= 0.95; z += 0.05) {
    const double est = gaussian_location_estimator(z, 1.5);
    EXPECT_NEAR(est, -gaussian_location_estimator(-z, 1.5), 1e-12);
    EXPECT_GE(est, prev - 1e-12);
    prev = est;
  }
}

ProblemSpec GaussianSpec(int d, long n, std::vector<double> theta, double sigma) {
  ProblemSpec spec;
  spec.family = Family::kGaussian;
  spec.d = d;
  spec.n = n;
  spec.theta = std::move(theta);
  spec.sigma = sigma;
  return spec;
}

TEST(GaussianVector, ZeroAveragesGiveZeroVector) {
  std::vector<mechanisms::PrivateRelease> releases(2);
  releases[0].values = {1.0, -1.0};
  releases[0].magnitude_bound = 1.0;
  releases[1].values = {-1.0, 1.0};
  releases[1].magnitude_bound = 1.0;
  const auto est = gaussian_vector_estimator(releases, GaussianSpec(2, 2, {0.0, 0.0}, 1.0));
  EXPECT_EQ(est[0], 0.0);
  EXPECT_EQ(est[1], 0.0);
}

TEST(GaussianVector, SingleCoordinateMatchesScalarEstimator) {
  std::vector<mechanisms::PrivateRelease> releases(3);
  const double b = mechanisms::rr_scale(1.0);
  releases[0].values = {b};
  releases[1].values = {b};
  releases[2].values = {-b};
  for (auto& r : releases) r.magnitude_bound = b;
  const auto est = gaussian_vector_estimator(releases, GaussianSpec(1, 3, {0.0}, 1.0));
  const double z_bar = b / 3.0;
  EXPECT_DOUBLE_EQ(est[0], gaussian_location_estimator(z_bar, 1.0));
}

TEST(GaussianVector, NeverSampledCoordinateFlagged) {
  std::vector<mechanisms::PrivateRelease> releases(2);
  for (auto& r : releases) {
    r.values = {2.0, kNan};
    r.magnitude_bound = 2.0;
    r.sampled_coords = std::vector<int>{0};
  }
  std::vector<bool> warn;
  const auto est = gaussian_vector_estimator(releases, GaussianSpec(2, 2, {0.0, 0.0}, 1.0), &warn);
  EXPECT_FALSE(warn[0]);
  EXPECT_TRUE(warn[1]);
  EXPECT_EQ(est[1], 0.0);
}

TEST(GaussianVector, MonteCarloRecoversLocation) {
  SeededRng rng(301);
  const long n = 100000;
  const double eps = 2.0, sigma = 1.0;
  const std::vector<double> theta{0.5, -0.5};
  std::vector<mechanisms::PrivateRelease> releases;
  releases.reserve(n);
  for (long i = 0; i < n; ++i) {
    std::vector<double> x{theta[0] + sigma * rng.next_gaussian(),
                          theta[1] + sigma * rng.next_gaussian()};
    releases.push_back(mechanisms::coordinate_subsample_mechanism(x, eps, rng));
  }
  const auto est = gaussian_vector_estimator(releases, GaussianSpec(2, n, theta, sigma));
  EXPECT_NEAR(est[0], 0.5, 0.1);
  EXPECT_NEAR(est[1], -0.5, 0.1);
}

TEST(BernoulliMean, SaturatedReleases) {
  std::vector<mechanisms::PrivateRelease> releases(4);
  for (auto& r : releases) {
    r.values = {1.0};
    r.magnitude_bound = 1.0;
  }
  EXPECT_EQ(bernoulli_mean_estimator(releases, 1)[0], 1.0);
  for (auto& r : releases) r.values = {0.0};
  EXPECT_EQ(bernoulli_mean_estimator(releases, 1)[0], 0.5);
  releases.clear();
  EXPECT_THROW(bernoulli_mean_estimator(releases, 1), std::invalid_argument);
}

TEST(BernoulliMean, MonteCarloRecoversMean) {
  SeededRng rng(302);
  const long n = 100000;
  const double eps = 1.0, theta = 0.75;
  const double b = mechanisms::rr_scale(eps);
  std::vector<mechanisms::PrivateRelease> releases;
  releases.reserve(n);
  for (long i = 0; i < n; ++i) {
    const double sign = rng.next_bernoulli(theta) ? 1.0 : -1.0;
    releases.push_back(mechanisms::rr_sign_mechanism(sign, eps, rng));
  }
  const auto est = bernoulli_mean_estimator(releases, 1);
  EXPECT_NEAR(est[0], theta, 3.0 * (b / 2.0) / std::sqrt(static_cast<double>(n)));
}

ProblemSpec SparseSpec(int d, long n, std::vector<double> theta) {
  ProblemSpec spec;
  spec.family = Family::kSparseGaussian;
  spec.d = d;
  spec.n = n;
  spec.theta = std::move(theta);
  spec.sigma = 1.0;
  spec.k = 1;
  return spec;
}

TEST(SparseTwoStage, RecoversPlantedCoordinate) {
  SeededRng rng(303);
  const int d = 8;
  const long n = 8000;
  std::vector<double> theta(d, 0.0);
  theta[0] = 0.8;
  SeededRng data_rng = rng.substream(1);
  auto sample = [&](long i, int j) {
    SeededRng cell = data_rng.substream(static_cast<uint64_t>(i) * d + j);
    return theta[j] + cell.next_gaussian();
  };
  SeededRng mech_rng = rng.substream(2);
  const auto est = sparse_two_stage_estimator(sample, 2 * n, 1.0, SparseSpec(d, n, theta), mech_rng);
  EXPECT_NEAR(est[0], 0.8, 0.15);
  for (int j = 1; j < d; ++j) EXPECT_EQ(est[j], 0.0);
}

TEST(SparseTwoStage, NullSignalStaysSmall) {
  SeededRng rng(304);
  const int d = 4;
  const long n = 4000;
  const std::vector<double> theta(d, 0.0);
  SeededRng data_rng = rng.substream(1);
  auto sample = [&](long i, int j) {
    SeededRng cell = data_rng.substream(static_cast<uint64_t>(i) * d + j);
    return theta[j] + cell.next_gaussian();
  };
  SeededRng mech_rng = rng.substream(2);
  const auto est = sparse_two_stage_estimator(sample, 2 * n, 1.0, SparseSpec(d, n, theta), mech_rng);
  double norm = 0.0;
  for (double v : est) norm += v * v;
  EXPECT_LE(std::sqrt(norm), 0.2);
}

TEST(SparseTwoStage, RejectsMultiSparseProblems) {
  auto sample = [](long, int) { return 1.0; };
  SeededRng rng(310);
  auto spec = SparseSpec(4, 40, {0.5, 0.0, 0.0, 0.0});
  spec.k = 2;
  EXPECT_THROW(sparse_two_stage_estimator(sample, 80, 1.0, spec, rng),
               std::invalid_argument);
}

TEST(SparseTwoStage, ArgmaxTieBreaksToLowestIndex) {
  // Identical deterministic data in every coordinate forces a tie.
  auto sample = [](long, int) { return 1.0; };
  SeededRng rng(305);
  const auto est = sparse_two_stage_estimator(sample, 80, 1.0, SparseSpec(4, 40, {0.5, 0.0, 0.0, 0.0}), rng);
  int support = -1;
  for (int j = 0; j < 4; ++j)
    if (est[j] != 0.0) support = j;
  EXPECT_EQ(support, 0);
  EXPECT_THROW(sparse_two_stage_estimator(sample, 80, 1.0,
                                          SparseSpec(41, 40, std::vector<double>(41, 0.0)), rng),
               std::invalid_argument);
}

TEST(Correlated, ClosedFormCases) {
  std::vector<mechanisms::PrivateRelease> releases(2);
  releases[0].values = {1.0};
  releases[1].values = {-1.0};
  for (auto& r : releases) r.magnitude_bound = 1.0;
  const auto zero = correlated_estimator(releases, {1, -1});
  EXPECT_EQ(zero[0], 0.0);
  EXPECT_EQ(zero[1], 0.0);

  releases[1].values = {1.0};
  const auto unit = correlated_estimator(releases, {1, -1});
  EXPECT_EQ(unit[0], 1.0);
  EXPECT_EQ(unit[1], -1.0);
}

TEST(Correlated, MonteCarloRiskWithinConstant) {
  SeededRng rng(306);
  const int d = 16;
  const long n = 10000;
  const double eps = 1.0, p = 0.75;
  std::vector<int> b(d);
  for (int j = 0; j < d; ++j) b[j] = (j % 2 == 0) ? 1 : -1;
  double total_sq = 0.0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    SeededRng rep_rng = rng.substream(rep);
    std::vector<mechanisms::PrivateRelease> releases;
    releases.reserve(n);
    for (long i = 0; i < n; ++i) {
      const int bit = rep_rng.next_bernoulli(p) ? 1 : -1;
      releases.push_back(mechanisms::correlated_bit_mechanism(bit, eps, rep_rng));
    }
    const auto est = correlated_estimator(releases, b);
    for (int j = 0; j < d; ++j) {
      const double target = b[j] * (2.0 * p - 1.0);
      total_sq += (est[j] - target) * (est[j] - target);
    }
  }
  const double mse = total_sq / reps;
  EXPECT_LE(mse, 20.0 * d / (n * std::min(eps * eps, 1.0)));
}

TEST(LogisticGenerator, NullParameterGivesIndependence) {
  SeededRng rng(307);
  const auto data = logistic_data_generator({0.0, 0.0}, 100000, rng);
  double y_mean = 0.0, agree0 = 0.0;
  for (const auto& s : data) {
    y_mean += s.y;
    agree0 += (s.x[0] == s.y) ? 1.0 : 0.0;
  }
  EXPECT_NEAR(y_mean / data.size(), 0.0, 4.0 / std::sqrt(100000.0));
  EXPECT_NEAR(agree0 / data.size(), 0.5, 4.0 * 0.5 / std::sqrt(100000.0));
}

TEST(LogisticGenerator, AgreementFrequencyMatchesLogit) {
  SeededRng rng(308);
  const double delta = 0.4;
  const long n = 100000;
  const auto data = logistic_data_generator({delta}, n, rng);
  double agree = 0.0;
  for (const auto& s : data) agree += (s.y * s.x[0] > 0) ? 1.0 : 0.0;
  const double expected = std::exp(delta) / (1.0 + std::exp(delta));
  const double sigma = std::sqrt(expected * (1.0 - expected) / n);
  EXPECT_NEAR(agree / n, expected, 3.0 * sigma);
}

TEST(LogisticGenerator, EmpiricalPosteriorMatchesLogisticForm) {
  SeededRng rng(309);
  const std::vector<double> theta{0.5, -0.3};
  const long n = 200000;
  const auto data = logistic_data_generator(theta, n, rng);
  // Contingency counts over (x, y).
  long counts[4][2] = {};
  for (const auto& s : data) {
    const int xi = (s.x[0] > 0 ? 1 : 0) | (s.x[1] > 0 ? 2 : 0);
    counts[xi][s.y > 0 ? 1 : 0]++;
  }
  for (int xi = 0; xi < 4; ++xi) {
    const double x0 = (xi & 1) ? 1.0 : -1.0;
    const double x1 = (xi & 2) ? 1.0 : -1.0;
    const double margin = theta[0] * x0 + theta[1] * x1;
    const double posterior = std::exp(margin) / (1.0 + std::exp(margin));
    const long total = counts[xi][0] + counts[xi][1];
    ASSERT_GT(total, 0);
    const double freq = static_cast<double>(counts[xi][1]) / total;
    const double sigma = std::sqrt(posterior * (1.0 - posterior) / total);
    EXPECT_NEAR(freq, posterior, 3.5 * sigma) << "x index " << xi;
  }
}

TEST(LogisticModel, ExactJointSatisfiesPosteriorIdentity) {
  // Product-form joint: P(x, y) = (1/2) prod_j sigma-or-complement; posterior
  // must equal the logistic form exactly.
  const std::vector<double> theta{0.7, -0.4, 0.15};
  const int d = 3;
  for (int mask = 0; mask < (1 << d); ++mask) {
    double joint_pos = 0.5, joint_neg = 0.5;
    double margin = 0.0;
    for (int j = 0; j < d; ++j) {
      const double xj = (mask >> j) & 1 ? 1.0 : -1.0;
      const double agree = 1.0 / (1.0 + std::exp(-theta[j]));
      joint_pos *= (xj > 0) ? agree : 1.0 - agree;
      joint_neg *= (xj < 0) ? agree : 1.0 - agree;
      margin += theta[j] * xj;
    }
    const double posterior = joint_pos / (joint_pos + joint_neg);
    const double logistic = std::exp(margin) / (1.0 + std::exp(margin));
    EXPECT_NEAR(posterior, logistic, 1e-12);
  }
}

TEST(LogisticExcessRisk, MinimizerHasZeroExcess) {
  const std::vector<double> theta{0.3, -0.2};
  EXPECT_EQ(logistic_excess_risk(theta, theta, 2), 0.0);
}

TEST(LogisticExcessRisk, NullModelBaselineIsLogTwo) {
  // theta* = 0 decouples X from Y, so any estimate pays its risk against
  // the log 2 baseline.
  const std::vector<double> theta_star{0.0, 0.0};
  const std::vector<double> theta_hat{0.5, -0.5};
  double expected = 0.0;
  for (int mask = 0; mask < 4; ++mask) {
    for (int y : {-1, 1}) {
      double margin = 0.0;
      for (int j = 0; j < 2; ++j)
        margin += theta_hat[j] * ((mask >> j) & 1 ? 1.0 : -1.0);
      expected += 0.125 * std::log1p(std::exp(-y * margin));
    }
  }
  expected -= std::log(2.0);
  EXPECT_GE(expected, 0.0);
  EXPECT_NEAR(logistic_excess_risk(theta_hat, theta_star, 2), expected, 1e-13);
}

TEST(LogisticExcessRisk, OneDimensionalFourOutcomeOracle) {
  const double theta_star = 0.2;
  const double agree = 1.0 / (1.0 + std::exp(-theta_star));
  // Risk of the zero estimate is log 2; risk of theta* comes from the four
  // (x, y) outcomes, which collapse into agree/disagree pairs.
  const double risk_star = agree * std::log1p(std::exp(-theta_star)) +
                           (1.0 - agree) * std::log1p(std::exp(theta_star));
  const double expected = std::log(2.0) - risk_star;
  EXPECT_NEAR(logistic_excess_risk({0.0}, {theta_star}, 1), expected, 1e-13);
  EXPECT_THROW(logistic_excess_risk(std::vector<double>(17, 0.0),
                                    std::vector<double>(17, 0.0), 17),
               std::invalid_argument);
}

TEST(ProblemSpec, Validation) {
  ProblemSpec spec;
  spec.family = Family::kGaussian;
  spec.d = 2;
  spec.n = 10;
  spec.theta = {0.5, 1.5};
  spec.sigma = 1.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.theta = {0.5, -0.5};
  EXPECT_NO_THROW(spec.validate());
  spec.family = Family::kCorrelated;
  spec.b_vector = {1, 0};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.b_vector = {1, -1};
  EXPECT_NO_THROW(spec.validate());
}

}  // namespace
}  // namespace ldplab::estimators
