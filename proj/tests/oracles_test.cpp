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
#include "ldplab/oracles.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "ldplab/rng.hpp"
#include "ldplab/verify.hpp"

namespace ldplab::oracles {
namespace {

using verify::instances::rr_pipeline;

FiniteJoint OneShot(std::vector<double> p_minus, std::vector<double> p_plus,
                    std::vector<std::vector<double>> rows) {
  const int nz = static_cast<int>(rows[0].size());
  const int nx = static_cast<int>(p_minus.size());
  auto channel = [rows = std::move(rows)](int, int x, long, int z) {
    return rows[x][z];
  };
  return FiniteJoint(1, {nx}, {std::move(p_minus)}, {std::move(p_plus)}, {nz},
                     channel);
}

TEST(ExactMutualInformation, IndependentPairIsZero) {
  const auto joint = OneShot({0.5, 0.5}, {0.5, 0.5}, {{0.4, 0.6}, {0.4, 0.6}});
  EXPECT_NEAR(exact_mutual_information(joint, MiKind::kXZ), 0.0, 1e-14);
  EXPECT_NEAR(exact_mutual_information(joint, MiKind::kVZ), 0.0, 1e-14);
}

TEST(ExactMutualInformation, IdentityChannelUniformInput) {
  const auto joint = OneShot({0.5, 0.5}, {0.5, 0.5}, {{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(exact_mutual_information(joint, MiKind::kXZ), kLn2, 1e-14);
}

TEST(ExactMutualInformation, BinarySymmetricChannel) {
  const auto joint = OneShot({0.5, 0.5}, {0.5, 0.5}, {{0.75, 0.25}, {0.25, 0.75}});
  const double expected = kLn2 - binary_entropy(0.25);
  EXPECT_NEAR(exact_mutual_information(joint, MiKind::kXZ), expected, 1e-12);
  EXPECT_NEAR(expected, 0.13081, 1e-5);
}

TEST(ExactMutualInformation, RejectsOversizedInstances) {
  auto channel = [](int, int, long, int) { return 0.5; };
  EXPECT_THROW(FiniteJoint(12, {2}, {{0.5, 0.5}}, {{0.5, 0.5}},
                           std::vector<int>(12, 2), channel),
               std::invalid_argument);
}

TEST(ExactDivergences, EqualDistributions) {
  const auto d = exact_divergences({0.3, 0.7}, {0.3, 0.7});
  EXPECT_EQ(d.tv, 0.0);
  EXPECT_NEAR(d.hellinger2, 0.0, 1e-15);
  EXPECT_EQ(d.kl, 0.0);
  EXPECT_EQ(d.renyi, 0.0);
}

TEST(ExactDivergences, DisjointSupports) {
  const auto d = exact_divergences({1.0, 0.0}, {0.0, 1.0});
  EXPECT_EQ(d.tv, 1.0);
  EXPECT_EQ(d.hellinger2, 1.0);
  EXPECT_EQ(d.kl, kInfinity);
  EXPECT_EQ(d.renyi, kInfinity);
}

TEST(ExactDivergences, BernoulliClosedForms) {
  const auto d = exact_divergences({0.75, 0.25}, {0.25, 0.75});
  EXPECT_NEAR(d.tv, 0.5, 1e-15);
  EXPECT_NEAR(d.kl, 0.5 * std::log(3.0), 1e-14);
  EXPECT_NEAR(d.kl, 0.54931, 1e-5);
}

TEST(ExactDivergences, PinskerInequality) {
  SeededRng rng(21);
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + rng.next_int(5);
    const auto p = random_pmf(rng, m);
    const auto q = random_pmf(rng, m, 0.05);
    const auto d = exact_divergences(p, q);
    EXPECT_LE(d.tv * d.tv, 0.5 * d.kl + 1e-12);
  }
}

TEST(PipelineMarginal, SingleSampleRandomizedResponse) {
  const double eps = 1.0, gamma = 0.4;
  const auto joint = rr_pipeline(1, eps, gamma, false);
  const auto [m_minus, m_plus] = pipeline_marginal(joint);
  const double stay = std::exp(eps) / (1.0 + std::exp(eps));
  // V = -1: X ~ Ber(1/2), so the release is unbiased.
  EXPECT_NEAR(m_minus[0], 0.5, 1e-15);
  EXPECT_NEAR(m_minus[1], 0.5, 1e-15);
  // V = +1: X ~ Ber((1+gamma)/2) pushed through the flip channel.
  const double p1 = (1.0 + gamma) / 2.0 * stay + (1.0 - gamma) / 2.0 * (1.0 - stay);
  EXPECT_NEAR(m_plus[1], p1, 1e-15);
  EXPECT_NEAR(m_plus[0], 1.0 - p1, 1e-15);
}

TEST(PipelineMarginal, LatentIndependentChannelHasEqualMarginals) {
  const auto joint = rr_pipeline(2, 0.7, 0.0, true);  // gamma = 0: V carries nothing
  const auto [m_minus, m_plus] = pipeline_marginal(joint);
  for (size_t z = 0; z < m_minus.size(); ++z)
    EXPECT_NEAR(m_minus[z], m_plus[z], 1e-15);
}

TEST(PipelineMarginal, NonAdaptivePipelineFactorizes) {
  const auto joint2 = rr_pipeline(2, 0.8, 0.5, false);
  const auto joint1 = rr_pipeline(1, 0.8, 0.5, false);
  const auto [m2_minus, m2_plus] = pipeline_marginal(joint2);
  const auto [m1_minus, m1_plus] = pipeline_marginal(joint1);
  for (int z1 = 0; z1 < 2; ++z1)
    for (int z2 = 0; z2 < 2; ++z2) {
      EXPECT_NEAR(m2_plus[z1 + 2 * z2], m1_plus[z1] * m1_plus[z2], 1e-14);
      EXPECT_NEAR(m2_minus[z1 + 2 * z2], m1_minus[z1] * m1_minus[z2], 1e-14);
    }
}

TEST(SdpiConstantSearch, EqualPairHasZeroRatio) {
  SeededRng rng(22);
  const double best = sdpi_constant_search({0.5, 0.5}, {0.5, 0.5}, 4, 50, rng);
  EXPECT_LE(best, 1e-12);  // identical pair carries no latent signal
}

TEST(SdpiConstantSearch, StaysBelowAnalyticCap) {
  SeededRng rng(23);
  const double delta = 0.2;
  const double cap = 2.0 * delta * delta / ((1.0 - delta) * (1.0 - delta));
  const double best = sdpi_constant_search({0.5, 0.5}, {0.4, 0.6}, 4, 500, rng);
  EXPECT_GT(best, 0.0);  // the identity channel already gives a positive ratio
  EXPECT_LE(best, cap + 1e-12);
  EXPECT_NEAR(cap, 0.125, 1e-15);
}

TEST(ExactAssouadTestingRisk, EqualMarginalsGiveHalfPerCoordinate) {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> marginals;
  for (int j = 0; j < 4; ++j)
    marginals.push_back({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_NEAR(exact_assouad_testing_risk(marginals), 2.0, 1e-15);
}

TEST(ExactAssouadTestingRisk, DisjointMarginalsGiveZero) {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> marginals;
  marginals.push_back({{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_EQ(exact_assouad_testing_risk(marginals), 0.0);
}

TEST(ExactAssouadTestingRisk, SingleSampleRandomizedResponsePacking) {
  const double eps = 1.0, pack = 0.5;
  const auto joint = rr_pipeline(1, eps, pack, false);
  const auto marginals = pipeline_marginal(joint);
  const double risk = exact_assouad_testing_risk({marginals});
  // Hand enumeration of the two 2-point mixtures.
  const double stay = std::exp(eps) / (1.0 + std::exp(eps));
  const double plus1 = 0.75 * stay + 0.25 * (1.0 - stay);
  const double tv = std::abs(plus1 - 0.5);
  EXPECT_NEAR(risk, 0.5 * (1.0 - tv), 1e-14);
}

TEST(InfoDecomposition, SingleCoordinateIsTight) {
  const auto joint = rr_pipeline(2, 1.0, 0.5, false);
  EXPECT_NEAR(info_decomposition_gap(joint), 0.0, 1e-12);
  EXPECT_TRUE(info_decomposition_check(joint));
}

TEST(InfoDecomposition, IndependentPerCoordinateChannelsAreTight) {
  // d = 2 with a 4-symbol release that flips each input bit independently.
  auto channel = [](int, int x, long, int z) {
    double p = 1.0;
    for (int bit = 0; bit < 2; ++bit)
      p *= (((x >> bit) & 1) == ((z >> bit) & 1)) ? 0.8 : 0.2;
    return p;
  };
  const FiniteJoint joint(1, {2, 2}, {{0.5, 0.5}, {0.5, 0.5}},
                          {{0.25, 0.75}, {0.3, 0.7}}, {4}, channel);
  EXPECT_NEAR(info_decomposition_gap(joint), 0.0, 1e-10);
}

TEST(InfoDecomposition, ParityReleaseIsStrictlySubAdditive) {
  const auto joint = verify::instances::parity_instance(2, 0.5, 0.1);
  EXPECT_GT(info_decomposition_gap(joint), 1e-4);
  EXPECT_TRUE(info_decomposition_check(joint));
}

TEST(BoundedRatioTriples, ContractionInequalityHolds) {
  SeededRng rng(24);
  for (int t = 0; t < 200; ++t) {
    const int nx = 2 + rng.next_int(3);
    const auto pair = verify::instances::random_bounded_ratio_pair(rng, nx, 1.0);
    ASSERT_LE(pair.llr_bound, 1.0);
    const int nz = 2 + rng.next_int(4);
    std::vector<std::vector<double>> rows(nx);
    for (int x = 0; x < nx; ++x) rows[x] = random_pmf(rng, nz);
    const auto infos = verify::instances::pair_channel_infos(pair.p_minus, pair.p_plus, rows);
    EXPECT_LE(infos.i_vz,
              2.0 * std::pow(std::expm1(pair.llr_bound), 2) * infos.i_xz + 1e-10);
  }
}

}  // namespace
}  // namespace ldplab::oracles
