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
#include "ldplab/accounting.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "json.hpp"

namespace ldplab::accounting {
namespace {

TEST(DpToRenyiBound, ZeroEpsIsZero) {
  EXPECT_EQ(dp_to_renyi_bound(0.0, 1.0), 0.0);
  EXPECT_EQ(dp_to_renyi_bound(0.0, 7.0), 0.0);
}

TEST(DpToRenyiBound, CapBranchAtUnitEps) {
  // At alpha = 1 the quadratic term vanishes: min{(e - 1), 1} = 1.
  EXPECT_DOUBLE_EQ(dp_to_renyi_bound(1.0, 1.0), 1.0);
}

TEST(DpToRenyiBound, CapBranchAtLargeEps) {
  EXPECT_DOUBLE_EQ(dp_to_renyi_bound(10.0, 2.0), 10.0);
}

TEST(DpToRenyiBound, QuadraticBranchSmallEps) {
  const double eps = 0.1, alpha = 2.0;
  const double expected = 2.0 * (alpha - 1.0) * eps * eps +
                          std::min(2.0, std::expm1(eps)) * eps;
  EXPECT_NEAR(dp_to_renyi_bound(eps, alpha), expected, 1e-15);
  EXPECT_LT(dp_to_renyi_bound(eps, alpha), eps);
}

TEST(DpToRenyiBound, CappedByEpsAndMonotone) {
  double prev_alpha = 0.0;
  for (double alpha = 1.0; alpha <= 16.0; alpha += 0.5) {
    const double v = dp_to_renyi_bound(0.4, alpha);
    EXPECT_LE(v, 0.4);
    EXPECT_GE(v, prev_alpha);
    prev_alpha = v;
  }
  double prev_eps = 0.0;
  for (double eps = 0.0; eps <= 4.0; eps += 0.1) {
    const double v = dp_to_renyi_bound(eps, 3.0);
    EXPECT_LE(v, eps);
    EXPECT_GE(v, prev_eps - 1e-15);
    prev_eps = v;
  }
}

TEST(DpToKlAverage, Examples) {
  EXPECT_EQ(dp_to_kl_average({0.0}), 0.0);
  EXPECT_DOUBLE_EQ(dp_to_kl_average({1.0}), 1.0);
  EXPECT_NEAR(dp_to_kl_average({0.5}), 0.25 / kLn2, 1e-15);
  EXPECT_NEAR(dp_to_kl_average({0.5}), 0.36067, 1e-5);
}

TEST(DpToKlAverage, SingletonEqualsMin) {
  for (double eps : {0.1, 0.5, 0.69, 0.8, 2.0}) {
    EXPECT_DOUBLE_EQ(dp_to_kl_average({eps}), std::min(eps, eps * eps / kLn2));
  }
}

TEST(DpToKlAverage, AveragesEntries) {
  const double expected = 0.5 * (std::min(1.0, 1.0 / kLn2) + std::min(0.5, 0.25 / kLn2));
  EXPECT_NEAR(dp_to_kl_average({1.0, 0.5}), expected, 1e-15);
  EXPECT_THROW(dp_to_kl_average({}), std::invalid_argument);
}

TEST(AssumptionA1Prime, ZeroDeltaPasses) {
  const auto result = check_assumption_a1prime(1.0, 0.0, 2);
  EXPECT_TRUE(result.pass);
  EXPECT_TRUE(result.violated.empty());
}

TEST(AssumptionA1Prime, LargeDeltaFailsFirstClause) {
  const auto result = check_assumption_a1prime(1.0, 0.1, 2);
  EXPECT_FALSE(result.pass);
  ASSERT_FALSE(result.violated.empty());
  EXPECT_EQ(result.violated[0], "delta <= min{eps,1}/256");
}

TEST(AssumptionA1Prime, SmallEpsClauseByClause) {
  // eps = 0.1 <= 1/6 brings the two extra clauses into play; at
  // delta = 1e-10 and |X| = 16 all five hold:
  //   1e-10 <= 0.1/256 = 3.9e-4
  //   1e-9 * log(1e9) = 2.07e-8 <= 0.01
  //   1e-10 <= 0.01 / ln^2(16) = 1.3e-3
  //   1e-10 <= 1e-5 / (64 ln^2 16) = 2.03e-8
  //   1e-10 * ln^2(1e9) = 4.3e-8 <= 1e-5/16 = 6.25e-7
  const auto pass = check_assumption_a1prime(0.1, 1e-10, 16);
  EXPECT_TRUE(pass.pass) << "violated: " << (pass.violated.empty() ? "" : pass.violated[0]);

  // Raising delta to 1e-7 breaks exactly the fifth-power clauses.
  const auto fail = check_assumption_a1prime(0.1, 1e-7, 16);
  EXPECT_FALSE(fail.pass);
  bool found = false;
  for (const auto& clause : fail.violated)
    if (clause == "delta <= eps^5/(64 log^2|X|)") found = true;
  EXPECT_TRUE(found);
}

TEST(AssumptionA1Prime, ReportsAllViolatedClauses) {
  const auto result = check_assumption_a1prime(0.1, 0.05, 4);
  EXPECT_FALSE(result.pass);
  EXPECT_GE(result.violated.size(), 3u);
}

TEST(CompositionalBudget, AllZerosPass) {
  CompositionLedger ledger;
  ledger.n = 3;
  for (int i = 0; i < 3; ++i) ledger.entries.push_back({i, 0, 0.0, 0.0});
  EXPECT_TRUE(check_compositional_budget(ledger, 0.0, 0.0));
  EXPECT_TRUE(check_compositional_budget(ledger, 1.0, 0.5));
}

TEST(CompositionalBudget, TwoUnitEntriesPass) {
  CompositionLedger ledger;
  ledger.n = 2;
  ledger.entries = {{0, 0, 1.0, 0.0}, {1, 0, 1.0, 0.0}};
  // per entry min{1/ln 2, 1} = 1, so the sum 2 fits n * eps_kl = 2.
  EXPECT_TRUE(check_compositional_budget(ledger, 1.0, 0.0));
}

TEST(CompositionalBudget, SingleLargeEntryFails) {
  CompositionLedger ledger;
  ledger.n = 1;
  ledger.entries = {{0, 0, 3.0, 0.0}};
  // min{9/ln 2, 3} = 3 > 1.
  EXPECT_FALSE(check_compositional_budget(ledger, 1.0, 0.0));
}

TEST(CompositionalBudget, DeltaCapAtOneHalf) {
  CompositionLedger ledger;
  ledger.n = 1;
  ledger.entries = {{0, 0, 0.0, 0.3}};
  EXPECT_TRUE(check_compositional_budget(ledger, 1.0, 0.4));
  EXPECT_FALSE(check_compositional_budget(ledger, 1.0, 0.2));   // sum exceeds Delta
  EXPECT_FALSE(check_compositional_budget(ledger, 1.0, 0.6));   // Delta beyond 1/2
}

TEST(CompositionLedger, RejectsDuplicateEntries) {
  CompositionLedger ledger;
  ledger.n = 2;
  ledger.entries = {{0, 0, 1.0, 0.0}, {0, 0, 0.5, 0.0}};
  EXPECT_THROW(ledger.validate(), std::invalid_argument);
}

TEST(CompositionLedger, JsonRoundTrip) {
  CompositionLedger ledger;
  ledger.n = 2;
  ledger.entries = {{0, 0, 1.0, 0.0}, {1, 1, 0.5, 0.01}};
  nlohmann::json j(ledger);
  const auto back = j.get<CompositionLedger>();
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.n, 2);
  EXPECT_EQ(back.entries[1].t, 1);
  EXPECT_DOUBLE_EQ(back.entries[1].delta, 0.01);
}

}  // namespace
}  // namespace ldplab::accounting
