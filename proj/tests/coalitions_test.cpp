/*
 * Copyright 2026 The X-SHAP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "xshap/coalitions.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "xshap/error.hpp"

namespace xshap {
namespace {

std::vector<std::string> Masks(const CoalitionPlan& plan) {
  std::vector<std::string> out;
  for (const auto& c : plan.coalitions) out.push_back(c.ToString());
  return out;
}

TEST(CoalitionTest, StringRoundTripAndPopcount) {
  const Coalition c = Coalition::FromString("1011");
  EXPECT_EQ(c.size(), 4u);
  EXPECT_EQ(c.popcount(), 3u);
  EXPECT_TRUE(c.active(0));
  EXPECT_FALSE(c.active(1));
  EXPECT_EQ(c.ToString(), "1011");
  EXPECT_THROW(Coalition::FromString("10a"), Error);
}

TEST(CoalitionTest, ComplementExamples) {
  EXPECT_EQ(Complement(Coalition::FromString("101")).ToString(), "010");
  EXPECT_EQ(Complement(Coalition::FromString("000")).ToString(), "111");
  EXPECT_EQ(Complement(Coalition::FromString("1111")).ToString(), "0000");
}

TEST(WeightsTest, ShapleyExamples) {
  EXPECT_DOUBLE_EQ(ShapleyWeight(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(ShapleyWeight(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(ShapleyWeight(3, 1), 1.0 / 6.0);
  EXPECT_THROW(ShapleyWeight(3, 3), Error);
}

TEST(WeightsTest, KernelExamples) {
  EXPECT_DOUBLE_EQ(KernelWeight(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(KernelWeight(4, 1), 0.25);
  for (std::size_t m = 2; m < 20; ++m) {
    for (std::size_t s = 1; s < m; ++s) {
      EXPECT_DOUBLE_EQ(KernelWeight(m, s), KernelWeight(m, m - s));
    }
  }
  EXPECT_THROW(KernelWeight(4, 0), Error);
  EXPECT_THROW(KernelWeight(4, 4), Error);
}

TEST(WeightsTest, ShapleyWeightsSumToOne) {
  for (int m = 1; m <= 10; ++m) {
    for (int j = 0; j < m; ++j) {
      double total = 0.0;
      for (std::uint32_t s = 0; s < (1u << m); ++s) {
        if ((s >> j) & 1u) continue;
        total += ShapleyWeight(m, __builtin_popcount(s));
      }
      EXPECT_NEAR(total, 1.0, 1e-12) << "m=" << m << " j=" << j;
    }
  }
}

TEST(WeightsTest, ShapleyMatchesFactorialFormula) {
  for (int m = 1; m <= 15; ++m) {
    for (int s = 0; s < m; ++s) {
      const double expected = xshap::testing::Factorial(s) *
                              xshap::testing::Factorial(m - s - 1) /
                              xshap::testing::Factorial(m);
      EXPECT_NEAR(ShapleyWeight(m, s) / expected, 1.0, 1e-13);
    }
  }
  // Large m takes the lgamma path; the weights must still sum to one.
  const std::size_t m = 80;
  double total = 0.0;
  double binom = 1.0;
  for (std::size_t s = 0; s < m; ++s) {
    total += binom * ShapleyWeight(m, s);
    binom = binom * static_cast<double>(m - 1 - s) / static_cast<double>(s + 1);
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(EnumerateTest, TwoFeatures) {
  const CoalitionPlan plan = EnumerateCoalitions(2, 10);
  EXPECT_EQ(Masks(plan), (std::vector<std::string>{"10", "01"}));
  for (double w : plan.weights) EXPECT_DOUBLE_EQ(w, 0.5);
}

TEST(EnumerateTest, ThreeFeaturesHandOrder) {
  const CoalitionPlan plan = EnumerateCoalitions(3, 6);
  EXPECT_EQ(Masks(plan), (std::vector<std::string>{"100", "011", "010", "101",
                                                   "001", "110"}));
}

TEST(EnumerateTest, FourFeaturesBudgetEight) {
  const CoalitionPlan plan = EnumerateCoalitions(4, 8);
  ASSERT_EQ(plan.size(), 8u);
  for (const auto& c : plan.coalitions) {
    EXPECT_TRUE(c.popcount() == 1 || c.popcount() == 3) << c.ToString();
  }
}

TEST(EnumerateTest, PlanInvariants) {
  for (std::size_t m = 2; m <= 9; ++m) {
    const std::size_t proper = (std::size_t{1} << m) - 2;
    for (std::size_t budget : {std::size_t{2}, std::size_t{3}, std::size_t{7},
                               proper / 2, proper - 1, proper, proper + 5}) {
      if (budget < 2) continue;
      const CoalitionPlan plan = EnumerateCoalitions(m, budget);
      EXPECT_EQ(plan.size(), std::min(budget, proper));
      std::set<std::string> seen;
      for (std::size_t k = 0; k < plan.size(); ++k) {
        const Coalition& c = plan.coalitions[k];
        EXPECT_GT(c.popcount(), 0u);
        EXPECT_LT(c.popcount(), m);
        EXPECT_TRUE(seen.insert(c.ToString()).second) << "duplicate";
        EXPECT_DOUBLE_EQ(plan.weights[k], KernelWeight(m, c.popcount()));
        if (k > 0) EXPECT_LE(plan.weights[k], plan.weights[k - 1]);
      }
      // Complement pairs sit next to each other whenever both fit.
      for (std::size_t k = 0; k < plan.size(); ++k) {
        const std::string comp = Complement(plan.coalitions[k]).ToString();
        if (plan.size() == proper) EXPECT_TRUE(seen.count(comp));
      }
    }
  }
}

TEST(EnumerateTest, FullBudgetHasEveryProperCoalition) {
  const CoalitionPlan plan = EnumerateCoalitions(6, 1000);
  EXPECT_EQ(plan.size(), 62u);
  EXPECT_EQ(ProperCoalitionCount(6), 62u);
}

TEST(EnumerateTest, RejectsBadArguments) {
  EXPECT_THROW(EnumerateCoalitions(0, 10), Error);
  EXPECT_THROW(EnumerateCoalitions(3, 1), Error);
}

}  // namespace
}  // namespace xshap
