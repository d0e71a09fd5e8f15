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

#include "xshap/explainers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "xshap/coalitions.hpp"
#include "xshap/error.hpp"
#include "xshap/models.hpp"

namespace xshap {
namespace {

using ::xshap::testing::AsFunction;
using ::xshap::testing::BruteForceMultiplicative;
using ::xshap::testing::BruteForceShapley;
using ::xshap::testing::RandomTable;
using ::xshap::testing::RelErr;

constexpr double kE = 2.718281828459045;

// f(x) = exp(x1 + 2 x2) with reference {(0,0), (1,1)}.
struct WorkedExample {
  LogGlm f{0.0, {1.0, 2.0}};
  DataTable ref_table{2, 2, {0, 0, 1, 1}};
  ReferenceSet ref = ReferenceSet::Create(f, ref_table);
  std::vector<double> x{1.0, 0.0};
};

// A smooth positive model with interactions between every pair of features.
FunctionPredictor InteractingModel(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::vector<double> a(m), b(m * m);
  for (double& v : a) v = u(rng);
  for (double& v : b) v = 0.5 * u(rng);
  return FunctionPredictor(
      [a, b, m](std::span<const double> x) {
        double eta = 0.1;
        for (std::size_t i = 0; i < m; ++i) {
          eta += a[i] * x[i];
          for (std::size_t j = i + 1; j < m; ++j) eta += b[i * m + j] * x[i] * x[j];
        }
        return std::exp(eta) + 0.05 * std::cos(x[0]) + 0.1;
      },
      PredictionMode::kMultiplicative);
}

TEST(PerturbedDatasetTest, Examples) {
  const DataTable ref(2, 2, {1, 2, 3, 4});
  const std::vector<double> x{9, 9};
  const DataTable mixed = BuildPerturbedDataset(x, ref, Coalition::FromString("10"));
  EXPECT_EQ(mixed.values(), (std::vector<double>{9, 2, 9, 4}));
  EXPECT_EQ(BuildPerturbedDataset(x, ref, Coalition::FromString("11")).values(),
            (std::vector<double>{9, 9, 9, 9}));
  EXPECT_EQ(BuildPerturbedDataset(x, ref, Coalition::FromString("00")).values(),
            ref.values());
}

TEST(CoalitionValueTest, AdditiveExamples) {
  const FunctionPredictor f(
      [](std::span<const double> x) { return x[0] + x[1]; },
      PredictionMode::kAdditive);
  const ReferenceSet ref = ReferenceSet::Create(f, DataTable(2, 2, {1, 2, 3, 4}));
  const std::vector<double> x{9, 9};
  EXPECT_DOUBLE_EQ(CoalitionValueAdditive(f, x, ref, Coalition::FromString("10")), 12.0);
  EXPECT_DOUBLE_EQ(CoalitionValueAdditive(f, x, ref, Coalition::FromString("11")), 18.0);
  EXPECT_DOUBLE_EQ(CoalitionValueAdditive(f, x, ref, Coalition::FromString("00")),
                   ref.additive_baseline());
}

TEST(CoalitionValueTest, MultiplicativeExamples) {
  WorkedExample w;
  EXPECT_NEAR(CoalitionValueMultiplicative(w.f, w.x, w.ref, Coalition::FromString("10")),
              7.389056, 1e-6);
  EXPECT_NEAR(CoalitionValueMultiplicative(w.f, w.x, w.ref, Coalition::FromString("11")),
              kE, 1e-15);
  EXPECT_NEAR(CoalitionValueMultiplicative(w.f, w.x, w.ref, Coalition::FromString("00")),
              w.ref.multiplicative_baseline(), 1e-15);
}

TEST(ReferenceSetTest, BaselinesAndAmGm) {
  std::mt19937_64 rng(1);
  const auto f = InteractingModel(4, 2);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(30, 4, rng));
  ASSERT_TRUE(ref.has_multiplicative_baseline());
  EXPECT_LE(ref.multiplicative_baseline(), ref.additive_baseline());
  EXPECT_NEAR(std::log(ref.multiplicative_baseline()), ref.log_baseline(), 1e-15);
}

TEST(ReferenceSetTest, NonPositivePredictions) {
  const FunctionPredictor mult([](std::span<const double> x) { return x[0]; },
                               PredictionMode::kMultiplicative);
  const FunctionPredictor add([](std::span<const double> x) { return x[0]; },
                              PredictionMode::kAdditive);
  const DataTable t(3, 1, {1, -1, 2});
  EXPECT_THROW(ReferenceSet::Create(mult, t), NonPositiveError);
  const ReferenceSet ref = ReferenceSet::Create(add, t);
  EXPECT_FALSE(ref.has_multiplicative_baseline());
  EXPECT_NEAR(ref.additive_baseline(), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(ref.multiplicative_baseline(), NonPositiveError);
}

TEST(XShapTest, WorkedExample) {
  WorkedExample w;
  const auto e = XShapExplain(w.f, w.x, w.ref, EnumerateCoalitions(2, 2));
  EXPECT_NEAR(e.baseline, std::exp(1.5), 1e-12);
  EXPECT_NEAR(e.contributions[0], std::exp(0.5), 1e-12);
  EXPECT_NEAR(e.contributions[1], std::exp(-1.0), 1e-12);
  EXPECT_NEAR(e.prediction, kE, 1e-15);
  EXPECT_NEAR(e.baseline * e.contributions[0] * e.contributions[1], kE, 1e-14);
}

TEST(ExactTest, WorkedExampleMatchesClosedForm) {
  WorkedExample w;
  const auto exact = ExactMultiplicativeShapley(w.f, w.x, w.ref);
  EXPECT_NEAR(exact.contributions[0], std::exp(0.5), 1e-14);
  EXPECT_NEAR(exact.contributions[1], std::exp(-1.0), 1e-14);
  const auto closed = GlmClosedFormContributions(w.f, w.x, w.ref_table);
  EXPECT_NEAR(closed.baseline, std::exp(1.5), 1e-14);
  EXPECT_NEAR(closed.contributions[0], std::exp(0.5), 1e-14);
  EXPECT_NEAR(closed.contributions[1], std::exp(-1.0), 1e-14);
}

TEST(ExactTest, SingleFeatureGame) {
  const FunctionPredictor f(
      [](std::span<const double> x) { return 2.0 + x[0] * x[0]; },
      PredictionMode::kMultiplicative);
  const ReferenceSet ref = ReferenceSet::Create(f, DataTable(3, 1, {0, 1, 2}));
  const std::vector<double> x{3.0};
  const auto add = ExactAdditiveShapley(f, x, ref);
  EXPECT_EQ(add.contributions[0], 11.0 - ref.additive_baseline());
  const auto mult = ExactMultiplicativeShapley(f, x, ref);
  EXPECT_NEAR(mult.contributions[0], 11.0 / ref.multiplicative_baseline(), 1e-15);
}

TEST(ExactTest, SymmetricModelGivesEqualShares) {
  const FunctionPredictor f(
      [](std::span<const double> x) { return std::exp(x[0] * x[1] + x[0] + x[1]); },
      PredictionMode::kMultiplicative);
  // Reference rows symmetric under swapping the two columns.
  const ReferenceSet ref =
      ReferenceSet::Create(f, DataTable(4, 2, {0.1, 0.7, 0.7, 0.1, -1, 2, 2, -1}));
  const std::vector<double> x{0.4, 0.4};
  const auto add = ExactAdditiveShapley(f, x, ref);
  EXPECT_NEAR(add.contributions[0], add.contributions[1], 1e-12);
  const auto mult = ExactMultiplicativeShapley(f, x, ref);
  EXPECT_NEAR(mult.contributions[0], mult.contributions[1], 1e-12);
}

TEST(ExactTest, AdditiveLinearModel) {
  const std::vector<double> beta{1.5, -0.5};
  const FunctionPredictor f(
      [&](std::span<const double> x) { return beta[0] * x[0] + beta[1] * x[1]; },
      PredictionMode::kAdditive);
  const DataTable t(3, 2, {1, 2, 3, 5, -1, 0.5});
  const ReferenceSet ref = ReferenceSet::Create(f, t);
  const std::vector<double> x{0.25, 4.0};
  const auto e = ExactAdditiveShapley(f, x, ref);
  for (std::size_t j = 0; j < 2; ++j) {
    const double mean = (t.at(0, j) + t.at(1, j) + t.at(2, j)) / 3.0;
    EXPECT_NEAR(e.contributions[j], beta[j] * (x[j] - mean), 1e-12);
  }
}

TEST(ExactTest, TooManyFeatures) {
  const FunctionPredictor f([](std::span<const double>) { return 1.0; },
                            PredictionMode::kMultiplicative);
  std::mt19937_64 rng(3);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(2, 13, rng));
  const std::vector<double> x(13, 0.0);
  try {
    ExactMultiplicativeShapley(f, x, ref);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyFeatures);
  }
}

TEST(ExactTest, MatchesIndependentBruteForce) {
  std::mt19937_64 rng(4);
  for (std::size_t m = 1; m <= 7; ++m) {
    const auto f = InteractingModel(m, 100 + m);
    const DataTable t = RandomTable(7, m, rng);
    const ReferenceSet ref = ReferenceSet::Create(f, t);
    const DataTable xs = RandomTable(3, m, rng);
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      const auto x = xs.row(r);
      const auto add = ExactAdditiveShapley(f, x, ref);
      const auto add_oracle = BruteForceShapley(AsFunction(f), x, t);
      const auto mult = ExactMultiplicativeShapley(f, x, ref);
      const auto mult_oracle = BruteForceMultiplicative(AsFunction(f), x, t);
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_NEAR(add.contributions[j], add_oracle[j], 1e-12);
        EXPECT_LT(RelErr(mult.contributions[j], mult_oracle[j]), 1e-12);
      }
    }
  }
}

TEST(ExactTest, LogDuality) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + trial % 7;
    const auto f = InteractingModel(m, 200 + trial);
    const LogPredictor log_f(f);
    const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(10, m, rng));
    const ReferenceSet log_ref = ReferenceSet::Create(log_f, ref.table());
    const DataTable x = RandomTable(1, m, rng);
    const auto mult = ExactMultiplicativeShapley(f, x.row(0), ref);
    const auto add = ExactAdditiveShapley(log_f, x.row(0), log_ref);
    for (std::size_t j = 0; j < m; ++j) {
      EXPECT_NEAR(mult.contributions[j], std::exp(add.contributions[j]),
                  1e-12 * mult.contributions[j]);
    }
    EXPECT_NEAR(mult.baseline, std::exp(add.baseline), 1e-12 * mult.baseline);
  }
}

TEST(ExactTest, PreservingRatios) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 3 + trial % 4;
    const auto f = InteractingModel(m, 300 + trial);
    const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(8, m, rng));
    const DataTable x = RandomTable(1, m, rng);
    const auto full = ExactMultiplicativeShapley(f, x.row(0), ref);
    for (std::size_t j1 = 0; j1 < m; ++j1) {
      for (std::size_t j2 = j1 + 1; j2 < m; ++j2) {
        Coalition without_j2(m, true), without_j1(m, true);
        without_j2.set(j2, false);
        without_j1.set(j1, false);
        const auto sub2 = ExactMultiplicativeShapley(f, x.row(0), ref, without_j2);
        const auto sub1 = ExactMultiplicativeShapley(f, x.row(0), ref, without_j1);
        EXPECT_DOUBLE_EQ(sub2.contributions[j2], 1.0);
        const double lhs = full.contributions[j1] / sub2.contributions[j1];
        const double rhs = full.contributions[j2] / sub1.contributions[j2];
        EXPECT_LT(RelErr(lhs, rhs), 1e-10);
      }
    }
  }
}

TEST(EstimatorTest, OracleEquivalenceAtFullBudget) {
  std::mt19937_64 rng(7);
  for (std::size_t m = 2; m <= 8; ++m) {
    const auto f = InteractingModel(m, 400 + m);
    const LogPredictor log_f(f);
    const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(12, m, rng));
    const ReferenceSet log_ref = ReferenceSet::Create(log_f, ref.table());
    const CoalitionPlan plan = EnumerateCoalitions(m, 1u << m);
    const DataTable xs = RandomTable(2, m, rng);
    for (std::size_t r = 0; r < xs.rows(); ++r) {
      const auto x = xs.row(r);
      const auto est = XShapExplain(f, x, ref, plan);
      const auto oracle = BruteForceMultiplicative(AsFunction(f), x, ref.table());
      const auto kernel = KernelShapExplain(log_f, x, log_ref, plan);
      const auto add_oracle = BruteForceShapley(AsFunction(log_f), x, ref.table());
      for (std::size_t j = 0; j < m; ++j) {
        EXPECT_LT(RelErr(est.contributions[j], oracle[j]), 1e-8) << "m=" << m;
        EXPECT_NEAR(kernel.contributions[j], add_oracle[j], 1e-8) << "m=" << m;
      }
    }
  }
}

TEST(EstimatorTest, LinearModelRecoveredAtPartialBudget) {
  std::mt19937_64 rng(8);
  const std::vector<double> beta{0.5, -1.0, 2.0, 0.0, 0.75, -0.25};
  const FunctionPredictor f(
      [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) s += beta[j] * x[j];
        return s;
      },
      PredictionMode::kAdditive);
  const DataTable t = RandomTable(20, 6, rng);
  const ReferenceSet ref = ReferenceSet::Create(f, t);
  const DataTable x = RandomTable(1, 6, rng);
  const auto e = KernelShapExplain(f, x.row(0), ref, EnumerateCoalitions(6, 20));
  for (std::size_t j = 0; j < 6; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) mean += t.at(r, j);
    mean /= static_cast<double>(t.rows());
    EXPECT_NEAR(e.contributions[j], beta[j] * (x.at(0, j) - mean), 1e-8);
  }
}

TEST(EstimatorTest, LocalAccuracyAcrossBudgets) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 3 + trial % 8;
    const auto f = InteractingModel(m, 500 + trial);
    const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(15, m, rng));
    const std::size_t budget = m + 1 + static_cast<std::size_t>(trial) * 7;
    const CoalitionPlan plan = EnumerateCoalitions(m, budget);
    const DataTable x = RandomTable(1, m, rng);
    const auto e = XShapExplain(f, x.row(0), ref, plan);
    double product = e.baseline;
    for (double psi : e.contributions) {
      EXPECT_GT(psi, 0.0);
      product *= psi;
    }
    EXPECT_LT(RelErr(product, e.prediction), 1e-10);
    const auto a = KernelShapExplain(f, x.row(0), ref, plan);
    double sum = a.baseline;
    for (double phi : a.contributions) sum += phi;
    EXPECT_LE(std::abs(sum - a.prediction), 1e-10 * std::max(1.0, std::abs(a.prediction)));
  }
}

TEST(EstimatorTest, InessentialFeatureIsNeutralAtFullBudget) {
  std::mt19937_64 rng(10);
  const std::size_t m = 8;
  const auto inner = InteractingModel(m - 1, 600);
  const FunctionPredictor f(
      [&](std::span<const double> x) { return inner.PredictOne(x.first(m - 1)); },
      PredictionMode::kMultiplicative);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(10, m, rng));
  const DataTable x = RandomTable(3, m, rng);
  const CoalitionPlan plan = EnumerateCoalitions(m, 254);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto e = XShapExplain(f, x.row(r), ref, plan);
    EXPECT_NEAR(e.contributions[m - 1], 1.0, 1e-10);
    const auto a = KernelShapExplain(f, x.row(r), ref, plan);
    EXPECT_NEAR(a.contributions[m - 1], 0.0, 1e-10);
    const auto exact = ExactMultiplicativeShapley(f, x.row(r), ref);
    EXPECT_NEAR(exact.contributions[m - 1], 1.0, 1e-12);
  }
}

TEST(EstimatorTest, InessentialFeatureOfLogLinearModelAtAnyBudget) {
  std::mt19937_64 rng(15);
  const std::size_t m = 9;
  std::vector<double> beta{0.3, -0.4, 0.8, 0.1, -0.9, 0.5, 0.2, -0.6, 0.0};
  const LogGlm f(0.2, beta);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(25, m, rng));
  const DataTable x = RandomTable(4, m, rng, -2, 2);
  for (std::size_t budget = 2 * m; budget < 510; budget += 23) {
    const CoalitionPlan plan = EnumerateCoalitions(m, budget);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      const auto e = XShapExplain(f, x.row(r), ref, plan);
      EXPECT_NEAR(e.contributions[m - 1], 1.0, 1e-10) << "budget " << budget;
    }
  }
}

TEST(EstimatorTest, BudgetTooSmall) {
  const auto f = InteractingModel(4, 700);
  std::mt19937_64 rng(11);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(5, 4, rng));
  const DataTable x = RandomTable(1, 4, rng);
  try {
    XShapExplain(f, x.row(0), ref, EnumerateCoalitions(4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExplanation);
  }
}

TEST(EstimatorTest, RejectsMismatchedInputs) {
  const auto f = InteractingModel(3, 701);
  std::mt19937_64 rng(12);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(5, 3, rng));
  const std::vector<double> x{0.1, 0.2};
  EXPECT_THROW(XShapExplain(f, x, ref, EnumerateCoalitions(3, 6)), Error);
  const std::vector<double> x3{0.1, 0.2, 0.3};
  EXPECT_THROW(XShapExplain(f, x3, ref, EnumerateCoalitions(4, 6)), Error);
}

TEST(GlmClosedFormTest, Examples) {
  const LogGlm g(0.5, {0.0, 1.0});
  const DataTable t(2, 2, {1, 2, 3, 4});
  const std::vector<double> x{10, 3};  // x2 sits on its mean
  const auto e = GlmClosedFormContributions(g, x, t);
  EXPECT_DOUBLE_EQ(e.contributions[0], 1.0);
  EXPECT_DOUBLE_EQ(e.contributions[1], 1.0);
  EXPECT_NEAR(e.baseline, std::exp(0.5 + 3.0), 1e-12);
}

TEST(GlmClosedFormTest, ReconcilesWithOracleOnIndependentData) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 2 + trial % 7;
    std::vector<double> beta(m);
    for (double& b : beta) b = 0.5 * normal(rng);
    const LogGlm g(normal(rng), beta);
    DataTable t(50, m);
    for (std::size_t r = 0; r < 50; ++r) {
      for (std::size_t j = 0; j < m; ++j) t.at(r, j) = normal(rng);
    }
    const ReferenceSet ref = ReferenceSet::Create(g, t);
    const DataTable x = RandomTable(1, m, rng, -2, 2);
    const auto exact = ExactMultiplicativeShapley(g, x.row(0), ref);
    const auto closed = GlmClosedFormContributions(g, x.row(0), t);
    for (std::size_t j = 0; j < m; ++j) {
      EXPECT_LT(RelErr(exact.contributions[j], closed.contributions[j]), 1e-6);
    }
    EXPECT_LT(RelErr(exact.baseline, closed.baseline), 1e-8);
  }
}

TEST(ParallelTest, RowResultsIndependentOfJobs) {
  std::mt19937_64 rng(14);
  const std::size_t m = 6;
  const auto f = InteractingModel(m, 800);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(20, m, rng));
  const DataTable rows = RandomTable(25, m, rng);
  const CoalitionPlan plan = EnumerateCoalitions(m, 40);
  const auto serial = XShapExplainRows(f, rows, ref, plan, 1);
  const auto parallel = XShapExplainRows(f, rows, ref, plan, 4);
  ASSERT_EQ(serial.size(), rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    EXPECT_EQ(serial[r].contributions, parallel[r].contributions);
    EXPECT_EQ(serial[r].baseline, parallel[r].baseline);
    const auto single = XShapExplain(f, rows.row(r), ref, plan);
    EXPECT_EQ(single.contributions, serial[r].contributions);
  }
  const auto add1 = KernelShapExplainRows(f, rows, ref, plan, 1);
  const auto add3 = KernelShapExplainRows(f, rows, ref, plan, 3);
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    EXPECT_EQ(add1[r].contributions, add3[r].contributions);
  }
}

TEST(ParallelTest, FirstErrorByRowIsReported) {
  const FunctionPredictor f(
      [](std::span<const double> x) { return x[0] > 5 ? -1.0 : 1.0 + x[1] * x[1]; },
      PredictionMode::kMultiplicative);
  const ReferenceSet ref = ReferenceSet::Create(f, DataTable(2, 2, {0, 0, 1, 1}));
  const DataTable rows(4, 2, {0, 1, 0, 2, 9, 3, 9, 4});
  EXPECT_THROW(XShapExplainRows(f, rows, ref, EnumerateCoalitions(2, 2), 3),
               NonPositiveError);
}

}  // namespace
}  // namespace xshap
