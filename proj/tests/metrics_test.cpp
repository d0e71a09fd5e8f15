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

#include "xshap/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "xshap/coalitions.hpp"
#include "xshap/error.hpp"
#include "xshap/explainers.hpp"
#include "xshap/numerics.hpp"

namespace xshap {
namespace {

using ::xshap::testing::RandomTable;
using ::xshap::testing::RelErr;

MultiplicativeExplanation Expl(double baseline, std::vector<double> psi) {
  double prediction = baseline;
  for (double v : psi) prediction *= v;
  return {baseline, std::move(psi), prediction};
}

// Batch of real explanations from a random log-interacting model.
ExplanationBatch RealBatch(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const FunctionPredictor f(
      [m](std::span<const double> x) {
        double eta = 0.0;
        for (std::size_t j = 0; j < m; ++j) eta += (0.3 + 0.1 * j) * x[j];
        return std::exp(eta + 0.4 * x[0] * x[m - 1]) + 0.2;
      },
      PredictionMode::kMultiplicative);
  const ReferenceSet ref = ReferenceSet::Create(f, RandomTable(20, m, rng));
  DataTable rows = RandomTable(n, m, rng);
  auto expl = XShapExplainRows(f, rows, ref, EnumerateCoalitions(m, 40), 1);
  return ExplanationBatch(std::move(expl), std::move(rows));
}

TEST(BatchTest, Validation) {
  EXPECT_THROW(ExplanationBatch({}, DataTable(0, 2)), Error);
  EXPECT_THROW(ExplanationBatch({Expl(1, {1, 2}), Expl(2, {1, 2})},
                                DataTable(2, 2, {0, 0, 0, 0})),
               Error);
  EXPECT_THROW(ExplanationBatch({Expl(1, {1, 2}), Expl(1, {1, 2, 3})},
                                DataTable(2, 2, {0, 0, 0, 0})),
               Error);
  EXPECT_THROW(ExplanationBatch({Expl(1, {1, 2})}, DataTable(2, 2, {0, 0, 0, 0})),
               Error);
}

TEST(GroupContributionTest, Examples) {
  const ExplanationBatch batch({Expl(1.5, {2, 0.5, 3}), Expl(1.5, {2, 2, 1}),
                                Expl(1.5, {2, 1, 7})},
                               DataTable(3, 3));
  const auto single = GroupContribution(batch, {{2}, "one"});
  const std::vector<double> expected{2, 1, 7};
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LT(RelErr(single[j], expected[j]), 1e-15);
  const auto pair = GroupContribution(batch, {{0, 1}, "pair"});
  EXPECT_NEAR(pair[0], 2.0, 1e-15);
  EXPECT_NEAR(pair[1], 1.0, 1e-15);
  EXPECT_THROW(GroupContribution(batch, {{}, "empty"}), Error);
  EXPECT_THROW(GroupContribution(batch, {{0, 0}, "dup"}), Error);
  EXPECT_THROW(GroupContribution(batch, {{3}, "range"}), Error);
}

TEST(GroupContributionTest, FullBatchHomomorphism) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ExplanationBatch batch = RealBatch(40, 5, seed);
    std::vector<std::size_t> all(batch.size());
    std::iota(all.begin(), all.end(), 0);
    const auto g = GroupContribution(batch, {all, "all"});
    double product = batch.baseline();
    for (double v : g) product *= v;
    EXPECT_LT(RelErr(product, GeometricMean(batch.predictions())), 1e-10);
  }
}

TEST(ImportanceTest, LocalExamples) {
  const auto imp = LocalImportance(Expl(2.0, {1.0, 0.5, 3.0}));
  EXPECT_EQ(imp, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(ImportanceTest, GlobalExamples) {
  const ExplanationBatch ones({Expl(1, {1, 1}), Expl(1, {1, 1})}, DataTable(2, 2));
  EXPECT_EQ(GlobalImportance(ones), (std::vector<double>{1, 1}));
  const ExplanationBatch mixed({Expl(1, {1, 0.25}), Expl(1, {4, 1})},
                               DataTable(2, 2));
  const auto imp = GlobalImportance(mixed);
  EXPECT_NEAR(imp[0], 2.0, 1e-15);
  EXPECT_NEAR(imp[1], 2.0, 1e-15);
}

TEST(ImportanceTest, DominatesGeometricMeans) {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const ExplanationBatch batch = RealBatch(30, 4, seed);
    const auto imp = GlobalImportance(batch);
    for (std::size_t j = 0; j < batch.num_features(); ++j) {
      auto psi = batch.contributions(j);
      EXPECT_GE(imp[j], 1.0);
      EXPECT_GE(imp[j] * (1 + 1e-15), GeometricMean(psi));
      for (double& v : psi) v = 1.0 / v;
      EXPECT_GE(imp[j] * (1 + 1e-15), GeometricMean(psi));
    }
  }
}

TEST(PartialDependenceTest, HandBuiltBatch) {
  // Feature 0 takes values 0..3; bins [0, 1.5) and [1.5, 3].
  // psi^0 = {2, 0.5, 4, 1}, predictions = {1, 2, 4, 8}:
  //   <Y> = 64^(1/4), <psi> = 4^(1/4), bin means 1 and 2, so PD = {2, 4}.
  std::vector<MultiplicativeExplanation> e;
  const std::vector<double> psi{2, 0.5, 4, 1};
  const std::vector<double> pred{1, 2, 4, 8};
  for (int i = 0; i < 4; ++i) {
    e.push_back({1.0, {psi[i], pred[i] / psi[i]}, pred[i]});
  }
  const ExplanationBatch batch(std::move(e), DataTable(4, 2, {0, 9, 1, 9, 2, 9, 3, 9}));
  const std::vector<double> edges{0, 1.5, 3};
  const PartialDependenceCurve pd = PartialDependence(batch, 0, edges);
  ASSERT_EQ(pd.values.size(), 2u);
  EXPECT_EQ(pd.counts, (std::vector<std::size_t>{2, 2}));
  EXPECT_NEAR(*pd.values[0], 2.0, 1e-14);
  EXPECT_NEAR(*pd.values[1], 4.0, 1e-14);
}

TEST(PartialDependenceTest, SingleBinCollapses) {
  const ExplanationBatch batch = RealBatch(30, 3, 20);
  const auto edges = EqualWidthEdges(batch, 1, 1);
  const auto pd = PartialDependence(batch, 1, edges);
  ASSERT_EQ(pd.values.size(), 1u);
  EXPECT_LT(RelErr(*pd.values[0], GeometricMean(batch.predictions())), 1e-12);
}

TEST(PartialDependenceTest, ConstantContributionIsFlat) {
  std::vector<MultiplicativeExplanation> e;
  DataTable obs(6, 2);
  for (int i = 0; i < 6; ++i) {
    e.push_back(Expl(2.0, {1.7, 0.5 + i}));
    obs.at(i, 0) = i;
  }
  const ExplanationBatch batch(std::move(e), std::move(obs));
  const auto pd = PartialDependence(batch, 0, EqualWidthEdges(batch, 0, 4));
  const double mean = GeometricMean(batch.predictions());
  for (const auto& v : pd.values) {
    ASSERT_TRUE(v.has_value());
    EXPECT_LT(RelErr(*v, mean), 1e-12);
  }
}

TEST(PartialDependenceTest, CountWeightedBinsRecombine) {
  const ExplanationBatch batch = RealBatch(60, 4, 21);
  const double mean_pred = GeometricMean(batch.predictions());
  for (std::size_t j = 0; j < batch.num_features(); ++j) {
    const double overall = GeometricMean(batch.contributions(j));
    const auto pd = PartialDependence(batch, j, EqualWidthEdges(batch, j, 7));
    double log_sum = 0.0;
    std::size_t total = 0;
    for (std::size_t b = 0; b < pd.values.size(); ++b) {
      if (!pd.values[b]) {
        EXPECT_EQ(pd.counts[b], 0u);
        continue;
      }
      const double bin_mean = *pd.values[b] / mean_pred * overall;
      log_sum += static_cast<double>(pd.counts[b]) * std::log(bin_mean);
      total += pd.counts[b];
    }
    EXPECT_EQ(total, batch.size());
    EXPECT_LT(RelErr(std::exp(log_sum / static_cast<double>(total)), overall), 1e-12);
  }
}

TEST(PartialDependenceTest, BadEdges) {
  const ExplanationBatch batch = RealBatch(10, 2, 22);
  EXPECT_THROW(PartialDependence(batch, 0, std::vector<double>{0, 0}), Error);
  EXPECT_THROW(PartialDependence(batch, 0, std::vector<double>{1}), Error);
  EXPECT_THROW(PartialDependence(batch, 5, std::vector<double>{-9, 9}), Error);
  // Observations outside the edges.
  EXPECT_THROW(PartialDependence(batch, 0, std::vector<double>{0.0, 0.1}), Error);
}

TEST(PartialDependenceTest, ConstantColumnEdges) {
  std::vector<MultiplicativeExplanation> e{Expl(1, {2}), Expl(1, {3})};
  const ExplanationBatch batch(std::move(e), DataTable(2, 1, {4, 4}));
  const auto edges = EqualWidthEdges(batch, 0, 3);
  EXPECT_EQ(edges.front(), 3.5);
  EXPECT_EQ(edges.back(), 4.5);
  const auto pd = PartialDependence(batch, 0, edges);
  EXPECT_EQ(pd.counts, (std::vector<std::size_t>{0, 2, 0}));
  EXPECT_FALSE(pd.values[0].has_value());
}

TEST(SummaryTest, BatchOfOne) {
  const ExplanationBatch batch({Expl(1, {0.5, 1.0, 3.0})},
                               DataTable(1, 3, {7, 8, 9}, {"a", "b", "c"}));
  const auto summary = SummaryData(batch);
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0].name, "c");
  EXPECT_EQ(summary[1].name, "a");
  EXPECT_EQ(summary[2].name, "b");
  for (const auto& s : summary) ASSERT_EQ(s.points.size(), 1u);
  EXPECT_EQ(summary[0].points[0], (std::pair<double, double>{9.0, 3.0}));
}

TEST(SummaryTest, OrderingMatchesImportance) {
  const ExplanationBatch batch = RealBatch(30, 5, 23);
  const auto imp = GlobalImportance(batch);
  const auto summary = SummaryData(batch);
  std::vector<double> sorted(imp);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t k = 0; k < summary.size(); ++k) {
    EXPECT_EQ(summary[k].importance, imp[summary[k].feature]);
    EXPECT_EQ(summary[k].importance, sorted[k]);
  }
}

TEST(SummaryTest, TrimDropsOutliersOnly) {
  const ExplanationBatch batch = RealBatch(100, 3, 24);
  const auto full = SummaryData(batch);
  const auto trimmed = SummaryData(batch, 0.05);
  for (std::size_t k = 0; k < full.size(); ++k) {
    EXPECT_EQ(full[k].points.size(), batch.size());
    EXPECT_LT(trimmed[k].points.size(), full[k].points.size());
    EXPECT_EQ(full[k].importance, trimmed[k].importance);
  }
  EXPECT_THROW(SummaryData(batch, 0.6), Error);
}

TEST(MetricsTest, OrderInvariance) {
  const ExplanationBatch batch = RealBatch(25, 4, 25);
  std::vector<std::size_t> perm(batch.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(26);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<MultiplicativeExplanation> shuffled;
  for (std::size_t i : perm) shuffled.push_back(batch.explanations()[i]);
  const ExplanationBatch other(std::move(shuffled), batch.observations().select_rows(perm));

  const auto a = GlobalImportance(batch);
  const auto b = GlobalImportance(other);
  std::vector<std::size_t> all(batch.size());
  std::iota(all.begin(), all.end(), 0);
  const auto ga = GroupContribution(batch, {all, "all"});
  const auto gb = GroupContribution(other, {all, "all"});
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_LT(RelErr(a[j], b[j]), 1e-12);
    EXPECT_LT(RelErr(ga[j], gb[j]), 1e-12);
    const auto edges = EqualWidthEdges(batch, j, 5);
    EXPECT_EQ(edges, EqualWidthEdges(other, j, 5));
    const auto pa = PartialDependence(batch, j, edges);
    const auto pb = PartialDependence(other, j, edges);
    EXPECT_EQ(pa.counts, pb.counts);
    for (std::size_t k = 0; k < pa.values.size(); ++k) {
      if (pa.values[k]) EXPECT_LT(RelErr(*pa.values[k], *pb.values[k]), 1e-12);
    }
  }
}

}  // namespace
}  // namespace xshap
