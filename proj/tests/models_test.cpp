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

#include "xshap/models.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "xshap/error.hpp"
#include "xshap/external_model.hpp"

namespace xshap {
namespace {

using ::xshap::testing::RandomTable;

TEST(LogGlmTest, PredictExamples) {
  const LogGlm g(0.0, {1.0, 2.0});
  DataTable x(2, 2, {0, 0, 1, 0});
  const auto y = g.Predict(x);
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_NEAR(y[1], 2.718281828, 1e-9);

  const LogGlm flat(1.0, {0.0, 0.0, 0.0});
  std::mt19937_64 rng(1);
  for (double v : flat.Predict(RandomTable(20, 3, rng, -50, 50))) {
    EXPECT_DOUBLE_EQ(v, std::exp(1.0));
  }
}

TEST(LogGlmTest, FitRecoversNoiselessParameters) {
  std::mt19937_64 rng(2);
  const DataTable x = RandomTable(40, 2, rng, -2, 2);
  const LogGlm truth(0.3, {1.0, -2.0});
  const LogGlm fit = FitLogGlm(x, truth.Predict(x));
  EXPECT_NEAR(fit.alpha(), 0.3, 1e-8);
  EXPECT_NEAR(fit.betas()[0], 1.0, 1e-8);
  EXPECT_NEAR(fit.betas()[1], -2.0, 1e-8);
}

TEST(LogGlmTest, FitRecoversScaledColumns) {
  std::mt19937_64 rng(3);
  DataTable x = RandomTable(60, 3, rng, -1, 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    x.at(r, 0) = 1e4 + 1e3 * x.at(r, 0);
    x.at(r, 2) *= 1e-3;
  }
  const LogGlm truth(-2.0, {1e-3, 0.5, 200.0});
  const LogGlm fit = FitLogGlm(x, truth.Predict(x));
  EXPECT_NEAR(fit.alpha(), -2.0, 1e-6);
  EXPECT_NEAR(fit.betas()[0] / 1e-3, 1.0, 1e-8);
  EXPECT_NEAR(fit.betas()[1], 0.5, 1e-8);
  EXPECT_NEAR(fit.betas()[2] / 200.0, 1.0, 1e-8);
}

TEST(LogGlmTest, ConstantTarget) {
  std::mt19937_64 rng(4);
  const DataTable x = RandomTable(15, 3, rng);
  const std::vector<double> y(15, 7.5);
  const LogGlm fit = FitLogGlm(x, y);
  EXPECT_NEAR(fit.alpha(), std::log(7.5), 1e-10);
  for (double b : fit.betas()) EXPECT_NEAR(b, 0.0, 1e-10);
}

TEST(LogGlmTest, FitErrors) {
  std::mt19937_64 rng(5);
  const DataTable x = RandomTable(3, 3, rng);
  EXPECT_THROW(FitLogGlm(x, std::vector<double>{1, 2, 3}), RankDeficientError);
  const DataTable ok = RandomTable(6, 2, rng);
  EXPECT_THROW(FitLogGlm(ok, std::vector<double>{1, 2, 3, 0, 5, 6}),
               NonPositiveError);
  EXPECT_THROW(FitLogGlm(ok, std::vector<double>{1, 2}), Error);
}

TEST(GbtTest, ConstantTarget) {
  std::mt19937_64 rng(6);
  const DataTable x = RandomTable(30, 2, rng);
  const std::vector<double> y(30, 3.0);
  const TreeEnsemble model = FitGbt(x, y, {10, 3, 0.1});
  for (double v : model.Predict(x)) EXPECT_NEAR(v, 3.0, 1e-12);
}

TEST(GbtTest, SingleStumpFitsStepFunction) {
  std::mt19937_64 rng(7);
  DataTable x = RandomTable(50, 2, rng);
  std::vector<double> y(50);
  for (std::size_t r = 0; r < 50; ++r) y[r] = x.at(r, 0) < 0.2 ? 2.0 : 5.0;
  const TreeEnsemble model = FitGbt(x, y, {1, 1, 1.0});
  const auto pred = model.Predict(x);
  for (std::size_t r = 0; r < 50; ++r) EXPECT_NEAR(pred[r], y[r], 1e-10);

  // Hand-built equivalent: one split on feature 0 at the midpoint between the
  // largest value below 0.2 and the smallest value above it.
  double below = -1e300, above = 1e300, base = 0.0;
  for (std::size_t r = 0; r < 50; ++r) {
    const double v = x.at(r, 0);
    if (v < 0.2) below = std::max(below, v); else above = std::min(above, v);
    base += std::log(y[r]) / 50.0;
  }
  std::vector<TreeNode> nodes(3);
  nodes[0] = {0, 0.5 * (below + above), 1, 2, 0.0};
  nodes[1].value = std::log(2.0) - base;
  nodes[2].value = std::log(5.0) - base;
  const TreeEnsemble hand({RegressionTree(nodes)}, 1.0, base, true, 2);
  const auto expected = hand.Predict(x);
  for (std::size_t r = 0; r < 50; ++r) EXPECT_NEAR(pred[r], expected[r], 1e-12);
}

TEST(GbtTest, TrainingLossNonIncreasing) {
  std::mt19937_64 rng(8);
  const DataTable x = RandomTable(200, 4, rng);
  std::vector<double> y(200);
  std::normal_distribution<double> noise(0, 0.2);
  for (std::size_t r = 0; r < 200; ++r) {
    y[r] = std::exp(std::sin(3 * x.at(r, 0)) + x.at(r, 1) * x.at(r, 2) +
                    noise(rng));
  }
  const TreeEnsemble model = FitGbt(x, y, {40, 3, 0.3});
  const auto loss = GbtTrainingLoss(model, x, y);
  ASSERT_EQ(loss.size(), 41u);
  for (std::size_t k = 1; k < loss.size(); ++k) {
    EXPECT_LE(loss[k], loss[k - 1] + 1e-15) << "round " << k;
  }
  EXPECT_LT(loss.back(), 0.5 * loss.front());
}

TEST(PredictorTest, MultiplicativeOutputsPositiveAndDeterministic) {
  std::mt19937_64 rng(9);
  const DataTable train = RandomTable(100, 3, rng);
  std::vector<double> y(100);
  for (std::size_t r = 0; r < 100; ++r) y[r] = std::exp(train.at(r, 0));
  const TreeEnsemble gbt = FitGbt(train, y, {20, 2, 0.2});
  const LogGlm glm = FitLogGlm(train, y);
  for (int trial = 0; trial < 5; ++trial) {
    const DataTable probe = RandomTable(50, 3, rng, -100, 100);
    for (const Predictor* f : {static_cast<const Predictor*>(&gbt),
                               static_cast<const Predictor*>(&glm)}) {
      const auto a = f->Predict(probe);
      const auto b = f->Predict(probe);
      EXPECT_EQ(a, b);
      for (double v : a) EXPECT_GT(v, 0.0);
    }
  }
}

TEST(PredictorTest, PredictPositiveRejectsNonPositive) {
  const FunctionPredictor f(
      [](std::span<const double> x) { return x[0]; },
      PredictionMode::kMultiplicative);
  DataTable x(3, 1, {1.0, -2.0, 3.0});
  try {
    PredictPositive(f, x);
    FAIL();
  } catch (const NonPositiveError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.value(), -2.0);
  }
}

ExternalModel::Options Opts(std::chrono::milliseconds timeout =
                                std::chrono::milliseconds(10000)) {
  ExternalModel::Options o;
  o.timeout = timeout;
  return o;
}

std::string Stub(const std::string& args) {
  return std::string(XSHAP_STUB_MODEL) + " " + args;
}

TEST(ExternalModelTest, EchoStubClampsColumnZero) {
  ExternalModel model(Stub("echo"), Opts());
  DataTable x(4, 2, {0.5, 9, -3, 9, 0.05, 9, 12.25, 9});
  const auto y = model.Predict(x);
  EXPECT_EQ(y, (std::vector<double>{0.5, 0.1, 0.1, 12.25}));
  EXPECT_FALSE(model.parallel_safe());
  // The channel stays usable across requests.
  EXPECT_EQ(model.Predict(x), y);
}

TEST(ExternalModelTest, GlmStubMatchesInProcess) {
  const LogGlm glm(0.25, {0.1, -0.7, 1.3});
  ExternalModel model(Stub("glm 0.25 0.1 -0.7 1.3"), Opts());
  std::mt19937_64 rng(10);
  const DataTable x = RandomTable(64, 3, rng, -3, 3);
  EXPECT_EQ(model.Predict(x), glm.Predict(x));
}

TEST(ExternalModelTest, ShortReplyIsProtocolError) {
  ExternalModel model(Stub("short"), Opts());
  DataTable x(3, 1, {1, 2, 3});
  try {
    model.Predict(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExternalModel);
  }
}

TEST(ExternalModelTest, NegativeReplyIsNonPositive) {
  ExternalModel model(Stub("negative"), Opts());
  DataTable x(2, 1, {1, 2});
  EXPECT_THROW(model.Predict(x), NonPositiveError);
}

TEST(ExternalModelTest, NegativeReplyAllowedInAdditiveMode) {
  ExternalModel::Options o = Opts();
  o.mode = PredictionMode::kAdditive;
  ExternalModel model(Stub("negative"), o);
  DataTable x(2, 1, {1, 2});
  EXPECT_EQ(model.Predict(x), (std::vector<double>{-1.0, -1.0}));
}

TEST(ExternalModelTest, GarbageReplyIsProtocolError) {
  ExternalModel model(Stub("garbage"), Opts());
  DataTable x(1, 1, {1});
  try {
    model.Predict(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExternalModel);
  }
}

TEST(ExternalModelTest, BadHandshake) {
  try {
    ExternalModel model(Stub("badshake"), Opts());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExternalModel);
  }
}

TEST(ExternalModelTest, CrashCarriesDiagnostics) {
  ExternalModel model(Stub("crash"), Opts());
  DataTable x(1, 1, {1});
  try {
    model.Predict(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExternalModel);
    EXPECT_NE(std::string(e.what()).find("crashing on purpose"),
              std::string::npos)
        << e.what();
  }
  // A broken channel keeps failing instead of hanging.
  EXPECT_THROW(model.Predict(x), Error);
}

TEST(ExternalModelTest, MissingCommand) {
  EXPECT_THROW(ExternalModel("/nonexistent/model-binary", Opts()), Error);
}

TEST(ExternalModelTest, Timeout) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(ExternalModel("sleep 5", Opts(std::chrono::milliseconds(200))),
               Error);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(4));
}

}  // namespace
}  // namespace xshap
