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

#ifndef XSHAP_MODELS_HPP_
#define XSHAP_MODELS_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xshap/data_table.hpp"

namespace xshap {

enum class PredictionMode { kMultiplicative, kAdditive };

// A deterministic batch prediction function. Identical input tables must give
// bitwise identical outputs. In multiplicative mode every output is > 0.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::vector<double> Predict(const DataTable& rows) const = 0;
  virtual PredictionMode mode() const = 0;
  // False when calls are funneled through a single channel.
  virtual bool parallel_safe() const { return true; }

  double PredictOne(std::span<const double> x) const;
};

// Predict() followed by the positivity check used at every explainer
// boundary.
std::vector<double> PredictPositive(const Predictor& f, const DataTable& rows);

class FunctionPredictor : public Predictor {
 public:
  using RowFunction = std::function<double(std::span<const double>)>;

  FunctionPredictor(RowFunction fn, PredictionMode mode)
      : fn_(std::move(fn)), mode_(mode) {}

  std::vector<double> Predict(const DataTable& rows) const override;
  PredictionMode mode() const override { return mode_; }

 private:
  RowFunction fn_;
  PredictionMode mode_;
};

// ln(f(x)) of a strictly positive predictor, in additive mode.
class LogPredictor : public Predictor {
 public:
  explicit LogPredictor(const Predictor& base) : base_(base) {}

  std::vector<double> Predict(const DataTable& rows) const override;
  PredictionMode mode() const override { return PredictionMode::kAdditive; }
  bool parallel_safe() const override { return base_.parallel_safe(); }

 private:
  const Predictor& base_;
};

// y = exp(alpha) * prod_j exp(beta_j x_j)
class LogGlm : public Predictor {
 public:
  LogGlm(double alpha, std::vector<double> betas)
      : alpha_(alpha), betas_(std::move(betas)) {}

  double alpha() const { return alpha_; }
  const std::vector<double>& betas() const { return betas_; }
  std::size_t num_features() const { return betas_.size(); }

  std::vector<double> Predict(const DataTable& rows) const override;
  PredictionMode mode() const override {
    return PredictionMode::kMultiplicative;
  }

 private:
  double alpha_;
  std::vector<double> betas_;
};

// Least squares of ln(y) on the features with an intercept. Columns are
// standardized internally so raw feature scale does not hit the condition
// threshold.
LogGlm FitLogGlm(const DataTable& features, std::span<const double> target);

struct TreeNode {
  // Leaf when feature < 0. Rows with x[feature] < threshold go left.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

class RegressionTree {
 public:
  explicit RegressionTree(std::vector<TreeNode> nodes)
      : nodes_(std::move(nodes)) {}

  double Evaluate(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

class TreeEnsemble : public Predictor {
 public:
  TreeEnsemble(std::vector<RegressionTree> trees, double learning_rate,
               double base_score, bool log_target, std::size_t num_features);

  // base_score + learning_rate * sum of tree outputs.
  double RawScore(std::span<const double> x) const;

  std::vector<double> Predict(const DataTable& rows) const override;
  PredictionMode mode() const override {
    return log_target_ ? PredictionMode::kMultiplicative
                       : PredictionMode::kAdditive;
  }

  const std::vector<RegressionTree>& trees() const { return trees_; }
  double learning_rate() const { return learning_rate_; }
  double base_score() const { return base_score_; }
  bool log_target() const { return log_target_; }
  std::size_t num_features() const { return num_features_; }

 private:
  std::vector<RegressionTree> trees_;
  double learning_rate_;
  double base_score_;
  bool log_target_;
  std::size_t num_features_;
};

struct GbtOptions {
  std::size_t num_trees = 100;
  std::size_t max_depth = 3;
  double learning_rate = 0.1;
};

// Gradient boosting with squared error on ln(y). Splits are found by exact
// greedy search over midpoints between sorted unique feature values.
TreeEnsemble FitGbt(const DataTable& features, std::span<const double> target,
                    const GbtOptions& options = {});

// Mean squared error of the raw score against ln(y) after each boosting round
// (entry 0 is the base score alone).
std::vector<double> GbtTrainingLoss(const TreeEnsemble& model,
                                    const DataTable& features,
                                    std::span<const double> target);

}  // namespace xshap

#endif  // XSHAP_MODELS_HPP_
