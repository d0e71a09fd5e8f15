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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xshap/error.hpp"
#include "xshap/numerics.hpp"

namespace xshap {
namespace {

void CheckColumns(const DataTable& rows, std::size_t expected,
                  const char* who) {
  if (rows.cols() != expected) {
    ThrowShape(std::string(who) + ": expected " + std::to_string(expected) +
               " columns, got " + std::to_string(rows.cols()));
  }
}

std::vector<double> LogTarget(const DataTable& features,
                              std::span<const double> target) {
  if (target.size() != features.rows()) {
    ThrowShape("target has " + std::to_string(target.size()) +
               " entries for " + std::to_string(features.rows()) + " rows");
  }
  std::vector<double> out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!(target[i] > 0.0) || !std::isfinite(target[i])) {
      throw NonPositiveError(i, target[i], "target");
    }
    out[i] = std::log(target[i]);
  }
  return out;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const DataTable& x, const std::vector<double>& residual,
              std::size_t max_depth)
      : x_(x), residual_(residual), max_depth_(max_depth) {}

  RegressionTree Build() {
    std::vector<std::size_t> all(x_.rows());
    std::iota(all.begin(), all.end(), 0);
    Grow(all, 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  int Grow(const std::vector<std::size_t>& idx, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (std::size_t i : idx) sum += residual_[i];
    nodes_[id].value = sum / static_cast<double>(idx.size());
    if (depth >= max_depth_ || idx.size() < 2) return id;

    const SplitChoice split = BestSplit(idx, sum);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (x_.at(i, split.feature) < split.threshold ? left : right).push_back(i);
    }
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const int l = Grow(left, depth + 1);
    const int r = Grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  SplitChoice BestSplit(const std::vector<std::size_t>& idx,
                        double total) const {
    const double n = static_cast<double>(idx.size());
    const double parent = total * total / n;
    double scale = 0.0;
    for (std::size_t i : idx) scale += residual_[i] * residual_[i];
    const double min_gain = 1e-14 * scale;

    SplitChoice best;
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return x_.at(a, f) < x_.at(b, f);
                       });
      double left_sum = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left_sum += residual_[order[k]];
        const double lo = x_.at(order[k], f);
        const double hi = x_.at(order[k + 1], f);
        if (!(lo < hi)) continue;
        const double nl = static_cast<double>(k + 1);
        const double nr = n - nl;
        const double right_sum = total - left_sum;
        const double gain =
            left_sum * left_sum / nl + right_sum * right_sum / nr - parent;
        if (gain > best.gain && gain > min_gain) {
          best.feature = static_cast<int>(f);
          best.threshold = lo + (hi - lo) / 2.0;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const DataTable& x_;
  const std::vector<double>& residual_;
  std::size_t max_depth_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double Predictor::PredictOne(std::span<const double> x) const {
  DataTable one(1, x.size(), std::vector<double>(x.begin(), x.end()));
  return Predict(one).at(0);
}

std::vector<double> PredictPositive(const Predictor& f, const DataTable& rows) {
  std::vector<double> out = f.Predict(rows);
  if (out.size() != rows.rows()) {
    throw Error(ErrorCode::kExternalModel,
                "predictor returned " + std::to_string(out.size()) +
                    " values for " + std::to_string(rows.rows()) + " rows");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) {
      throw NonPositiveError(i, out[i], "prediction");
    }
  }
  return out;
}

std::vector<double> FunctionPredictor::Predict(const DataTable& rows) const {
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = fn_(rows.row(r));
  return out;
}

std::vector<double> LogPredictor::Predict(const DataTable& rows) const {
  std::vector<double> out = PredictPositive(base_, rows);
  for (double& v : out) v = std::log(v);
  return out;
}

std::vector<double> LogGlm::Predict(const DataTable& rows) const {
  CheckColumns(rows, betas_.size(), "LogGlm");
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    double eta = alpha_;
    auto x = rows.row(r);
    for (std::size_t j = 0; j < betas_.size(); ++j) eta += betas_[j] * x[j];
    out[r] = std::exp(eta);
  }
  return out;
}

LogGlm FitLogGlm(const DataTable& features, std::span<const double> target) {
  const std::vector<double> log_y = LogTarget(features, target);
  const std::size_t n = features.rows();
  const std::size_t m = features.cols();
  if (n < m + 1) {
    throw RankDeficientError(std::numeric_limits<double>::infinity(),
                             "FitLogGlm: " + std::to_string(n) +
                                 " rows for " + std::to_string(m + 1) +
                                 " parameters");
  }

  std::vector<double> center(m), scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> col = features.column(j);
    center[j] = ArithmeticMean(col);
    double ss = 0.0;
    for (double v : col) ss += (v - center[j]) * (v - center[j]);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    scale[j] = sd > 0.0 ? sd : 1.0;
  }

  WlsProblem problem;
  problem.design.resize(n, m + 1);
  problem.weights = Eigen::VectorXd::Ones(n);
  problem.response.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    problem.design(i, 0) = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      problem.design(i, j + 1) = (features.at(i, j) - center[j]) / scale[j];
    }
    problem.response[i] = log_y[i];
  }
  const Eigen::VectorXd coef = SolveWls(problem);

  std::vector<double> betas(m);
  double alpha = coef[0];
  for (std::size_t j = 0; j < m; ++j) {
    betas[j] = coef[j + 1] / scale[j];
    alpha -= betas[j] * center[j];
  }
  return LogGlm(alpha, std::move(betas));
}

double RegressionTree::Evaluate(std::span<const double> x) const {
  int id = 0;
  while (nodes_[id].feature >= 0) {
    const TreeNode& node = nodes_[id];
    id = x[node.feature] < node.threshold ? node.left : node.right;
  }
  return nodes_[id].value;
}

TreeEnsemble::TreeEnsemble(std::vector<RegressionTree> trees,
                           double learning_rate, double base_score,
                           bool log_target, std::size_t num_features)
    : trees_(std::move(trees)),
      learning_rate_(learning_rate),
      base_score_(base_score),
      log_target_(log_target),
      num_features_(num_features) {}

double TreeEnsemble::RawScore(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees_) sum += tree.Evaluate(x);
  return base_score_ + learning_rate_ * sum;
}

std::vector<double> TreeEnsemble::Predict(const DataTable& rows) const {
  CheckColumns(rows, num_features_, "TreeEnsemble");
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double raw = RawScore(rows.row(r));
    out[r] = log_target_ ? std::exp(raw) : raw;
  }
  return out;
}

TreeEnsemble FitGbt(const DataTable& features, std::span<const double> target,
                    const GbtOptions& options) {
  if (options.num_trees < 1 || options.max_depth < 1) {
    ThrowInvalidArgument("FitGbt: need at least one tree of depth >= 1");
  }
  if (!(options.learning_rate > 0.0)) {
    ThrowInvalidArgument("FitGbt: learning rate must be positive");
  }
  const std::vector<double> log_y = LogTarget(features, target);
  if (log_y.empty()) ThrowInvalidArgument("FitGbt: empty training set");

  const double base = ArithmeticMean(log_y);
  std::vector<double> raw(log_y.size(), base);
  std::vector<double> residual(log_y.size());
  std::vector<RegressionTree> trees;
  trees.reserve(options.num_trees);
  for (std::size_t t = 0; t < options.num_trees; ++t) {
    for (std::size_t i = 0; i < raw.size(); ++i) residual[i] = log_y[i] - raw[i];
    RegressionTree tree =
        TreeBuilder(features, residual, options.max_depth).Build();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] += options.learning_rate * tree.Evaluate(features.row(i));
    }
    trees.push_back(std::move(tree));
  }
  return TreeEnsemble(std::move(trees), options.learning_rate, base,
                      /*log_target=*/true, features.cols());
}

std::vector<double> GbtTrainingLoss(const TreeEnsemble& model,
                                    const DataTable& features,
                                    std::span<const double> target) {
  const std::vector<double> log_y = LogTarget(features, target);
  std::vector<double> raw(log_y.size(), model.base_score());
  std::vector<double> losses;
  auto mse = [&] {
    double ss = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      ss += (log_y[i] - raw[i]) * (log_y[i] - raw[i]);
    }
    return ss / static_cast<double>(raw.size());
  };
  losses.push_back(mse());
  for (const auto& tree : model.trees()) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] += model.learning_rate() * tree.Evaluate(features.row(i));
    }
    losses.push_back(mse());
  }
  return losses;
}

}  // namespace xshap
