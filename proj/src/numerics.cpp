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

#include "xshap/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "xshap/error.hpp"

namespace xshap {
namespace {

void CheckNonEmptyFinite(std::span<const double> values, const char* what) {
  if (values.empty()) ThrowInvalidArgument(std::string(what) + ": empty input");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      ThrowInvalidArgument(std::string(what) + ": non-finite value at index " +
                           std::to_string(i));
    }
  }
}

void CheckProblemShape(const WlsProblem& problem) {
  const auto k = problem.design.rows();
  if (problem.weights.size() != k || problem.response.size() != k) {
    ThrowShape("WLS: design has " + std::to_string(k) + " rows but " +
               std::to_string(problem.weights.size()) + " weights and " +
               std::to_string(problem.response.size()) + " responses");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(problem.weights[i] > 0.0) || !std::isfinite(problem.weights[i])) {
      ThrowInvalidArgument("WLS: weight " + std::to_string(i) +
                           " is not strictly positive");
    }
  }
}

}  // namespace

double ArithmeticMean(std::span<const double> values) {
  CheckNonEmptyFinite(values, "ArithmeticMean");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double MeanLog(std::span<const double> values) {
  if (values.empty()) ThrowInvalidArgument("GeometricMean: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NonPositiveError(i, v, "GeometricMean");
    }
    sum += std::log(v);
  }
  return sum / static_cast<double>(values.size());
}

double GeometricMean(std::span<const double> values) {
  return std::exp(MeanLog(values));
}

Eigen::VectorXd SolveWls(const WlsProblem& problem) {
  CheckProblemShape(problem);
  const auto p = problem.design.cols();
  if (p == 0) return Eigen::VectorXd();
  if (problem.design.rows() < p) {
    throw RankDeficientError(std::numeric_limits<double>::infinity(),
                             "WLS: " + std::to_string(problem.design.rows()) +
                                 " equations for " + std::to_string(p) +
                                 " unknowns");
  }

  const Eigen::MatrixXd weighted =
      problem.weights.asDiagonal() * problem.design;
  const Eigen::MatrixXd normal = problem.design.transpose() * weighted;
  const Eigen::VectorXd rhs = weighted.transpose() * problem.response;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(
      normal, Eigen::EigenvaluesOnly);
  const double largest = eigen.eigenvalues().maxCoeff();
  const double smallest = eigen.eigenvalues().minCoeff();
  const double condition = smallest > 0.0
                               ? largest / smallest
                               : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxConditionNumber)) {
    throw RankDeficientError(condition, "WLS");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) {
    throw RankDeficientError(condition, "WLS (Cholesky)");
  }
  return llt.solve(rhs);
}

Eigen::VectorXd SolveWlsConstrained(const WlsProblem& problem) {
  CheckProblemShape(problem);
  if (!problem.sum_constraint) {
    ThrowInvalidArgument("SolveWlsConstrained: no sum constraint given");
  }
  const double total = *problem.sum_constraint;
  const auto p = problem.design.cols();
  if (p == 0) ThrowInvalidArgument("SolveWlsConstrained: no coefficients");
  if (p == 1) return Eigen::VectorXd::Constant(1, total);

  // b_last = total - sum_{j<last} b_j, so column j becomes c_j - c_last and
  // the response loses total * c_last.
  const Eigen::VectorXd last = problem.design.col(p - 1);
  WlsProblem reduced;
  reduced.design = problem.design.leftCols(p - 1).colwise() - last;
  reduced.weights = problem.weights;
  reduced.response = problem.response - total * last;

  const Eigen::VectorXd head = SolveWls(reduced);
  Eigen::VectorXd out(p);
  out.head(p - 1) = head;
  double head_sum = 0.0;
  for (Eigen::Index j = 0; j < p - 1; ++j) head_sum += head[j];
  out[p - 1] = total - head_sum;
  return out;
}

}  // namespace xshap
