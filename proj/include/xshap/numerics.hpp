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

#ifndef XSHAP_NUMERICS_HPP_
#define XSHAP_NUMERICS_HPP_

#include <optional>
#include <span>

#include <Eigen/Dense>

namespace xshap {

// Normal matrices with a condition estimate above this are rejected.
inline constexpr double kMaxConditionNumber = 1e12;

// (1/n) sum v_i, reduced left to right. Throws on empty or non-finite input.
double ArithmeticMean(std::span<const double> values);

// exp((1/n) sum ln v_i), reduced left to right in log space. Throws
// NonPositiveError carrying the index of the first entry <= 0.
double GeometricMean(std::span<const double> values);

// Mean of ln v_i, i.e. ln of the geometric mean, without the final exp.
double MeanLog(std::span<const double> values);

// Weighted least squares:
//   argmin_b sum_k w_k (response_k - design_k . b)^2
// optionally subject to sum_j b_j = sum_constraint.
struct WlsProblem {
  Eigen::MatrixXd design;    // K x p
  Eigen::VectorXd weights;   // K, strictly positive
  Eigen::VectorXd response;  // K
  std::optional<double> sum_constraint;
};

// Unconstrained solve through the weighted normal equations (C'WC) b = C'Wy
// with a Cholesky factorization. Throws RankDeficientError when C'WC is
// singular or its condition estimate exceeds kMaxConditionNumber.
Eigen::VectorXd SolveWls(const WlsProblem& problem);

// Equality-constrained solve. The last coefficient is eliminated through the
// constraint, the reduced problem is solved with SolveWls and the eliminated
// coefficient is recovered by back-substitution, so the coefficients sum to
// the constraint up to rounding of that final subtraction.
Eigen::VectorXd SolveWlsConstrained(const WlsProblem& problem);

}  // namespace xshap

#endif  // XSHAP_NUMERICS_HPP_
