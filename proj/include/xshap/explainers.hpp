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

#ifndef XSHAP_EXPLAINERS_HPP_
#define XSHAP_EXPLAINERS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "xshap/coalitions.hpp"
#include "xshap/data_table.hpp"
#include "xshap/models.hpp"

namespace xshap {

// Largest feature count accepted by the brute-force oracles (2^m sweeps).
inline constexpr std::size_t kMaxExactFeatures = 12;

// Reference sample used to "remove" features, with the model's predictions
// on it computed once.
class ReferenceSet {
 public:
  // Evaluates f on every reference row. The geometric baseline is only
  // available when all of those predictions are strictly positive.
  static ReferenceSet Create(const Predictor& f, DataTable table);

  const DataTable& table() const { return table_; }
  const std::vector<double>& predictions() const { return predictions_; }
  std::size_t num_features() const { return table_.cols(); }

  // Arithmetic mean of the reference predictions.
  double additive_baseline() const { return additive_baseline_; }

  bool has_multiplicative_baseline() const { return mean_log_.has_value(); }
  // Geometric mean of the reference predictions. Throws NonPositiveError if
  // some reference prediction was <= 0.
  double multiplicative_baseline() const;
  // ln of the geometric mean.
  double log_baseline() const;

 private:
  ReferenceSet() = default;

  DataTable table_;
  std::vector<double> predictions_;
  double additive_baseline_ = 0.0;
  std::optional<double> mean_log_;
  std::size_t bad_index_ = 0;
  double bad_value_ = 0.0;
};

struct AdditiveExplanation {
  double baseline = 0.0;
  std::vector<double> contributions;
  double prediction = 0.0;
};

struct MultiplicativeExplanation {
  double baseline = 1.0;
  std::vector<double> contributions;
  double prediction = 1.0;
};

// Rows of the reference table with the active features of `c` overwritten by
// the observation x.
DataTable BuildPerturbedDataset(std::span<const double> x,
                                const DataTable& reference,
                                const Coalition& c);

// Arithmetic mean of f over the perturbed dataset.
double CoalitionValueAdditive(const Predictor& f, std::span<const double> x,
                              const ReferenceSet& ref, const Coalition& c);

// Geometric mean of f over the perturbed dataset.
double CoalitionValueMultiplicative(const Predictor& f,
                                    std::span<const double> x,
                                    const ReferenceSet& ref,
                                    const Coalition& c);

// Kernel SHAP: constrained weighted regression of the coalition gaps
// value(c) - phi0 on the coalition masks, with the contributions forced to
// sum to f(x) - phi0.
AdditiveExplanation KernelShapExplain(const Predictor& f,
                                      std::span<const double> x,
                                      const ReferenceSet& ref,
                                      const CoalitionPlan& plan);

// X-SHAP: the same regression on ln(value(c) / psi0) with geometric
// coalition values, constrained to sum to ln(f(x) / psi0); contributions are
// the exponentiated coefficients so psi0 * prod(psi) == f(x).
MultiplicativeExplanation XShapExplain(const Predictor& f,
                                       std::span<const double> x,
                                       const ReferenceSet& ref,
                                       const CoalitionPlan& plan);

// Brute-force Shapley values over all 2^m coalitions. m <= kMaxExactFeatures.
AdditiveExplanation ExactAdditiveShapley(const Predictor& f,
                                         std::span<const double> x,
                                         const ReferenceSet& ref);

// Brute-force multiplicative Shapley values:
//   psi_j = exp(sum_{c without j} w(|c|) (ln f_{c+j} - ln f_c))
MultiplicativeExplanation ExactMultiplicativeShapley(
    const Predictor& f, std::span<const double> x, const ReferenceSet& ref);

// Exact values of the subgame restricted to `players`: features outside it
// always take reference values and get the neutral contribution (0 or 1).
// The baseline and prediction are those of the subgame (coalitions empty and
// equal to `players`).
AdditiveExplanation ExactAdditiveShapley(const Predictor& f,
                                         std::span<const double> x,
                                         const ReferenceSet& ref,
                                         const Coalition& players);
MultiplicativeExplanation ExactMultiplicativeShapley(
    const Predictor& f, std::span<const double> x, const ReferenceSet& ref,
    const Coalition& players);

// Closed form for a log-GLM:
//   psi_j = exp(beta_j (x_j - mean(X_j))),
//   psi0  = exp(alpha) prod_j exp(beta_j mean(X_j)).
MultiplicativeExplanation GlmClosedFormContributions(
    const LogGlm& glm, std::span<const double> x, const DataTable& data);

enum class ExplainMethod { kXShap, kKernelShap };

// Explains every row of `rows` on up to `jobs` threads. Results are in row
// order and do not depend on the thread count. Non parallel-safe predictors
// run on the calling thread.
std::vector<MultiplicativeExplanation> XShapExplainRows(
    const Predictor& f, const DataTable& rows, const ReferenceSet& ref,
    const CoalitionPlan& plan, std::size_t jobs);
std::vector<AdditiveExplanation> KernelShapExplainRows(
    const Predictor& f, const DataTable& rows, const ReferenceSet& ref,
    const CoalitionPlan& plan, std::size_t jobs);

}  // namespace xshap

#endif  // XSHAP_EXPLAINERS_HPP_
