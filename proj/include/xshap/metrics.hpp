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

#ifndef XSHAP_METRICS_HPP_
#define XSHAP_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xshap/data_table.hpp"
#include "xshap/explainers.hpp"

namespace xshap {

// Multiplicative explanations of the rows of `observations`, sharing one
// feature count and one baseline.
class ExplanationBatch {
 public:
  ExplanationBatch(std::vector<MultiplicativeExplanation> explanations,
                   DataTable observations);

  std::size_t size() const { return explanations_.size(); }
  std::size_t num_features() const { return observations_.cols(); }
  double baseline() const { return explanations_.front().baseline; }

  const std::vector<MultiplicativeExplanation>& explanations() const {
    return explanations_;
  }
  const DataTable& observations() const { return observations_; }

  // psi_j over the whole batch, in batch order.
  std::vector<double> contributions(std::size_t feature) const;
  std::vector<double> predictions() const;

 private:
  std::vector<MultiplicativeExplanation> explanations_;
  DataTable observations_;
};

struct GroupSpec {
  std::vector<std::size_t> members;
  std::string label;
};

// Geometric mean of each feature's contribution over the group members.
std::vector<double> GroupContribution(const ExplanationBatch& batch,
                                      const GroupSpec& group);

// max(psi, 1/psi) per feature.
std::vector<double> LocalImportance(const MultiplicativeExplanation& e);

// Geometric mean of the local importances over the batch.
std::vector<double> GlobalImportance(const ExplanationBatch& batch);

struct PartialDependenceCurve {
  std::size_t feature = 0;
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::optional<double>> values;  // nullopt for empty bins
  std::vector<std::size_t> counts;
};

// Bin b holds rows with edges[b] <= x_j < edges[b+1]; the last bin also
// takes x_j == edges.back(). For non-empty bins:
//   PD(b) = gmean(psi_j in b) / gmean(psi_j) * gmean(predictions).
PartialDependenceCurve PartialDependence(const ExplanationBatch& batch,
                                         std::size_t feature,
                                         std::span<const double> edges);

// Equal-width edges over the observed range of the feature.
std::vector<double> EqualWidthEdges(const ExplanationBatch& batch,
                                    std::size_t feature, std::size_t bins);

inline constexpr std::size_t kDefaultPdBins = 25;

struct FeatureSummary {
  std::size_t feature = 0;
  std::string name;
  double importance = 1.0;
  // (feature value, contribution) in batch order.
  std::vector<std::pair<double, double>> points;
};

// Per-feature scatter data, features sorted by descending global importance
// (ties by feature index). With trim_quantile q in (0, 0.5), points whose
// contribution falls outside the [q, 1-q] quantiles of that feature are left
// out of `points`; importance always uses every row.
std::vector<FeatureSummary> SummaryData(
    const ExplanationBatch& batch,
    std::optional<double> trim_quantile = std::nullopt);

}  // namespace xshap

#endif  // XSHAP_METRICS_HPP_
