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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xshap/error.hpp"
#include "xshap/numerics.hpp"

namespace xshap {

ExplanationBatch::ExplanationBatch(
    std::vector<MultiplicativeExplanation> explanations,
    DataTable observations)
    : explanations_(std::move(explanations)),
      observations_(std::move(observations)) {
  if (explanations_.empty()) {
    ThrowInvalidArgument("explanation batch is empty");
  }
  if (observations_.rows() != explanations_.size()) {
    ThrowShape("batch has " + std::to_string(explanations_.size()) +
               " explanations but " + std::to_string(observations_.rows()) +
               " observation rows");
  }
  const double baseline = explanations_.front().baseline;
  for (const auto& e : explanations_) {
    if (e.contributions.size() != observations_.cols()) {
      ThrowShape("explanation width differs from observation width");
    }
    if (e.baseline != baseline) {
      ThrowInvalidArgument("explanations in a batch must share one baseline");
    }
  }
}

std::vector<double> ExplanationBatch::contributions(std::size_t feature) const {
  std::vector<double> out(explanations_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = explanations_[i].contributions.at(feature);
  }
  return out;
}

std::vector<double> ExplanationBatch::predictions() const {
  std::vector<double> out(explanations_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = explanations_[i].prediction;
  }
  return out;
}

std::vector<double> GroupContribution(const ExplanationBatch& batch,
                                      const GroupSpec& group) {
  if (group.members.empty()) {
    ThrowInvalidArgument("group '" + group.label + "' has no members");
  }
  std::vector<std::size_t> sorted(group.members);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    ThrowInvalidArgument("group '" + group.label + "' repeats a member");
  }
  if (sorted.back() >= batch.size()) {
    ThrowInvalidArgument("group '" + group.label + "' member " +
                         std::to_string(sorted.back()) + " out of range");
  }
  std::vector<double> out(batch.num_features());
  std::vector<double> values(group.members.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t k = 0; k < group.members.size(); ++k) {
      values[k] = batch.explanations()[group.members[k]].contributions[j];
    }
    out[j] = GeometricMean(values);
  }
  return out;
}

std::vector<double> LocalImportance(const MultiplicativeExplanation& e) {
  std::vector<double> out(e.contributions.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double psi = e.contributions[j];
    out[j] = std::max(1.0 / psi, psi);
  }
  return out;
}

std::vector<double> GlobalImportance(const ExplanationBatch& batch) {
  const std::size_t m = batch.num_features();
  std::vector<std::vector<double>> local(m,
                                         std::vector<double>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::vector<double> imp = LocalImportance(batch.explanations()[i]);
    for (std::size_t j = 0; j < m; ++j) local[j][i] = imp[j];
  }
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    // Every local importance is >= 1; rounding in exp/log must not leak
    // below that.
    out[j] = std::max(1.0, GeometricMean(local[j]));
  }
  return out;
}

std::vector<double> EqualWidthEdges(const ExplanationBatch& batch,
                                    std::size_t feature, std::size_t bins) {
  if (bins < 1) ThrowInvalidArgument("partial dependence needs >= 1 bin");
  if (feature >= batch.num_features()) {
    ThrowInvalidArgument("feature index " + std::to_string(feature) +
                         " out of range");
  }
  const std::vector<double> col = batch.observations().column(feature);
  auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    edges[b] = lo + width * static_cast<double>(b);
  }
  edges[bins] = hi;
  return edges;
}

PartialDependenceCurve PartialDependence(const ExplanationBatch& batch,
                                         std::size_t feature,
                                         std::span<const double> edges) {
  if (feature >= batch.num_features()) {
    ThrowInvalidArgument("feature index " + std::to_string(feature) +
                         " out of range");
  }
  if (edges.size() < 2) ThrowInvalidArgument("need at least two bin edges");
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    if (!(edges[b] < edges[b + 1])) {
      ThrowInvalidArgument("bin edges must be strictly increasing");
    }
  }
  const std::size_t bins = edges.size() - 1;
  const std::vector<double> psi = batch.contributions(feature);
  const DataTable& obs = batch.observations();

  std::vector<std::vector<double>> members(bins);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double v = obs.at(i, feature);
    if (v < edges.front() || v > edges.back()) {
      ThrowInvalidArgument("value " + std::to_string(v) + " of row " +
                           std::to_string(i) + " lies outside the bin edges");
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t b = static_cast<std::size_t>(it - edges.begin());
    b = b == 0 ? 0 : b - 1;
    if (b >= bins) b = bins - 1;
    members[b].push_back(psi[i]);
  }

  const double log_all = MeanLog(psi);
  const double log_pred = MeanLog(batch.predictions());

  PartialDependenceCurve curve;
  curve.feature = feature;
  curve.edges.assign(edges.begin(), edges.end());
  curve.values.resize(bins);
  curve.counts.resize(bins);
  bool any = false;
  for (std::size_t b = 0; b < bins; ++b) {
    curve.counts[b] = members[b].size();
    if (members[b].empty()) continue;
    any = true;
    curve.values[b] = std::exp(MeanLog(members[b]) - log_all + log_pred);
  }
  if (!any) ThrowInvalidArgument("every partial dependence bin is empty");
  return curve;
}

std::vector<FeatureSummary> SummaryData(const ExplanationBatch& batch,
                                        std::optional<double> trim_quantile) {
  if (trim_quantile && !(*trim_quantile >= 0.0 && *trim_quantile < 0.5)) {
    ThrowInvalidArgument("trim quantile must lie in [0, 0.5)");
  }
  const std::vector<double> importance = GlobalImportance(batch);
  const std::size_t m = batch.num_features();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return importance[a] > importance[b];
                   });

  const DataTable& obs = batch.observations();
  std::vector<FeatureSummary> out;
  out.reserve(m);
  for (std::size_t j : order) {
    FeatureSummary s;
    s.feature = j;
    s.name = obs.names()[j];
    s.importance = importance[j];
    const std::vector<double> psi = batch.contributions(j);
    double lo = -INFINITY;
    double hi = INFINITY;
    if (trim_quantile && *trim_quantile > 0.0) {
      std::vector<double> sorted(psi);
      std::sort(sorted.begin(), sorted.end());
      const auto n = sorted.size();
      const auto cut = static_cast<std::size_t>(
          std::floor(*trim_quantile * static_cast<double>(n)));
      lo = sorted[std::min(cut, n - 1)];
      hi = sorted[n - 1 - std::min(cut, n - 1)];
    }
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (psi[i] < lo || psi[i] > hi) continue;
      s.points.emplace_back(obs.at(i, j), psi[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace xshap
