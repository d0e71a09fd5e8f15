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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "xshap/error.hpp"
#include "xshap/numerics.hpp"

namespace xshap {
namespace {

void CheckObservation(std::span<const double> x, const ReferenceSet& ref) {
  if (x.size() != ref.num_features()) {
    ThrowShape("observation has " + std::to_string(x.size()) +
               " features, reference has " +
               std::to_string(ref.num_features()));
  }
}

void CheckPlan(const CoalitionPlan& plan, std::span<const double> x) {
  if (plan.m != x.size()) {
    ThrowShape("coalition plan is for " + std::to_string(plan.m) +
               " features, observation has " + std::to_string(x.size()));
  }
}

double CoalitionMeanLog(const Predictor& f, std::span<const double> x,
                        const ReferenceSet& ref, const Coalition& c) {
  const DataTable perturbed = BuildPerturbedDataset(x, ref.table(), c);
  return MeanLog(PredictPositive(f, perturbed));
}

double PredictObservation(const Predictor& f, std::span<const double> x) {
  DataTable one(1, x.size(), std::vector<double>(x.begin(), x.end()));
  const std::vector<double> y = f.Predict(one);
  if (y.size() != 1) {
    throw Error(ErrorCode::kExternalModel,
                "predictor returned " + std::to_string(y.size()) +
                    " values for one row");
  }
  return y[0];
}

double PredictObservationPositive(const Predictor& f,
                                  std::span<const double> x) {
  DataTable one(1, x.size(), std::vector<double>(x.begin(), x.end()));
  return PredictPositive(f, one)[0];
}

Eigen::VectorXd SolveExplanation(WlsProblem problem, std::size_t budget) {
  try {
    return SolveWlsConstrained(problem);
  } catch (const RankDeficientError& e) {
    throw Error(ErrorCode::kExplanation,
                "coalition budget too small (" + std::to_string(budget) +
                    " coalitions): " + e.what());
  }
}

WlsProblem DesignFromPlan(const CoalitionPlan& plan) {
  const auto k = static_cast<Eigen::Index>(plan.size());
  const auto m = static_cast<Eigen::Index>(plan.m);
  WlsProblem problem;
  problem.design.resize(k, m);
  problem.weights.resize(k);
  problem.response.resize(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Coalition& c = plan.coalitions[r];
    for (Eigen::Index j = 0; j < m; ++j) {
      problem.design(r, j) = c.active(j) ? 1.0 : 0.0;
    }
    problem.weights[r] = plan.weights[r];
  }
  return problem;
}

std::vector<std::size_t> PlayerIndices(const Coalition& players,
                                       std::size_t m) {
  if (players.size() != m) {
    ThrowShape("player mask has " + std::to_string(players.size()) +
               " entries for " + std::to_string(m) + " features");
  }
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < m; ++j) {
    if (players.active(j)) idx.push_back(j);
  }
  if (idx.size() > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                "exact Shapley oracle supports at most " +
                    std::to_string(kMaxExactFeatures) + " features, got " +
                    std::to_string(idx.size()));
  }
  return idx;
}

// Coalition values of every subset of `players` (bit k <-> players[k]).
// `value` maps a coalition to its (additive or log) value. The empty and
// complete subsets use the supplied endpoint values.
template <typename ValueFn>
std::vector<double> SubsetValues(const std::vector<std::size_t>& players,
                                 std::size_t m, double empty_value,
                                 std::optional<double> full_value,
                                 ValueFn value) {
  const std::size_t count = std::size_t{1} << players.size();
  std::vector<double> values(count);
  values[0] = empty_value;
  for (std::size_t mask = 1; mask < count; ++mask) {
    if (mask == count - 1 && full_value) {
      values[mask] = *full_value;
      continue;
    }
    Coalition c(m);
    for (std::size_t k = 0; k < players.size(); ++k) {
      if (mask & (std::size_t{1} << k)) c.set(players[k], true);
    }
    values[mask] = value(c);
  }
  return values;
}

// phi_k = sum_{S not containing k} w(|S|) (v(S + k) - v(S)), summed in
// increasing mask order.
std::vector<double> ShapleyFromValues(const std::vector<double>& values,
                                      std::size_t players) {
  std::vector<double> phi(players, 0.0);
  const std::size_t count = values.size();
  for (std::size_t k = 0; k < players; ++k) {
    const std::size_t bit = std::size_t{1} << k;
    double sum = 0.0;
    for (std::size_t mask = 0; mask < count; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      sum += ShapleyWeight(players, size) * (values[mask | bit] - values[mask]);
    }
    phi[k] = sum;
  }
  return phi;
}

template <typename Result, typename ExplainOne>
std::vector<Result> ExplainRowsParallel(const Predictor& f,
                                        const DataTable& rows,
                                        std::size_t jobs,
                                        ExplainOne explain_one) {
  const std::size_t n = rows.rows();
  std::vector<Result> results(n);
  std::vector<std::exception_ptr> errors(n);
  if (!f.parallel_safe()) jobs = 1;
  jobs = std::max<std::size_t>(1, std::min(jobs, n));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = explain_one(rows.row(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

ReferenceSet ReferenceSet::Create(const Predictor& f, DataTable table) {
  if (table.rows() == 0) {
    ThrowInvalidArgument("reference set needs at least one row");
  }
  ReferenceSet ref;
  ref.predictions_ = f.Predict(table);
  if (ref.predictions_.size() != table.rows()) {
    throw Error(ErrorCode::kExternalModel,
                "predictor returned " +
                    std::to_string(ref.predictions_.size()) +
                    " values for " + std::to_string(table.rows()) +
                    " reference rows");
  }
  ref.table_ = std::move(table);
  ref.additive_baseline_ = ArithmeticMean(ref.predictions_);
  try {
    ref.mean_log_ = MeanLog(ref.predictions_);
  } catch (const NonPositiveError& e) {
    ref.bad_index_ = e.index();
    ref.bad_value_ = e.value();
    if (f.mode() == PredictionMode::kMultiplicative) throw;
  }
  return ref;
}

double ReferenceSet::log_baseline() const {
  if (!mean_log_) {
    throw NonPositiveError(bad_index_, bad_value_, "reference prediction");
  }
  return *mean_log_;
}

double ReferenceSet::multiplicative_baseline() const {
  return std::exp(log_baseline());
}

DataTable BuildPerturbedDataset(std::span<const double> x,
                                const DataTable& reference,
                                const Coalition& c) {
  if (x.size() != reference.cols() || c.size() != reference.cols()) {
    ThrowShape("perturbed dataset: observation (" + std::to_string(x.size()) +
               "), coalition (" + std::to_string(c.size()) +
               ") and reference (" + std::to_string(reference.cols()) +
               ") widths differ");
  }
  DataTable out = reference;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (c.active(j)) row[j] = x[j];
    }
  }
  return out;
}

double CoalitionValueAdditive(const Predictor& f, std::span<const double> x,
                              const ReferenceSet& ref, const Coalition& c) {
  const DataTable perturbed = BuildPerturbedDataset(x, ref.table(), c);
  return ArithmeticMean(f.Predict(perturbed));
}

double CoalitionValueMultiplicative(const Predictor& f,
                                    std::span<const double> x,
                                    const ReferenceSet& ref,
                                    const Coalition& c) {
  return std::exp(CoalitionMeanLog(f, x, ref, c));
}

AdditiveExplanation KernelShapExplain(const Predictor& f,
                                      std::span<const double> x,
                                      const ReferenceSet& ref,
                                      const CoalitionPlan& plan) {
  CheckObservation(x, ref);
  CheckPlan(plan, x);
  AdditiveExplanation out;
  out.baseline = ref.additive_baseline();
  out.prediction = PredictObservation(f, x);

  WlsProblem problem = DesignFromPlan(plan);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    problem.response[k] =
        CoalitionValueAdditive(f, x, ref, plan.coalitions[k]) - out.baseline;
  }
  problem.sum_constraint = out.prediction - out.baseline;
  const Eigen::VectorXd phi = SolveExplanation(std::move(problem), plan.size());
  out.contributions.assign(phi.data(), phi.data() + phi.size());
  return out;
}

MultiplicativeExplanation XShapExplain(const Predictor& f,
                                       std::span<const double> x,
                                       const ReferenceSet& ref,
                                       const CoalitionPlan& plan) {
  CheckObservation(x, ref);
  CheckPlan(plan, x);
  MultiplicativeExplanation out;
  const double log_baseline = ref.log_baseline();
  out.baseline = std::exp(log_baseline);
  out.prediction = PredictObservationPositive(f, x);

  // ln(gap) = ln(value_c / psi0), taken in log space directly.
  WlsProblem problem = DesignFromPlan(plan);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    problem.response[k] =
        CoalitionMeanLog(f, x, ref, plan.coalitions[k]) - log_baseline;
  }
  problem.sum_constraint = std::log(out.prediction) - log_baseline;
  const Eigen::VectorXd log_psi =
      SolveExplanation(std::move(problem), plan.size());
  out.contributions.resize(log_psi.size());
  for (Eigen::Index j = 0; j < log_psi.size(); ++j) {
    out.contributions[j] = std::exp(log_psi[j]);
  }
  return out;
}

AdditiveExplanation ExactAdditiveShapley(const Predictor& f,
                                         std::span<const double> x,
                                         const ReferenceSet& ref,
                                         const Coalition& players) {
  CheckObservation(x, ref);
  const std::size_t m = x.size();
  const std::vector<std::size_t> idx = PlayerIndices(players, m);
  const bool full_game = idx.size() == m;

  AdditiveExplanation out;
  out.baseline = ref.additive_baseline();
  std::optional<double> full;
  if (full_game) {
    out.prediction = PredictObservation(f, x);
    full = out.prediction;
  }
  const std::vector<double> values = SubsetValues(
      idx, m, out.baseline, full, [&](const Coalition& c) {
        return CoalitionValueAdditive(f, x, ref, c);
      });
  if (!full_game) out.prediction = values.back();

  const std::vector<double> phi = ShapleyFromValues(values, idx.size());
  out.contributions.assign(m, 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) out.contributions[idx[k]] = phi[k];
  return out;
}

AdditiveExplanation ExactAdditiveShapley(const Predictor& f,
                                         std::span<const double> x,
                                         const ReferenceSet& ref) {
  return ExactAdditiveShapley(f, x, ref, Coalition(x.size(), true));
}

MultiplicativeExplanation ExactMultiplicativeShapley(
    const Predictor& f, std::span<const double> x, const ReferenceSet& ref,
    const Coalition& players) {
  CheckObservation(x, ref);
  const std::size_t m = x.size();
  const std::vector<std::size_t> idx = PlayerIndices(players, m);
  const bool full_game = idx.size() == m;

  MultiplicativeExplanation out;
  const double log_baseline = ref.log_baseline();
  out.baseline = std::exp(log_baseline);
  std::optional<double> full;
  if (full_game) {
    out.prediction = PredictObservationPositive(f, x);
    full = std::log(out.prediction);
  }
  const std::vector<double> log_values = SubsetValues(
      idx, m, log_baseline, full, [&](const Coalition& c) {
        return CoalitionMeanLog(f, x, ref, c);
      });
  if (!full_game) out.prediction = std::exp(log_values.back());

  const std::vector<double> log_psi = ShapleyFromValues(log_values, idx.size());
  out.contributions.assign(m, 1.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.contributions[idx[k]] = std::exp(log_psi[k]);
  }
  return out;
}

MultiplicativeExplanation ExactMultiplicativeShapley(
    const Predictor& f, std::span<const double> x, const ReferenceSet& ref) {
  return ExactMultiplicativeShapley(f, x, ref, Coalition(x.size(), true));
}

MultiplicativeExplanation GlmClosedFormContributions(
    const LogGlm& glm, std::span<const double> x, const DataTable& data) {
  const std::size_t m = glm.num_features();
  if (x.size() != m || data.cols() != m) {
    ThrowShape("GLM closed form: model has " + std::to_string(m) +
               " coefficients, observation " + std::to_string(x.size()) +
               ", data " + std::to_string(data.cols()) + " columns");
  }
  MultiplicativeExplanation out;
  out.contributions.resize(m);
  double log_baseline = glm.alpha();
  double eta = glm.alpha();
  for (std::size_t j = 0; j < m; ++j) {
    const double mean = ArithmeticMean(data.column(j));
    const double beta = glm.betas()[j];
    out.contributions[j] = std::exp(beta * (x[j] - mean));
    log_baseline += beta * mean;
    eta += beta * x[j];
  }
  out.baseline = std::exp(log_baseline);
  out.prediction = std::exp(eta);
  return out;
}

std::vector<MultiplicativeExplanation> XShapExplainRows(
    const Predictor& f, const DataTable& rows, const ReferenceSet& ref,
    const CoalitionPlan& plan, std::size_t jobs) {
  return ExplainRowsParallel<MultiplicativeExplanation>(
      f, rows, jobs, [&](std::span<const double> x) {
        return XShapExplain(f, x, ref, plan);
      });
}

std::vector<AdditiveExplanation> KernelShapExplainRows(
    const Predictor& f, const DataTable& rows, const ReferenceSet& ref,
    const CoalitionPlan& plan, std::size_t jobs) {
  return ExplainRowsParallel<AdditiveExplanation>(
      f, rows, jobs, [&](std::span<const double> x) {
        return KernelShapExplain(f, x, ref, plan);
      });
}

}  // namespace xshap
