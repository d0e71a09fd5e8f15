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

#include "xshap/xshap.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "xshap/coalitions.hpp"
#include "xshap/data_table.hpp"
#include "xshap/error.hpp"
#include "xshap/explainers.hpp"
#include "xshap/external_model.hpp"
#include "xshap/metrics.hpp"
#include "xshap/models.hpp"
#include "xshap/tabular.hpp"
#include "xshap/text.hpp"

struct xshap_table {
  xshap::DataTable table;
};

struct xshap_dataset {
  xshap::Dataset data;
  xshap_table features;
  std::optional<xshap::SynthData> synth;
};

struct xshap_split {
  xshap::SplitIndices indices;
};

struct xshap_model {
  std::unique_ptr<xshap::Predictor> predictor;
  const xshap::LogGlm* glm = nullptr;  // set when predictor is a LogGlm
};

struct xshap_reference {
  xshap::ReferenceSet ref;
  xshap_table table;
};

struct xshap_plan {
  xshap::CoalitionPlan plan;
};

struct xshap_batch {
  xshap::ExplanationBatch batch;
};

namespace {

thread_local std::string last_error;

xshap_status ToStatus(xshap::ErrorCode code) {
  using xshap::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return XSHAP_ERROR_INVALID_ARGUMENT;
    case ErrorCode::kShape: return XSHAP_ERROR_SHAPE;
    case ErrorCode::kNonPositive: return XSHAP_ERROR_NON_POSITIVE;
    case ErrorCode::kRankDeficient: return XSHAP_ERROR_RANK_DEFICIENT;
    case ErrorCode::kTooManyFeatures: return XSHAP_ERROR_TOO_MANY_FEATURES;
    case ErrorCode::kExplanation: return XSHAP_ERROR_EXPLANATION;
    case ErrorCode::kExternalModel: return XSHAP_ERROR_EXTERNAL_MODEL;
    case ErrorCode::kIngestion: return XSHAP_ERROR_INGESTION;
    case ErrorCode::kInternal: return XSHAP_ERROR_INTERNAL;
  }
  return XSHAP_ERROR_INTERNAL;
}

xshap_status Fail(xshap_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into a status and the thread's message.
template <typename Fn>
xshap_status Guard(Fn&& fn) {
  try {
    fn();
    return XSHAP_OK;
  } catch (const xshap::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(XSHAP_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(XSHAP_ERROR_INTERNAL, e.what());
  } catch (...) {
    return Fail(XSHAP_ERROR_INTERNAL, "unknown exception");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) xshap::ThrowInvalidArgument(what);
}

xshap::PredictionMode ToMode(xshap_mode mode) {
  return mode == XSHAP_MODE_ADDITIVE ? xshap::PredictionMode::kAdditive
                                     : xshap::PredictionMode::kMultiplicative;
}

std::span<const double> Observation(const double* x, size_t m) {
  Require(x != nullptr || m == 0, "observation pointer is null");
  return {x, m};
}

template <typename Explanation>
void Store(const Explanation& e, double* baseline, double* contributions,
           double* prediction) {
  if (baseline) *baseline = e.baseline;
  if (prediction) *prediction = e.prediction;
  if (contributions) {
    std::copy(e.contributions.begin(), e.contributions.end(), contributions);
  }
}

xshap::Coalition PlayersMask(const unsigned char* players, size_t m) {
  if (!players) return xshap::Coalition(m, true);
  return xshap::Coalition(std::vector<std::uint8_t>(players, players + m));
}

}  // namespace

extern "C" {

const char* xshap_version(void) { return "0.1.0"; }

const char* xshap_status_name(xshap_status status) {
  switch (status) {
    case XSHAP_OK: return "ok";
    case XSHAP_ERROR_INVALID_ARGUMENT: return "invalid-argument";
    case XSHAP_ERROR_SHAPE: return "shape";
    case XSHAP_ERROR_NON_POSITIVE: return "non-positive-value";
    case XSHAP_ERROR_RANK_DEFICIENT: return "rank-deficient";
    case XSHAP_ERROR_TOO_MANY_FEATURES: return "too-many-features";
    case XSHAP_ERROR_EXPLANATION: return "explanation";
    case XSHAP_ERROR_EXTERNAL_MODEL: return "external-model";
    case XSHAP_ERROR_INGESTION: return "ingestion";
    case XSHAP_ERROR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* xshap_last_error(void) { return last_error.c_str(); }

// Tables.

xshap_status xshap_table_create(size_t rows, size_t cols, const double* values,
                                const char* const* names, xshap_table** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    Require(values != nullptr || rows * cols == 0, "values is null");
    std::vector<std::string> col_names;
    if (names) {
      for (size_t j = 0; j < cols; ++j) {
        Require(names[j] != nullptr, "null column name");
        col_names.emplace_back(names[j]);
      }
    }
    auto t = std::make_unique<xshap_table>();
    t->table = xshap::DataTable(
        rows, cols, std::vector<double>(values, values + rows * cols),
        std::move(col_names));
    *out = t.release();
  });
}

void xshap_table_free(xshap_table* table) { delete table; }

size_t xshap_table_rows(const xshap_table* table) {
  return table ? table->table.rows() : 0;
}

size_t xshap_table_cols(const xshap_table* table) {
  return table ? table->table.cols() : 0;
}

const double* xshap_table_data(const xshap_table* table) {
  return table ? table->table.values().data() : nullptr;
}

const char* xshap_table_name(const xshap_table* table, size_t col) {
  if (!table || col >= table->table.cols()) return nullptr;
  return table->table.names()[col].c_str();
}

size_t xshap_table_find(const xshap_table* table, const char* name) {
  if (!table || !name) return 0;
  return table->table.find(name);
}

xshap_status xshap_table_select_rows(const xshap_table* table,
                                     const size_t* indices, size_t count,
                                     xshap_table** out) {
  return Guard([&] {
    Require(table && out, "null handle");
    Require(indices != nullptr || count == 0, "indices is null");
    auto t = std::make_unique<xshap_table>();
    t->table = table->table.select_rows({indices, count});
    *out = t.release();
  });
}

// Datasets.

xshap_status xshap_dataset_load_csv(const char* path, const char* target,
                                    int require_positive_target,
                                    xshap_dataset** out) {
  return Guard([&] {
    Require(path && target && out, "null argument");
    auto d = std::make_unique<xshap_dataset>();
    d->data = xshap::EncodeDataset(xshap::LoadCsv(path), target,
                                   require_positive_target != 0);
    d->features.table = d->data.features;
    *out = d.release();
  });
}

void xshap_synth_options_default(xshap_synth_options* options) {
  if (!options) return;
  const xshap::SynthOptions defaults;
  options->rows = defaults.rows;
  options->features = defaults.features;
  options->seed = defaults.seed;
  options->intercept = defaults.intercept;
  options->noise = defaults.noise;
  options->correlation = defaults.correlation;
  options->inessential = defaults.inessential;
}

xshap_status xshap_dataset_synthesize(const xshap_synth_options* options,
                                      xshap_dataset** out) {
  return Guard([&] {
    Require(options && out, "null argument");
    xshap::SynthOptions opts;
    opts.rows = options->rows;
    opts.features = options->features;
    opts.seed = options->seed;
    opts.intercept = options->intercept;
    opts.noise = options->noise;
    opts.correlation = options->correlation;
    opts.inessential = options->inessential;
    auto d = std::make_unique<xshap_dataset>();
    d->synth = xshap::GenerateSynthetic(opts);
    d->data = d->synth->data;
    d->features.table = d->data.features;
    *out = d.release();
  });
}

void xshap_dataset_free(xshap_dataset* data) { delete data; }

const xshap_table* xshap_dataset_features(const xshap_dataset* data) {
  return data ? &data->features : nullptr;
}

const double* xshap_dataset_target(const xshap_dataset* data) {
  return data ? data->data.target.data() : nullptr;
}

size_t xshap_dataset_rows(const xshap_dataset* data) {
  return data ? data->data.target.size() : 0;
}

xshap_status xshap_dataset_synth_params(const xshap_dataset* data,
                                        double* alpha, const double** betas,
                                        size_t* count) {
  return Guard([&] {
    Require(data != nullptr, "null dataset");
    Require(data->synth.has_value(), "dataset was not synthesized");
    if (alpha) *alpha = data->synth->alpha;
    if (betas) *betas = data->synth->betas.data();
    if (count) *count = data->synth->betas.size();
  });
}

xshap_status xshap_dataset_write_csv(const xshap_dataset* data,
                                     const char* target_name,
                                     const char* path) {
  return Guard([&] {
    Require(data && target_name, "null argument");
    const xshap::DataTable& t = data->data.features;
    std::vector<std::string> header = t.names();
    header.emplace_back(target_name);
    std::vector<std::vector<std::string>> rows(t.rows());
    for (size_t i = 0; i < t.rows(); ++i) {
      rows[i].reserve(t.cols() + 1);
      for (double v : t.row(i)) rows[i].push_back(xshap::FormatDouble(v));
      rows[i].push_back(xshap::FormatDouble(data->data.target[i]));
    }
    if (!path || std::string(path) == "-") {
      xshap::WriteCsv(std::cout, header, rows);
      std::cout.flush();
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      throw xshap::Error(xshap::ErrorCode::kIngestion,
                         std::string("cannot write '") + path + "'");
    }
    xshap::WriteCsv(file, header, rows);
  });
}

// Splits.

xshap_status xshap_split_create(size_t rows, double train_fraction,
                                size_t reference_size, uint64_t seed,
                                xshap_split** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    auto s = std::make_unique<xshap_split>();
    s->indices =
        xshap::SplitAndSample(rows, train_fraction, reference_size, seed);
    *out = s.release();
  });
}

void xshap_split_free(xshap_split* split) { delete split; }

xshap_status xshap_split_indices(const xshap_split* split,
                                 xshap_split_part part,
                                 const size_t** indices, size_t* count) {
  return Guard([&] {
    Require(split && indices && count, "null argument");
    const std::vector<std::size_t>* v = nullptr;
    switch (part) {
      case XSHAP_SPLIT_TRAIN: v = &split->indices.train; break;
      case XSHAP_SPLIT_TEST: v = &split->indices.test; break;
      case XSHAP_SPLIT_REFERENCE: v = &split->indices.reference; break;
    }
    Require(v != nullptr, "unknown split part");
    *indices = v->data();
    *count = v->size();
  });
}

// Models.

xshap_status xshap_model_glm_create(double alpha, const double* betas,
                                    size_t m, xshap_model** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    Require(betas != nullptr || m == 0, "betas is null");
    auto glm = std::make_unique<xshap::LogGlm>(
        alpha, std::vector<double>(betas, betas + m));
    auto model = std::make_unique<xshap_model>();
    model->glm = glm.get();
    model->predictor = std::move(glm);
    *out = model.release();
  });
}

xshap_status xshap_model_glm_fit(const xshap_table* features,
                                 const double* target, size_t n,
                                 xshap_model** out) {
  return Guard([&] {
    Require(features && target && out, "null argument");
    auto glm = std::make_unique<xshap::LogGlm>(
        xshap::FitLogGlm(features->table, {target, n}));
    auto model = std::make_unique<xshap_model>();
    model->glm = glm.get();
    model->predictor = std::move(glm);
    *out = model.release();
  });
}

xshap_status xshap_model_glm_params(const xshap_model* model, double* alpha,
                                    const double** betas, size_t* m) {
  return Guard([&] {
    Require(model != nullptr, "null model");
    Require(model->glm != nullptr, "model is not a log-GLM");
    if (alpha) *alpha = model->glm->alpha();
    if (betas) *betas = model->glm->betas().data();
    if (m) *m = model->glm->num_features();
  });
}

void xshap_gbt_options_default(xshap_gbt_options* options) {
  if (!options) return;
  const xshap::GbtOptions defaults;
  options->num_trees = defaults.num_trees;
  options->max_depth = defaults.max_depth;
  options->learning_rate = defaults.learning_rate;
}

xshap_status xshap_model_gbt_fit(const xshap_table* features,
                                 const double* target, size_t n,
                                 const xshap_gbt_options* options,
                                 xshap_model** out) {
  return Guard([&] {
    Require(features && target && out, "null argument");
    xshap::GbtOptions opts;
    if (options) {
      opts.num_trees = options->num_trees;
      opts.max_depth = options->max_depth;
      opts.learning_rate = options->learning_rate;
    }
    auto model = std::make_unique<xshap_model>();
    model->predictor = std::make_unique<xshap::TreeEnsemble>(
        xshap::FitGbt(features->table, {target, n}, opts));
    *out = model.release();
  });
}

xshap_status xshap_model_external_create(const char* command, xshap_mode mode,
                                         int timeout_ms, xshap_model** out) {
  return Guard([&] {
    Require(command && out, "null argument");
    xshap::ExternalModel::Options opts;
    opts.mode = ToMode(mode);
    if (timeout_ms > 0) opts.timeout = std::chrono::milliseconds(timeout_ms);
    auto model = std::make_unique<xshap_model>();
    model->predictor = std::make_unique<xshap::ExternalModel>(command, opts);
    *out = model.release();
  });
}

namespace {

class CallbackPredictor : public xshap::Predictor {
 public:
  CallbackPredictor(xshap_row_function fn, void* user,
                    xshap::PredictionMode mode, bool parallel_safe)
      : fn_(fn), user_(user), mode_(mode), parallel_safe_(parallel_safe) {}

  std::vector<double> Predict(const xshap::DataTable& rows) const override {
    std::vector<double> out(rows.rows());
    for (size_t r = 0; r < rows.rows(); ++r) {
      out[r] = fn_(rows.row(r).data(), rows.cols(), user_);
    }
    return out;
  }
  xshap::PredictionMode mode() const override { return mode_; }
  bool parallel_safe() const override { return parallel_safe_; }

 private:
  xshap_row_function fn_;
  void* user_;
  xshap::PredictionMode mode_;
  bool parallel_safe_;
};

}  // namespace

xshap_status xshap_model_callback_create(xshap_row_function fn, void* user,
                                         xshap_mode mode, int parallel_safe,
                                         xshap_model** out) {
  return Guard([&] {
    Require(fn && out, "null argument");
    auto model = std::make_unique<xshap_model>();
    model->predictor = std::make_unique<CallbackPredictor>(
        fn, user, ToMode(mode), parallel_safe != 0);
    *out = model.release();
  });
}

void xshap_model_free(xshap_model* model) { delete model; }

xshap_mode xshap_model_mode(const xshap_model* model) {
  if (model && model->predictor->mode() == xshap::PredictionMode::kAdditive) {
    return XSHAP_MODE_ADDITIVE;
  }
  return XSHAP_MODE_MULTIPLICATIVE;
}

int xshap_model_parallel_safe(const xshap_model* model) {
  return model && model->predictor->parallel_safe() ? 1 : 0;
}

xshap_status xshap_model_predict(const xshap_model* model,
                                 const xshap_table* rows, double* out) {
  return Guard([&] {
    Require(model && rows && out, "null argument");
    const std::vector<double> y = model->predictor->Predict(rows->table);
    if (y.size() != rows->table.rows()) {
      throw xshap::Error(xshap::ErrorCode::kExternalModel,
                         "prediction count mismatch");
    }
    std::copy(y.begin(), y.end(), out);
  });
}

// Reference sets and plans.

xshap_status xshap_reference_create(const xshap_model* model,
                                    const xshap_table* table,
                                    xshap_reference** out) {
  return Guard([&] {
    Require(model && table && out, "null argument");
    auto r = std::unique_ptr<xshap_reference>(new xshap_reference{
        xshap::ReferenceSet::Create(*model->predictor, table->table), {}});
    r->table.table = r->ref.table();
    *out = r.release();
  });
}

void xshap_reference_free(xshap_reference* ref) { delete ref; }

void xshap_reference_baselines(const xshap_reference* ref, double* additive,
                               double* multiplicative) {
  if (!ref) return;
  if (additive) *additive = ref->ref.additive_baseline();
  if (multiplicative) {
    *multiplicative = ref->ref.has_multiplicative_baseline()
                          ? ref->ref.multiplicative_baseline()
                          : std::numeric_limits<double>::quiet_NaN();
  }
}

const xshap_table* xshap_reference_table(const xshap_reference* ref) {
  return ref ? &ref->table : nullptr;
}

xshap_status xshap_plan_create(size_t m, size_t budget, xshap_plan** out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    auto p = std::make_unique<xshap_plan>();
    p->plan = xshap::EnumerateCoalitions(m, budget);
    *out = p.release();
  });
}

void xshap_plan_free(xshap_plan* plan) { delete plan; }

size_t xshap_plan_size(const xshap_plan* plan) {
  return plan ? plan->plan.size() : 0;
}

xshap_status xshap_plan_coalition(const xshap_plan* plan, size_t k,
                                  unsigned char* mask, double* weight) {
  return Guard([&] {
    Require(plan != nullptr, "null plan");
    Require(k < plan->plan.size(), "coalition index out of range");
    const auto& c = plan->plan.coalitions[k];
    if (mask) std::copy(c.mask().begin(), c.mask().end(), mask);
    if (weight) *weight = plan->plan.weights[k];
  });
}

xshap_status xshap_shapley_weight(size_t m, size_t s, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = xshap::ShapleyWeight(m, s);
  });
}

xshap_status xshap_kernel_weight(size_t m, size_t s, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is null");
    *out = xshap::KernelWeight(m, s);
  });
}

// Explanations.

xshap_status xshap_explain(const xshap_model* model,
                           const xshap_reference* ref, const xshap_plan* plan,
                           xshap_method method, const double* x, size_t m,
                           double* baseline, double* contributions,
                           double* prediction) {
  return Guard([&] {
    Require(model && ref && plan, "null handle");
    const auto obs = Observation(x, m);
    if (method == XSHAP_METHOD_KERNEL_SHAP) {
      Store(xshap::KernelShapExplain(*model->predictor, obs, ref->ref,
                                     plan->plan),
            baseline, contributions, prediction);
    } else {
      Store(xshap::XShapExplain(*model->predictor, obs, ref->ref, plan->plan),
            baseline, contributions, prediction);
    }
  });
}

xshap_status xshap_explain_rows(const xshap_model* model,
                                const xshap_reference* ref,
                                const xshap_plan* plan, xshap_method method,
                                const xshap_table* rows, size_t jobs,
                                double* baseline, double* contributions,
                                double* predictions) {
  return Guard([&] {
    Require(model && ref && plan && rows, "null handle");
    const size_t m = rows->table.cols();
    auto store_all = [&](const auto& results) {
      for (size_t i = 0; i < results.size(); ++i) {
        if (i == 0 && baseline) *baseline = results[i].baseline;
        Store(results[i], nullptr,
              contributions ? contributions + i * m : nullptr,
              predictions ? predictions + i : nullptr);
      }
    };
    if (method == XSHAP_METHOD_KERNEL_SHAP) {
      store_all(xshap::KernelShapExplainRows(*model->predictor, rows->table,
                                             ref->ref, plan->plan, jobs));
    } else {
      store_all(xshap::XShapExplainRows(*model->predictor, rows->table,
                                        ref->ref, plan->plan, jobs));
    }
  });
}

xshap_status xshap_exact(const xshap_model* model, const xshap_reference* ref,
                         xshap_mode mode, const double* x, size_t m,
                         const unsigned char* players, double* baseline,
                         double* contributions, double* prediction) {
  return Guard([&] {
    Require(model && ref, "null handle");
    const auto obs = Observation(x, m);
    const xshap::Coalition mask = PlayersMask(players, m);
    if (mode == XSHAP_MODE_ADDITIVE) {
      Store(xshap::ExactAdditiveShapley(*model->predictor, obs, ref->ref, mask),
            baseline, contributions, prediction);
    } else {
      Store(xshap::ExactMultiplicativeShapley(*model->predictor, obs, ref->ref,
                                              mask),
            baseline, contributions, prediction);
    }
  });
}

xshap_status xshap_glm_closed_form(const xshap_model* glm, const double* x,
                                   size_t m, const xshap_table* data,
                                   double* baseline, double* contributions,
                                   double* prediction) {
  return Guard([&] {
    Require(glm && data, "null handle");
    Require(glm->glm != nullptr, "model is not a log-GLM");
    Store(xshap::GlmClosedFormContributions(*glm->glm, Observation(x, m),
                                            data->table),
          baseline, contributions, prediction);
  });
}

// Metrics.

xshap_status xshap_batch_create(size_t n, size_t m, double baseline,
                                const double* contributions,
                                const double* predictions,
                                const xshap_table* observations,
                                xshap_batch** out) {
  return Guard([&] {
    Require(contributions && predictions && observations && out,
            "null argument");
    std::vector<xshap::MultiplicativeExplanation> explanations(n);
    for (size_t i = 0; i < n; ++i) {
      explanations[i].baseline = baseline;
      explanations[i].prediction = predictions[i];
      explanations[i].contributions.assign(contributions + i * m,
                                           contributions + (i + 1) * m);
    }
    *out = new xshap_batch{
        xshap::ExplanationBatch(std::move(explanations), observations->table)};
  });
}

void xshap_batch_free(xshap_batch* batch) { delete batch; }

xshap_status xshap_group_contribution(const xshap_batch* batch,
                                      const size_t* members, size_t count,
                                      double* out) {
  return Guard([&] {
    Require(batch && out, "null argument");
    Require(members != nullptr || count == 0, "members is null");
    xshap::GroupSpec group{std::vector<std::size_t>(members, members + count),
                           "group"};
    const auto g = xshap::GroupContribution(batch->batch, group);
    std::copy(g.begin(), g.end(), out);
  });
}

xshap_status xshap_local_importance(const double* contributions, size_t m,
                                    double* out) {
  return Guard([&] {
    Require(contributions && out, "null argument");
    xshap::MultiplicativeExplanation e;
    e.contributions.assign(contributions, contributions + m);
    const auto imp = xshap::LocalImportance(e);
    std::copy(imp.begin(), imp.end(), out);
  });
}

xshap_status xshap_global_importance(const xshap_batch* batch, double* out) {
  return Guard([&] {
    Require(batch && out, "null argument");
    const auto imp = xshap::GlobalImportance(batch->batch);
    std::copy(imp.begin(), imp.end(), out);
  });
}

xshap_status xshap_equal_width_edges(const xshap_batch* batch, size_t feature,
                                     size_t bins, double* edges) {
  return Guard([&] {
    Require(batch && edges, "null argument");
    const auto e = xshap::EqualWidthEdges(batch->batch, feature, bins);
    std::copy(e.begin(), e.end(), edges);
  });
}

xshap_status xshap_partial_dependence(const xshap_batch* batch, size_t feature,
                                      const double* edges, size_t edge_count,
                                      double* values, size_t* counts) {
  return Guard([&] {
    Require(batch && edges && values && counts, "null argument");
    const auto curve =
        xshap::PartialDependence(batch->batch, feature, {edges, edge_count});
    for (size_t b = 0; b < curve.values.size(); ++b) {
      values[b] = curve.values[b].value_or(
          std::numeric_limits<double>::quiet_NaN());
      counts[b] = curve.counts[b];
    }
  });
}

xshap_status xshap_summary_order(const xshap_batch* batch, size_t* order) {
  return Guard([&] {
    Require(batch && order, "null argument");
    const auto summary = xshap::SummaryData(batch->batch);
    for (size_t k = 0; k < summary.size(); ++k) order[k] = summary[k].feature;
  });
}

xshap_status xshap_summary_points(const xshap_batch* batch, size_t feature,
                                  double trim_quantile, double* values,
                                  double* contributions, size_t* count) {
  return Guard([&] {
    Require(batch && values && contributions && count, "null argument");
    Require(feature < batch->batch.num_features(), "feature out of range");
    std::optional<double> trim;
    if (trim_quantile > 0.0) trim = trim_quantile;
    const auto summary = xshap::SummaryData(batch->batch, trim);
    for (const auto& s : summary) {
      if (s.feature != feature) continue;
      for (size_t i = 0; i < s.points.size(); ++i) {
        values[i] = s.points[i].first;
        contributions[i] = s.points[i].second;
      }
      *count = s.points.size();
    }
  });
}

xshap_status xshap_filter_rows(const xshap_table* table, const char* filter,
                               size_t* out, size_t* count) {
  return Guard([&] {
    Require(table && filter && out && count, "null argument");
    const auto rows =
        xshap::FilterRows(table->table, xshap::ParseFilter(filter));
    std::copy(rows.begin(), rows.end(), out);
    *count = rows.size();
  });
}

}  // extern "C"
