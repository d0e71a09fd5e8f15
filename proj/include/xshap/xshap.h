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

/*
 * C interface to the X-SHAP explanation engine.
 *
 * Objects are opaque handles created by xshap_*_create / *_fit / *_load and
 * released with the matching *_free. Every fallible call returns an
 * xshap_status; on failure xshap_last_error() holds a message for the calling
 * thread until its next failing call.
 *
 * Tables are row-major. Explanation outputs are written into caller-owned
 * buffers whose sizes are given in each comment.
 */
#ifndef XSHAP_XSHAP_H_
#define XSHAP_XSHAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(XSHAP_BUILDING_LIBRARY)
#define XSHAP_API __attribute__((visibility("default")))
#else
#define XSHAP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xshap_status {
  XSHAP_OK = 0,
  XSHAP_ERROR_INVALID_ARGUMENT = 1,
  XSHAP_ERROR_SHAPE = 2,
  XSHAP_ERROR_NON_POSITIVE = 3,
  XSHAP_ERROR_RANK_DEFICIENT = 4,
  XSHAP_ERROR_TOO_MANY_FEATURES = 5,
  XSHAP_ERROR_EXPLANATION = 6,
  XSHAP_ERROR_EXTERNAL_MODEL = 7,
  XSHAP_ERROR_INGESTION = 8,
  XSHAP_ERROR_INTERNAL = 99
} xshap_status;

typedef enum xshap_mode {
  XSHAP_MODE_MULTIPLICATIVE = 0,
  XSHAP_MODE_ADDITIVE = 1
} xshap_mode;

typedef enum xshap_method {
  XSHAP_METHOD_XSHAP = 0,       /* multiplicative estimator */
  XSHAP_METHOD_KERNEL_SHAP = 1  /* additive estimator */
} xshap_method;

typedef struct xshap_table xshap_table;
typedef struct xshap_dataset xshap_dataset;
typedef struct xshap_split xshap_split;
typedef struct xshap_model xshap_model;
typedef struct xshap_reference xshap_reference;
typedef struct xshap_plan xshap_plan;
typedef struct xshap_batch xshap_batch;

XSHAP_API const char* xshap_version(void);
XSHAP_API const char* xshap_status_name(xshap_status status);
XSHAP_API const char* xshap_last_error(void);

/* ---- Tables ---------------------------------------------------------- */

/* names may be NULL (defaults to x1..xm). Values are copied. */
XSHAP_API xshap_status xshap_table_create(size_t rows, size_t cols,
                                          const double* values,
                                          const char* const* names,
                                          xshap_table** out);
XSHAP_API void xshap_table_free(xshap_table* table);
XSHAP_API size_t xshap_table_rows(const xshap_table* table);
XSHAP_API size_t xshap_table_cols(const xshap_table* table);
/* rows * cols values, valid while the table lives. */
XSHAP_API const double* xshap_table_data(const xshap_table* table);
XSHAP_API const char* xshap_table_name(const xshap_table* table, size_t col);
/* Column index, or cols when absent. */
XSHAP_API size_t xshap_table_find(const xshap_table* table, const char* name);
XSHAP_API xshap_status xshap_table_select_rows(const xshap_table* table,
                                               const size_t* indices,
                                               size_t count,
                                               xshap_table** out);

/* ---- Datasets -------------------------------------------------------- */

/* Reads a CSV file; non-numeric columns are one-hot encoded as "col=value". */
XSHAP_API xshap_status xshap_dataset_load_csv(const char* path,
                                              const char* target,
                                              int require_positive_target,
                                              xshap_dataset** out);

typedef struct xshap_synth_options {
  size_t rows;
  size_t features;
  uint64_t seed;
  double intercept;
  double noise;       /* sd of Gaussian noise on ln(y) */
  double correlation; /* pairwise feature correlation in [0, 1) */
  size_t inessential; /* trailing features with zero coefficient */
} xshap_synth_options;

XSHAP_API void xshap_synth_options_default(xshap_synth_options* options);
/* Seeded log-linear data; the generating coefficients are kept on the
 * dataset (xshap_dataset_synth_params). */
XSHAP_API xshap_status xshap_dataset_synthesize(
    const xshap_synth_options* options, xshap_dataset** out);
XSHAP_API void xshap_dataset_free(xshap_dataset* data);
/* Borrowed; valid while the dataset lives. */
XSHAP_API const xshap_table* xshap_dataset_features(const xshap_dataset* data);
XSHAP_API const double* xshap_dataset_target(const xshap_dataset* data);
XSHAP_API size_t xshap_dataset_rows(const xshap_dataset* data);
XSHAP_API xshap_status xshap_dataset_synth_params(const xshap_dataset* data,
                                                  double* alpha,
                                                  const double** betas,
                                                  size_t* count);
/* Writes features then the target column. path NULL or "-" means stdout. */
XSHAP_API xshap_status xshap_dataset_write_csv(const xshap_dataset* data,
                                               const char* target_name,
                                               const char* path);

/* ---- Train / test / reference split ------------------------------------ */

typedef enum xshap_split_part {
  XSHAP_SPLIT_TRAIN = 0,
  XSHAP_SPLIT_TEST = 1,
  XSHAP_SPLIT_REFERENCE = 2
} xshap_split_part;

XSHAP_API xshap_status xshap_split_create(size_t rows, double train_fraction,
                                          size_t reference_size, uint64_t seed,
                                          xshap_split** out);
XSHAP_API void xshap_split_free(xshap_split* split);
XSHAP_API xshap_status xshap_split_indices(const xshap_split* split,
                                           xshap_split_part part,
                                           const size_t** indices,
                                           size_t* count);

/* ---- Models ---------------------------------------------------------- */

XSHAP_API xshap_status xshap_model_glm_create(double alpha,
                                              const double* betas, size_t m,
                                              xshap_model** out);
/* Least squares on ln(y) with intercept. */
XSHAP_API xshap_status xshap_model_glm_fit(const xshap_table* features,
                                           const double* target, size_t n,
                                           xshap_model** out);
/* XSHAP_ERROR_INVALID_ARGUMENT when the model is not a log-GLM. */
XSHAP_API xshap_status xshap_model_glm_params(const xshap_model* model,
                                              double* alpha,
                                              const double** betas,
                                              size_t* m);

typedef struct xshap_gbt_options {
  size_t num_trees;
  size_t max_depth;
  double learning_rate;
} xshap_gbt_options;

XSHAP_API void xshap_gbt_options_default(xshap_gbt_options* options);
XSHAP_API xshap_status xshap_model_gbt_fit(const xshap_table* features,
                                           const double* target, size_t n,
                                           const xshap_gbt_options* options,
                                           xshap_model** out);

/* Starts `command` via /bin/sh -c and completes the line-protocol handshake.
 * timeout_ms <= 0 selects the default. */
XSHAP_API xshap_status xshap_model_external_create(const char* command,
                                                   xshap_mode mode,
                                                   int timeout_ms,
                                                   xshap_model** out);

typedef double (*xshap_row_function)(const double* x, size_t m, void* user);
XSHAP_API xshap_status xshap_model_callback_create(xshap_row_function fn,
                                                   void* user, xshap_mode mode,
                                                   int parallel_safe,
                                                   xshap_model** out);

XSHAP_API void xshap_model_free(xshap_model* model);
XSHAP_API xshap_mode xshap_model_mode(const xshap_model* model);
XSHAP_API int xshap_model_parallel_safe(const xshap_model* model);
/* out: xshap_table_rows(rows) values. */
XSHAP_API xshap_status xshap_model_predict(const xshap_model* model,
                                           const xshap_table* rows,
                                           double* out);

/* ---- Reference set and coalitions -------------------------------------- */

/* Copies the table and caches the model's predictions on it. */
XSHAP_API xshap_status xshap_reference_create(const xshap_model* model,
                                              const xshap_table* table,
                                              xshap_reference** out);
XSHAP_API void xshap_reference_free(xshap_reference* ref);
/* multiplicative is NaN when some reference prediction is <= 0. */
XSHAP_API void xshap_reference_baselines(const xshap_reference* ref,
                                         double* additive,
                                         double* multiplicative);
XSHAP_API const xshap_table* xshap_reference_table(const xshap_reference* ref);

XSHAP_API xshap_status xshap_plan_create(size_t m, size_t budget,
                                         xshap_plan** out);
XSHAP_API void xshap_plan_free(xshap_plan* plan);
XSHAP_API size_t xshap_plan_size(const xshap_plan* plan);
/* mask: m bytes of 0/1. */
XSHAP_API xshap_status xshap_plan_coalition(const xshap_plan* plan, size_t k,
                                            unsigned char* mask,
                                            double* weight);

XSHAP_API xshap_status xshap_shapley_weight(size_t m, size_t s, double* out);
XSHAP_API xshap_status xshap_kernel_weight(size_t m, size_t s, double* out);

/* ---- Explanations ---------------------------------------------------- */
/* contributions: m values. */

XSHAP_API xshap_status xshap_explain(const xshap_model* model,
                                     const xshap_reference* ref,
                                     const xshap_plan* plan,
                                     xshap_method method, const double* x,
                                     size_t m, double* baseline,
                                     double* contributions,
                                     double* prediction);

/* contributions: rows * m values, predictions: rows values. Results do not
 * depend on `jobs`. */
XSHAP_API xshap_status xshap_explain_rows(const xshap_model* model,
                                          const xshap_reference* ref,
                                          const xshap_plan* plan,
                                          xshap_method method,
                                          const xshap_table* rows, size_t jobs,
                                          double* baseline,
                                          double* contributions,
                                          double* predictions);

/* Brute-force Shapley values (m <= 12 players). players: m bytes, or NULL
 * for all features; features outside it get the neutral contribution. */
XSHAP_API xshap_status xshap_exact(const xshap_model* model,
                                   const xshap_reference* ref,
                                   xshap_mode mode, const double* x, size_t m,
                                   const unsigned char* players,
                                   double* baseline, double* contributions,
                                   double* prediction);

/* Closed-form multiplicative contributions of a log-GLM against `data`. */
XSHAP_API xshap_status xshap_glm_closed_form(const xshap_model* glm,
                                             const double* x, size_t m,
                                             const xshap_table* data,
                                             double* baseline,
                                             double* contributions,
                                             double* prediction);

/* ---- Metrics over a batch of multiplicative explanations ---------------- */

XSHAP_API xshap_status xshap_batch_create(size_t n, size_t m, double baseline,
                                          const double* contributions,
                                          const double* predictions,
                                          const xshap_table* observations,
                                          xshap_batch** out);
XSHAP_API void xshap_batch_free(xshap_batch* batch);

/* out: m values. */
XSHAP_API xshap_status xshap_group_contribution(const xshap_batch* batch,
                                                const size_t* members,
                                                size_t count, double* out);
XSHAP_API xshap_status xshap_local_importance(const double* contributions,
                                              size_t m, double* out);
XSHAP_API xshap_status xshap_global_importance(const xshap_batch* batch,
                                               double* out);
/* edges: bins + 1 values. */
XSHAP_API xshap_status xshap_equal_width_edges(const xshap_batch* batch,
                                               size_t feature, size_t bins,
                                               double* edges);
/* values: bins entries, NaN for empty bins; counts: bins entries. */
XSHAP_API xshap_status xshap_partial_dependence(const xshap_batch* batch,
                                                size_t feature,
                                                const double* edges,
                                                size_t edge_count,
                                                double* values,
                                                size_t* counts);
/* order: m feature indices by descending global importance. */
XSHAP_API xshap_status xshap_summary_order(const xshap_batch* batch,
                                           size_t* order);
/* Points (feature value, contribution) of one feature, optionally trimmed to
 * the [q, 1-q] contribution quantiles (q = 0 keeps everything). values and
 * contributions need batch-size capacity. */
XSHAP_API xshap_status xshap_summary_points(const xshap_batch* batch,
                                            size_t feature,
                                            double trim_quantile,
                                            double* values,
                                            double* contributions,
                                            size_t* count);

/* Rows of `table` matching "col<v&other==w". out needs rows capacity. */
XSHAP_API xshap_status xshap_filter_rows(const xshap_table* table,
                                         const char* filter, size_t* out,
                                         size_t* count);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // XSHAP_XSHAP_H_
