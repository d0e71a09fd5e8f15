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

// xshap: command line front end over the C API.
//
//   xshap explain  --data d.csv --target y --model glm --seed 7
//   xshap metrics  --data d.csv --target y --model gbt --seed 7 --filter "x1<0"
//   xshap validate --data d.csv --target y --model glm --seed 7
//   xshap synth    --n 1000 --m 6 --seed 7 --output d.csv

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "handles.hpp"
#include "json.hpp"
#include "xshap/xshap.h"

namespace xshap_cli {
namespace {

using Json = nlohmann::ordered_json;

enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitModel = 4,
  kExitNumerical = 5,
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failed validation checks.
class CheckFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string data;
  std::string target = "y";
  std::string model = "glm";
  std::string extern_cmd;
  int timeout_ms = 60000;
  std::string mode = "multiplicative";
  std::size_t ref_size = 100;
  std::size_t coalitions = 1000;
  double split = 0.7;
  std::optional<std::uint64_t> seed;
  std::string rows;
  std::vector<std::string> filters;
  std::string pd_feature;
  std::size_t pd_bins = 25;
  std::string format = "json";
  std::size_t jobs = 0;
  std::size_t trees = 100;
  std::size_t depth = 3;
  double rate = 0.1;
  double trim = 0.0;
  // validate
  std::string budgets = "50,100,200,500,1000,2000";
  std::size_t check_rows = 5;
  // synth
  std::size_t synth_rows = 1000;
  std::size_t synth_features = 6;
  double noise = 0.0;
  double correlation = 0.0;
  double intercept = 1.0;
  std::size_t inessential = 0;
  std::string output = "-";

  bool multiplicative() const { return mode != "additive"; }
  bool additive() const { return mode != "multiplicative"; }
};

int ExitCodeFor(xshap_status status) {
  switch (status) {
    case XSHAP_OK: return kExitOk;
    case XSHAP_ERROR_INVALID_ARGUMENT: return kExitConfig;
    case XSHAP_ERROR_SHAPE:
    case XSHAP_ERROR_INGESTION: return kExitData;
    case XSHAP_ERROR_NON_POSITIVE:
    case XSHAP_ERROR_EXTERNAL_MODEL: return kExitModel;
    case XSHAP_ERROR_RANK_DEFICIENT:
    case XSHAP_ERROR_TOO_MANY_FEATURES:
    case XSHAP_ERROR_EXPLANATION:
    case XSHAP_ERROR_INTERNAL: return kExitNumerical;
  }
  return kExitNumerical;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double RelativeError(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

// Everything an explanation run needs, assembled from the config.
struct Pipeline {
  Dataset data;
  Split split;
  Model model;
  Reference reference;
  Plan plan;
  Table rows;                       // observations to explain
  std::vector<std::size_t> row_ids;  // their original CSV data-row indices
  std::vector<std::string> names;
  std::size_t m = 0;
  double additive_baseline = 0.0;
  double multiplicative_baseline = 0.0;
};

std::vector<std::size_t> SliceRows(const std::string& spec, std::size_t n) {
  std::size_t begin = 0;
  std::size_t end = n;
  if (!spec.empty()) {
    const auto colon = spec.find(':');
    auto parse = [&](const std::string& s, std::size_t fallback) {
      if (s.empty()) return fallback;
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        throw ConfigError("bad --rows value '" + spec + "'");
      }
      return v;
    };
    if (colon == std::string::npos) {
      begin = parse(spec, 0);
      end = begin + 1;
    } else {
      begin = parse(spec.substr(0, colon), 0);
      end = std::min(parse(spec.substr(colon + 1), n), n);
    }
  }
  if (begin >= end || begin >= n) {
    throw ConfigError("--rows '" + spec + "' selects no test rows (test set has " +
                      std::to_string(n) + ")");
  }
  std::vector<std::size_t> out(end - begin);
  std::iota(out.begin(), out.end(), begin);
  return out;
}

Pipeline BuildPipeline(const RunConfig& cfg) {
  if (cfg.data.empty()) throw ConfigError("--data is required");
  if (cfg.model != "glm" && cfg.model != "gbt" && cfg.model != "extern") {
    throw ConfigError("--model must be glm, gbt or extern");
  }
  if (cfg.model == "extern" && cfg.extern_cmd.empty()) {
    throw ConfigError("--model extern needs --extern-cmd");
  }
  Pipeline p;
  const bool positive_target = cfg.model != "extern" || cfg.multiplicative();
  xshap_dataset* data = nullptr;
  Check(xshap_dataset_load_csv(cfg.data.c_str(), cfg.target.c_str(),
                               positive_target ? 1 : 0, &data));
  p.data.reset(data);
  const xshap_table* features = xshap_dataset_features(p.data.get());
  const std::size_t n = xshap_dataset_rows(p.data.get());
  p.m = xshap_table_cols(features);
  for (std::size_t j = 0; j < p.m; ++j) {
    p.names.emplace_back(xshap_table_name(features, j));
  }

  xshap_split* split = nullptr;
  Check(xshap_split_create(n, cfg.split, cfg.ref_size, *cfg.seed, &split));
  p.split.reset(split);
  auto part = [&](xshap_split_part which) {
    const std::size_t* idx = nullptr;
    std::size_t count = 0;
    Check(xshap_split_indices(p.split.get(), which, &idx, &count));
    return std::vector<std::size_t>(idx, idx + count);
  };
  const auto train_idx = part(XSHAP_SPLIT_TRAIN);
  const auto test_idx = part(XSHAP_SPLIT_TEST);
  const auto ref_idx = part(XSHAP_SPLIT_REFERENCE);

  xshap_table* raw = nullptr;
  Check(xshap_table_select_rows(features, train_idx.data(), train_idx.size(),
                                &raw));
  Table train(raw);
  const double* target = xshap_dataset_target(p.data.get());
  std::vector<double> train_y(train_idx.size());
  for (std::size_t i = 0; i < train_idx.size(); ++i) {
    train_y[i] = target[train_idx[i]];
  }

  xshap_model* model = nullptr;
  if (cfg.model == "glm") {
    Check(xshap_model_glm_fit(train.get(), train_y.data(), train_y.size(),
                              &model));
  } else if (cfg.model == "gbt") {
    xshap_gbt_options opts;
    xshap_gbt_options_default(&opts);
    opts.num_trees = cfg.trees;
    opts.max_depth = cfg.depth;
    opts.learning_rate = cfg.rate;
    Check(xshap_model_gbt_fit(train.get(), train_y.data(), train_y.size(),
                              &opts, &model));
  } else {
    Check(xshap_model_external_create(
        cfg.extern_cmd.c_str(),
        cfg.multiplicative() ? XSHAP_MODE_MULTIPLICATIVE : XSHAP_MODE_ADDITIVE,
        cfg.timeout_ms, &model));
  }
  p.model.reset(model);

  Check(xshap_table_select_rows(features, ref_idx.data(), ref_idx.size(), &raw));
  Table ref_table(raw);
  xshap_reference* ref = nullptr;
  Check(xshap_reference_create(p.model.get(), ref_table.get(), &ref));
  p.reference.reset(ref);
  xshap_reference_baselines(p.reference.get(), &p.additive_baseline,
                            &p.multiplicative_baseline);

  const auto positions = SliceRows(cfg.rows, test_idx.size());
  for (std::size_t pos : positions) p.row_ids.push_back(test_idx[pos]);
  Check(xshap_table_select_rows(features, p.row_ids.data(), p.row_ids.size(),
                                &raw));
  p.rows.reset(raw);

  xshap_plan* plan = nullptr;
  Check(xshap_plan_create(p.m, cfg.coalitions, &plan));
  p.plan.reset(plan);
  return p;
}

struct BatchResult {
  double baseline = 0.0;
  std::vector<double> contributions;  // rows * m
  std::vector<double> predictions;
};

BatchResult ExplainAll(const Pipeline& p, const RunConfig& cfg,
                       xshap_method method, const xshap_plan* plan,
                       const xshap_table* rows) {
  BatchResult r;
  const std::size_t n = xshap_table_rows(rows);
  r.contributions.resize(n * p.m);
  r.predictions.resize(n);
  Check(xshap_explain_rows(p.model.get(), p.reference.get(), plan, method,
                           rows, cfg.jobs, &r.baseline, r.contributions.data(),
                           r.predictions.data()));
  return r;
}

Json ModelJson(const Pipeline& p, const RunConfig& cfg) {
  Json j;
  j["kind"] = cfg.model;
  if (cfg.model == "glm") {
    double alpha = 0.0;
    const double* betas = nullptr;
    std::size_t count = 0;
    Check(xshap_model_glm_params(p.model.get(), &alpha, &betas, &count));
    j["alpha"] = alpha;
    j["betas"] = std::vector<double>(betas, betas + count);
  } else if (cfg.model == "gbt") {
    j["trees"] = cfg.trees;
    j["depth"] = cfg.depth;
    j["learning_rate"] = cfg.rate;
  } else {
    j["command"] = cfg.extern_cmd;
  }
  return j;
}

double GeometricMean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += std::log(x);
  return std::exp(sum / static_cast<double>(v.size()));
}

Json FeatureRecords(const Pipeline& p, const double* x, const double* contrib,
                    bool multiplicative) {
  std::vector<double> importance(p.m);
  if (multiplicative) {
    Check(xshap_local_importance(contrib, p.m, importance.data()));
  } else {
    for (std::size_t j = 0; j < p.m; ++j) importance[j] = std::abs(contrib[j]);
  }
  Json out = Json::array();
  for (std::size_t j = 0; j < p.m; ++j) {
    out.push_back({{"name", p.names[j]},
                   {"value", x[j]},
                   {"contribution", contrib[j]},
                   {"importance", importance[j]}});
  }
  return out;
}

void EmitCsv(const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) std::cout << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        std::cout << '"';
        for (char ch : c) {
          if (ch == '"') std::cout << '"';
          std::cout << ch;
        }
        std::cout << '"';
      } else {
        std::cout << c;
      }
    }
    std::cout << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

int CmdExplain(const RunConfig& cfg) {
  Pipeline p = BuildPipeline(cfg);
  const std::size_t n = p.row_ids.size();
  const double* x = xshap_table_data(p.rows.get());

  std::optional<BatchResult> mult, add;
  if (cfg.multiplicative()) {
    mult = ExplainAll(p, cfg, XSHAP_METHOD_XSHAP, p.plan.get(), p.rows.get());
  }
  if (cfg.additive()) {
    add = ExplainAll(p, cfg, XSHAP_METHOD_KERNEL_SHAP, p.plan.get(),
                     p.rows.get());
  }

  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    auto emit = [&](const BatchResult& r, const char* mode, bool is_mult) {
      for (std::size_t i = 0; i < n; ++i) {
        const double* c = r.contributions.data() + i * p.m;
        std::vector<double> imp(p.m);
        if (is_mult) {
          Check(xshap_local_importance(c, p.m, imp.data()));
        } else {
          for (std::size_t j = 0; j < p.m; ++j) imp[j] = std::abs(c[j]);
        }
        for (std::size_t j = 0; j < p.m; ++j) {
          rows.push_back({std::to_string(p.row_ids[i]), mode, p.names[j],
                          FormatDouble(x[i * p.m + j]), FormatDouble(c[j]),
                          FormatDouble(imp[j]), FormatDouble(r.predictions[i]),
                          FormatDouble(r.baseline)});
        }
      }
    };
    if (mult) emit(*mult, "multiplicative", true);
    if (add) emit(*add, "additive", false);
    EmitCsv({"index", "mode", "feature", "value", "contribution", "importance",
             "prediction", "baseline"},
            rows);
    return kExitOk;
  }

  Json out;
  if (mult) {
    out["baseline"] = mult->baseline;
    out["mode"] = add ? "both" : "multiplicative";
    if (add) out["additive_baseline"] = add->baseline;
    out["geometric_mean_prediction"] = GeometricMean(mult->predictions);
  } else {
    out["baseline"] = add->baseline;
    out["mode"] = "additive";
  }
  out["coalitions"] = xshap_plan_size(p.plan.get());
  out["model"] = ModelJson(p, cfg);
  Json rows = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json row;
    row["index"] = p.row_ids[i];
    const BatchResult& primary = mult ? *mult : *add;
    row["prediction"] = primary.predictions[i];
    row["features"] = FeatureRecords(
        p, x + i * p.m, primary.contributions.data() + i * p.m,
        mult.has_value());
    if (mult && add) {
      row["additive"] = FeatureRecords(p, x + i * p.m,
                                       add->contributions.data() + i * p.m,
                                       false);
    }
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int CmdMetrics(const RunConfig& cfg) {
  Pipeline p = BuildPipeline(cfg);
  const std::size_t n = p.row_ids.size();
  const BatchResult mult =
      ExplainAll(p, cfg, XSHAP_METHOD_XSHAP, p.plan.get(), p.rows.get());

  xshap_batch* raw = nullptr;
  Check(xshap_batch_create(n, p.m, mult.baseline, mult.contributions.data(),
                           mult.predictions.data(), p.rows.get(), &raw));
  Batch batch(raw);

  std::vector<double> importance(p.m);
  Check(xshap_global_importance(batch.get(), importance.data()));
  std::vector<std::size_t> order(p.m);
  Check(xshap_summary_order(batch.get(), order.data()));

  std::size_t pd_feature = order.front();
  if (!cfg.pd_feature.empty()) {
    pd_feature = xshap_table_find(p.rows.get(), cfg.pd_feature.c_str());
    if (pd_feature >= p.m) {
      throw ConfigError("unknown --pd-feature '" + cfg.pd_feature + "'");
    }
  }
  if (cfg.pd_bins < 1) throw ConfigError("--pd-bins must be >= 1");
  std::vector<double> edges(cfg.pd_bins + 1);
  Check(xshap_equal_width_edges(batch.get(), pd_feature, cfg.pd_bins,
                                edges.data()));
  std::vector<double> pd(cfg.pd_bins);
  std::vector<std::size_t> counts(cfg.pd_bins);
  Check(xshap_partial_dependence(batch.get(), pd_feature, edges.data(),
                                 edges.size(), pd.data(), counts.data()));

  struct Group {
    std::string label;
    std::size_t size;
    std::vector<double> contributions;
  };
  std::vector<Group> groups;
  auto add_group = [&](const std::string& label,
                       const std::vector<std::size_t>& members) {
    Group g{label, members.size(), {}};
    if (!members.empty()) {
      g.contributions.resize(p.m);
      Check(xshap_group_contribution(batch.get(), members.data(),
                                     members.size(), g.contributions.data()));
    }
    groups.push_back(std::move(g));
  };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  add_group("all", all);
  for (const auto& filter : cfg.filters) {
    std::vector<std::size_t> members(n);
    std::size_t count = 0;
    const xshap_status st =
        xshap_filter_rows(p.rows.get(), filter.c_str(), members.data(), &count);
    if (st == XSHAP_ERROR_INVALID_ARGUMENT) throw ConfigError(xshap_last_error());
    Check(st);
    members.resize(count);
    add_group(filter, members);
  }

  std::vector<double> additive_importance;
  if (cfg.additive()) {
    const BatchResult add = ExplainAll(p, cfg, XSHAP_METHOD_KERNEL_SHAP,
                                       p.plan.get(), p.rows.get());
    additive_importance.assign(p.m, 0.0);
    for (std::size_t j = 0; j < p.m; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        sum += std::abs(add.contributions[i * p.m + j]);
      }
      additive_importance[j] = sum / static_cast<double>(n);
    }
  }

  std::vector<double> point_values(n), point_contribs(n);
  auto points_of = [&](std::size_t feature) {
    std::size_t count = 0;
    Check(xshap_summary_points(batch.get(), feature, cfg.trim,
                               point_values.data(), point_contribs.data(),
                               &count));
    std::vector<std::pair<double, double>> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
      pts[i] = {point_values[i], point_contribs[i]};
    }
    return pts;
  };

  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j : order) {
      rows.push_back({"importance", "all", p.names[j], "",
                      FormatDouble(importance[j])});
    }
    for (std::size_t j = 0; j < additive_importance.size(); ++j) {
      rows.push_back({"additive_importance", "all", p.names[j], "",
                      FormatDouble(additive_importance[j])});
    }
    for (const auto& g : groups) {
      for (std::size_t j = 0; j < g.contributions.size(); ++j) {
        rows.push_back({"group", g.label, p.names[j], std::to_string(g.size),
                        FormatDouble(g.contributions[j])});
      }
    }
    for (std::size_t b = 0; b < pd.size(); ++b) {
      rows.push_back({"partial_dependence",
                      FormatDouble(edges[b]) + ":" + FormatDouble(edges[b + 1]),
                      p.names[pd_feature], std::to_string(counts[b]),
                      FormatDouble(pd[b])});
    }
    for (std::size_t j : order) {
      for (const auto& [v, c] : points_of(j)) {
        rows.push_back({"summary", "all", p.names[j], FormatDouble(v),
                        FormatDouble(c)});
      }
    }
    EmitCsv({"section", "label", "feature", "key", "value"}, rows);
    return kExitOk;
  }

  Json out;
  out["baseline"] = mult.baseline;
  out["geometric_mean_prediction"] = GeometricMean(mult.predictions);
  out["rows"] = n;
  out["model"] = ModelJson(p, cfg);
  Json imp = Json::array();
  for (std::size_t j : order) {
    imp.push_back({{"name", p.names[j]}, {"importance", importance[j]}});
  }
  out["global_importance"] = std::move(imp);
  if (!additive_importance.empty()) {
    Json a = Json::array();
    for (std::size_t j = 0; j < p.m; ++j) {
      a.push_back({{"name", p.names[j]},
                   {"mean_abs_contribution", additive_importance[j]}});
    }
    out["additive_importance"] = std::move(a);
  }
  Json summary = Json::array();
  for (std::size_t j : order) {
    Json pts = Json::array();
    for (const auto& [v, c] : points_of(j)) pts.push_back({v, c});
    summary.push_back({{"name", p.names[j]},
                       {"importance", importance[j]},
                       {"points", std::move(pts)}});
  }
  out["summary"] = std::move(summary);
  Json bins = Json::array();
  for (std::size_t b = 0; b < pd.size(); ++b) {
    Json bin = {{"lower", edges[b]},
                {"upper", edges[b + 1]},
                {"count", counts[b]}};
    bin["value"] = std::isnan(pd[b]) ? Json(nullptr) : Json(pd[b]);
    bins.push_back(std::move(bin));
  }
  out["partial_dependence"] = {{"feature", p.names[pd_feature]},
                               {"edges", edges},
                               {"bins", std::move(bins)}};
  Json group_json = Json::array();
  for (const auto& g : groups) {
    Json contrib = Json::array();
    for (std::size_t j = 0; j < g.contributions.size(); ++j) {
      contrib.push_back(
          {{"name", p.names[j]}, {"contribution", g.contributions[j]}});
    }
    group_json.push_back({{"label", g.label},
                          {"size", g.size},
                          {"contributions", std::move(contrib)}});
  }
  out["groups"] = std::move(group_json);
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct ErrorStats {
  double mean = 0.0, median = 0.0, std = 0.0, max = 0.0, mse = 0.0, r2 = 1.0;
};

ErrorStats Summarize(const std::vector<double>& reconstructed,
                     const std::vector<double>& predictions,
                     bool relative_to_unit_floor) {
  const std::size_t n = predictions.size();
  std::vector<double> ape(n);
  double se = 0.0, mean_pred = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = reconstructed[i] - predictions[i];
    const double denom = relative_to_unit_floor
                             ? std::max(1.0, std::abs(predictions[i]))
                             : std::abs(predictions[i]);
    ape[i] = std::abs(diff) / denom;
    se += diff * diff;
    mean_pred += predictions[i];
  }
  mean_pred /= static_cast<double>(n);
  double ss_tot = 0.0;
  for (double y : predictions) ss_tot += (y - mean_pred) * (y - mean_pred);
  ErrorStats s;
  s.mse = se / static_cast<double>(n);
  s.r2 = ss_tot > 0.0 ? 1.0 - se / ss_tot : 1.0;
  s.mean = std::accumulate(ape.begin(), ape.end(), 0.0) / static_cast<double>(n);
  s.max = *std::max_element(ape.begin(), ape.end());
  double var = 0.0;
  for (double a : ape) var += (a - s.mean) * (a - s.mean);
  s.std = std::sqrt(var / static_cast<double>(n));
  std::vector<double> sorted(ape);
  std::sort(sorted.begin(), sorted.end());
  s.median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
  return s;
}

Json StatsJson(const ErrorStats& s) {
  return {{"mse", s.mse},        {"r2", s.r2},
          {"mean_ape", s.mean},  {"median_ape", s.median},
          {"std_ape", s.std},    {"max_ape", s.max}};
}

std::size_t FullBudget(std::size_t m) {
  return m >= 63 ? std::numeric_limits<std::size_t>::max()
                 : (std::size_t{1} << m) - 2;
}

int CmdValidate(const RunConfig& cfg) {
  constexpr double kLocalAccuracyTol = 1e-10;
  constexpr double kConvergenceTol = 1e-2;
  constexpr std::size_t kConvergenceBudget = 500;
  constexpr double kOracleTol = 1e-8;
  constexpr double kGlmTol = 1e-6;
  constexpr double kGlmBaselineTol = 1e-8;
  constexpr std::size_t kMaxOracleFeatures = 10;
  constexpr std::size_t kMaxExactFeatures = 12;

  Pipeline p = BuildPipeline(cfg);
  const std::size_t n = p.row_ids.size();
  const double* x = xshap_table_data(p.rows.get());
  Json checks = Json::array();
  bool passed = true;

  // (a) local accuracy over the explained rows.
  Json accuracy = {{"name", "local_accuracy"}, {"threshold", kLocalAccuracyTol}};
  bool accuracy_ok = true;
  if (cfg.multiplicative()) {
    const BatchResult r =
        ExplainAll(p, cfg, XSHAP_METHOD_XSHAP, p.plan.get(), p.rows.get());
    std::vector<double> product(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = r.baseline;
      for (std::size_t j = 0; j < p.m; ++j) v *= r.contributions[i * p.m + j];
      product[i] = v;
    }
    const ErrorStats s = Summarize(product, r.predictions, false);
    accuracy["multiplicative"] = StatsJson(s);
    accuracy_ok &= s.mean <= kLocalAccuracyTol && s.max <= kLocalAccuracyTol;
  }
  if (cfg.additive()) {
    const BatchResult r = ExplainAll(p, cfg, XSHAP_METHOD_KERNEL_SHAP,
                                     p.plan.get(), p.rows.get());
    std::vector<double> sum(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = r.baseline;
      for (std::size_t j = 0; j < p.m; ++j) v += r.contributions[i * p.m + j];
      sum[i] = v;
    }
    const ErrorStats s = Summarize(sum, r.predictions, true);
    accuracy["additive"] = StatsJson(s);
    accuracy_ok &= s.mean <= kLocalAccuracyTol && s.max <= kLocalAccuracyTol;
  }
  accuracy["rows"] = n;
  accuracy["passed"] = accuracy_ok;
  passed &= accuracy_ok;
  checks.push_back(std::move(accuracy));

  const std::size_t check_rows = std::min(cfg.check_rows, n);
  std::vector<std::size_t> sample(check_rows);
  std::iota(sample.begin(), sample.end(), 0);
  xshap_table* raw = nullptr;
  Check(xshap_table_select_rows(p.rows.get(), sample.data(), sample.size(),
                                &raw));
  Table check_table(raw);
  const double* cx = xshap_table_data(check_table.get());

  // (b) convergence of multiplicative contributions with the budget.
  if (cfg.multiplicative() && check_rows > 0) {
    std::vector<std::size_t> budgets;
    std::stringstream ss(cfg.budgets);
    for (std::string item; std::getline(ss, item, ',');) {
      std::size_t b = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), b);
      if (ec != std::errc() || ptr != item.data() + item.size() || b < 2) {
        throw ConfigError("bad --budgets entry '" + item + "'");
      }
      budgets.push_back(std::min(b, FullBudget(p.m)));
    }
    std::sort(budgets.begin(), budgets.end());
    budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
    if (budgets.empty()) throw ConfigError("--budgets is empty");

    std::vector<std::vector<double>> psi;
    for (std::size_t b : budgets) {
      xshap_plan* plan = nullptr;
      Check(xshap_plan_create(p.m, b, &plan));
      Plan owned(plan);
      psi.push_back(ExplainAll(p, cfg, XSHAP_METHOD_XSHAP, owned.get(),
                               check_table.get())
                        .contributions);
    }
    Json curve = Json::array();
    const std::vector<double>& last = psi.back();
    std::optional<double> binding;
    for (std::size_t k = 0; k < budgets.size(); ++k) {
      double worst = 0.0;
      for (std::size_t i = 0; i < last.size(); ++i) {
        worst = std::max(worst, RelativeError(psi[k][i], last[i]));
      }
      curve.push_back({{"coalitions", budgets[k]}, {"max_relative_change", worst}});
      if (budgets[k] == kConvergenceBudget && budgets.back() > budgets[k]) {
        binding = worst;
      }
    }
    const bool ok = !binding || *binding <= kConvergenceTol;
    Json conv = {{"name", "convergence"},
                 {"rows", check_rows},
                 {"threshold", kConvergenceTol},
                 {"curve", std::move(curve)}};
    conv["binding_budget"] =
        binding ? Json(kConvergenceBudget) : Json(nullptr);
    conv["passed"] = ok;
    passed &= ok;
    checks.push_back(std::move(conv));
  }

  // (c) estimator at full budget vs brute-force oracle.
  {
    Json oracle = {{"name", "oracle_equivalence"}, {"threshold", kOracleTol}};
    if (p.m > kMaxOracleFeatures || check_rows == 0) {
      oracle["skipped"] = true;
      oracle["passed"] = true;
    } else {
      xshap_plan* plan = nullptr;
      Check(xshap_plan_create(p.m, FullBudget(p.m), &plan));
      Plan full(plan);
      double worst_mult = 0.0, worst_add = 0.0;
      std::vector<double> exact(p.m);
      if (cfg.multiplicative()) {
        const BatchResult est = ExplainAll(p, cfg, XSHAP_METHOD_XSHAP,
                                           full.get(), check_table.get());
        for (std::size_t i = 0; i < check_rows; ++i) {
          Check(xshap_exact(p.model.get(), p.reference.get(),
                            XSHAP_MODE_MULTIPLICATIVE, cx + i * p.m, p.m,
                            nullptr, nullptr, exact.data(), nullptr));
          for (std::size_t j = 0; j < p.m; ++j) {
            worst_mult = std::max(
                worst_mult, RelativeError(est.contributions[i * p.m + j],
                                          exact[j]));
          }
        }
        oracle["max_relative_error_multiplicative"] = worst_mult;
      }
      if (cfg.additive()) {
        const BatchResult est = ExplainAll(p, cfg, XSHAP_METHOD_KERNEL_SHAP,
                                           full.get(), check_table.get());
        for (std::size_t i = 0; i < check_rows; ++i) {
          Check(xshap_exact(p.model.get(), p.reference.get(),
                            XSHAP_MODE_ADDITIVE, cx + i * p.m, p.m, nullptr,
                            nullptr, exact.data(), nullptr));
          for (std::size_t j = 0; j < p.m; ++j) {
            const double diff =
                std::abs(est.contributions[i * p.m + j] - exact[j]);
            worst_add =
                std::max(worst_add, diff / std::max(1.0, std::abs(exact[j])));
          }
        }
        oracle["max_relative_error_additive"] = worst_add;
      }
      const bool ok = worst_mult <= kOracleTol && worst_add <= kOracleTol;
      oracle["rows"] = check_rows;
      oracle["passed"] = ok;
      passed &= ok;
    }
    checks.push_back(std::move(oracle));
  }

  // (d) log-GLM closed form vs brute-force oracle.
  if (cfg.model == "glm" && cfg.multiplicative()) {
    Json glm = {{"name", "glm_closed_form"},
                {"threshold", kGlmTol},
                {"baseline_threshold", kGlmBaselineTol}};
    if (p.m > kMaxExactFeatures || check_rows == 0) {
      glm["skipped"] = true;
      glm["passed"] = true;
    } else {
      const xshap_table* ref_table = xshap_reference_table(p.reference.get());
      double worst = 0.0, worst_base = 0.0;
      std::vector<double> exact(p.m), closed(p.m);
      for (std::size_t i = 0; i < check_rows; ++i) {
        double exact_base = 0.0, closed_base = 0.0;
        Check(xshap_exact(p.model.get(), p.reference.get(),
                          XSHAP_MODE_MULTIPLICATIVE, cx + i * p.m, p.m,
                          nullptr, &exact_base, exact.data(), nullptr));
        Check(xshap_glm_closed_form(p.model.get(), cx + i * p.m, p.m,
                                    ref_table, &closed_base, closed.data(),
                                    nullptr));
        for (std::size_t j = 0; j < p.m; ++j) {
          worst = std::max(worst, RelativeError(exact[j], closed[j]));
        }
        worst_base = std::max(worst_base, RelativeError(exact_base, closed_base));
      }
      const bool ok = worst <= kGlmTol && worst_base <= kGlmBaselineTol;
      glm["max_relative_error"] = worst;
      glm["baseline_relative_error"] = worst_base;
      glm["rows"] = check_rows;
      glm["passed"] = ok;
      passed &= ok;
    }
    checks.push_back(std::move(glm));
  }
  (void)x;

  Json out = {{"passed", passed},
              {"features", p.m},
              {"coalitions", xshap_plan_size(p.plan.get())},
              {"model", ModelJson(p, cfg)},
              {"checks", std::move(checks)}};
  std::cout << out.dump(2) << '\n';
  if (!passed) throw CheckFailure("validation checks failed");
  return kExitOk;
}

int CmdSynth(const RunConfig& cfg) {
  xshap_synth_options opts;
  xshap_synth_options_default(&opts);
  opts.rows = cfg.synth_rows;
  opts.features = cfg.synth_features;
  opts.seed = *cfg.seed;
  opts.intercept = cfg.intercept;
  opts.noise = cfg.noise;
  opts.correlation = cfg.correlation;
  opts.inessential = cfg.inessential;
  xshap_dataset* raw = nullptr;
  Check(xshap_dataset_synthesize(&opts, &raw));
  Dataset data(raw);
  Check(xshap_dataset_write_csv(data.get(), cfg.target.c_str(),
                                cfg.output.c_str()));
  return kExitOk;
}

void AddOptions(CLI::App& app, RunConfig& cfg) {
  app.add_option("--data", cfg.data, "Input CSV file");
  app.add_option("--target", cfg.target, "Target column name")
      ->capture_default_str();
  app.add_option("--model", cfg.model, "glm | gbt | extern")
      ->capture_default_str();
  app.add_option("--extern-cmd", cfg.extern_cmd,
                 "Command line of an external model process");
  app.add_option("--timeout-ms", cfg.timeout_ms,
                 "External model reply timeout")
      ->capture_default_str();
  app.add_option("--mode", cfg.mode, "multiplicative | additive | both")
      ->check(CLI::IsMember({"multiplicative", "additive", "both"}))
      ->capture_default_str();
  app.add_option("--ref-size", cfg.ref_size, "Reference sample size")
      ->capture_default_str();
  app.add_option("--coalitions", cfg.coalitions, "Coalition budget")
      ->capture_default_str();
  app.add_option("--split", cfg.split, "Train fraction")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed (required)");
  app.add_option("--rows", cfg.rows, "Test rows to explain, a:b or a");
  app.add_option("--filter", cfg.filters,
                 "Group filter such as \"age<30&sex==1\" (repeatable)");
  app.add_option("--pd-feature", cfg.pd_feature, "Partial dependence feature");
  app.add_option("--pd-bins", cfg.pd_bins, "Partial dependence bins")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Worker threads (default: all cores)");
  app.add_option("--trees", cfg.trees, "gbt: number of trees")
      ->capture_default_str();
  app.add_option("--depth", cfg.depth, "gbt: maximum depth")
      ->capture_default_str();
  app.add_option("--rate", cfg.rate, "gbt: learning rate")
      ->capture_default_str();
  app.add_option("--trim", cfg.trim,
                 "metrics: drop summary points outside [q, 1-q] quantiles")
      ->capture_default_str();
  app.add_option("--budgets", cfg.budgets,
                 "validate: comma-separated coalition budgets")
      ->capture_default_str();
  app.add_option("--check-rows", cfg.check_rows,
                 "validate: rows used by convergence and oracle checks")
      ->capture_default_str();
  app.add_option("--n", cfg.synth_rows, "synth: rows")->capture_default_str();
  app.add_option("--m", cfg.synth_features, "synth: features")
      ->capture_default_str();
  app.add_option("--noise", cfg.noise, "synth: noise sd on ln(y)")
      ->capture_default_str();
  app.add_option("--correlation", cfg.correlation,
                 "synth: pairwise feature correlation")
      ->capture_default_str();
  app.add_option("--intercept", cfg.intercept, "synth: intercept")
      ->capture_default_str();
  app.add_option("--inessential", cfg.inessential,
                 "synth: trailing features with zero effect")
      ->capture_default_str();
  app.add_option("--output", cfg.output, "synth: output path ('-' = stdout)")
      ->capture_default_str();
}

int Run(int argc, char** argv) {
  CLI::App app{"X-SHAP multiplicative and additive model explanations"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);
  RunConfig cfg;
  AddOptions(app, cfg);
  std::string command;
  for (const char* name : {"explain", "metrics", "validate", "synth"}) {
    app.add_subcommand(name)->fallthrough()->callback(
        [&command, name] { command = name; });
  }
  app.get_subcommand("explain")->description(
      "Per-row contributions of the selected test rows");
  app.get_subcommand("metrics")->description(
      "Importance, summary, partial dependence and group contributions");
  app.get_subcommand("validate")->description(
      "Local accuracy, convergence and oracle checks");
  app.get_subcommand("synth")->description("Write a seeded log-linear dataset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "xshap: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (!cfg.seed) throw ConfigError("--seed is required");
    if (cfg.jobs == 0) {
      cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    }
    if (command == "explain") return CmdExplain(cfg);
    if (command == "metrics") return CmdMetrics(cfg);
    if (command == "validate") return CmdValidate(cfg);
    return CmdSynth(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "xshap: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CheckFailure& e) {
    std::cerr << "xshap: numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ApiError& e) {
    std::cerr << "xshap: " << xshap_status_name(e.status())
              << " error: " << e.what() << '\n';
    return ExitCodeFor(e.status());
  } catch (const std::exception& e) {
    std::cerr << "xshap: internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace
}  // namespace xshap_cli

int main(int argc, char** argv) { return xshap_cli::Run(argc, argv); }
