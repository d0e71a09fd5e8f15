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

#include "xshap/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "xshap/error.hpp"
#include "xshap/text.hpp"

namespace xshap {
namespace {

[[noreturn]] void ThrowIngestion(const std::string& message) {
  throw Error(ErrorCode::kIngestion, message);
}

// Reads one record; false at end of input. `line` counts physical lines.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields,
                std::size_t& line) {
  fields.clear();
  int ch = in.get();
  if (ch == EOF) return false;
  ++line;
  const std::size_t start_line = line;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  while (true) {
    if (ch == EOF) {
      if (quoted) {
        ThrowIngestion("unterminated quoted field starting on line " +
                       std::to_string(start_line));
      }
      fields.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
    ch = in.get();
  }
}

std::string QuoteIfNeeded(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

TabularFile ParseCsv(std::istream& in) {
  TabularFile file;
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!ReadRecord(in, fields, line) ||
      (fields.size() == 1 && Trim(fields[0]).empty())) {
    ThrowIngestion("empty file: no header row");
  }
  for (auto& f : fields) f = std::string(Trim(f));
  file.header = fields;
  while (ReadRecord(in, fields, line)) {
    if (fields.size() == 1 && Trim(fields[0]).empty()) continue;
    if (fields.size() != file.header.size()) {
      ThrowIngestion("ragged row " + std::to_string(file.rows.size()) +
                     " (line " + std::to_string(line) + "): " +
                     std::to_string(fields.size()) + " fields, header has " +
                     std::to_string(file.header.size()));
    }
    file.rows.push_back(fields);
  }
  if (file.rows.empty()) ThrowIngestion("empty file: no data rows");
  return file;
}

TabularFile LoadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIngestion("cannot open '" + path + "'");
  return ParseCsv(in);
}

void WriteCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  auto write_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << QuoteIfNeeded(cells[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
}

Dataset EncodeDataset(const TabularFile& file, const std::string& target,
                      bool require_positive_target) {
  const auto target_it =
      std::find(file.header.begin(), file.header.end(), target);
  if (target_it == file.header.end()) {
    ThrowIngestion("target column '" + target + "' not found");
  }
  const std::size_t target_col =
      static_cast<std::size_t>(target_it - file.header.begin());
  const std::size_t n = file.rows.size();

  Dataset data;
  data.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = ParseDouble(file.rows[i][target_col]);
    if (!v || !std::isfinite(*v)) {
      ThrowIngestion("unparsable target '" + file.rows[i][target_col] +
                     "' at row " + std::to_string(i) + ", column '" + target +
                     "'");
    }
    if (require_positive_target && !(*v > 0.0)) {
      ThrowIngestion("non-positive target " + file.rows[i][target_col] +
                     " at row " + std::to_string(i) + ", column '" + target +
                     "'");
    }
    data.target[i] = *v;
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t c = 0; c < file.header.size(); ++c) {
    if (c == target_col) continue;
    std::vector<double> numeric(n);
    bool is_numeric = true;
    for (std::size_t i = 0; i < n && is_numeric; ++i) {
      const auto v = ParseDouble(file.rows[i][c]);
      if (v && std::isfinite(*v)) {
        numeric[i] = *v;
      } else {
        is_numeric = false;
      }
    }
    if (is_numeric) {
      names.push_back(file.header[c]);
      columns.push_back(std::move(numeric));
      continue;
    }
    CategoricalColumn cat;
    cat.name = file.header[c];
    cat.first_feature = names.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& cell = file.rows[i][c];
      if (std::find(cat.levels.begin(), cat.levels.end(), cell) ==
          cat.levels.end()) {
        cat.levels.push_back(cell);
      }
    }
    for (const auto& level : cat.levels) {
      std::vector<double> indicator(n);
      for (std::size_t i = 0; i < n; ++i) {
        indicator[i] = file.rows[i][c] == level ? 1.0 : 0.0;
      }
      names.push_back(cat.name + "=" + level);
      columns.push_back(std::move(indicator));
    }
    data.categorical.push_back(std::move(cat));
  }
  if (columns.empty()) ThrowIngestion("no feature columns besides the target");

  const std::size_t m = columns.size();
  std::vector<double> values(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) values[i * m + j] = columns[j][i];
  }
  data.features = DataTable(n, m, std::move(values), std::move(names));
  return data;
}

std::vector<std::string> DecodeOneHot(const Dataset& data,
                                      const CategoricalColumn& column) {
  const DataTable& t = data.features;
  std::vector<std::string> out(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t k = 0; k < column.levels.size(); ++k) {
      if (t.at(i, column.first_feature + k) == 1.0) {
        out[i] = column.levels[k];
        break;
      }
    }
  }
  return out;
}

std::uint64_t SeededRng::UniformIndex(std::uint64_t bound) {
  if (bound == 0) ThrowInvalidArgument("UniformIndex: empty range");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

double SeededRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = Uniform();
  } while (u1 <= 0.0);
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

SplitIndices SplitAndSample(std::size_t n, double fraction,
                            std::size_t reference_size, std::uint64_t seed) {
  if (n < 3) ThrowInvalidArgument("need at least 3 rows to split");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    ThrowInvalidArgument("split fraction must lie in (0, 1)");
  }
  if (reference_size < 1) ThrowInvalidArgument("reference size must be >= 1");

  SeededRng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.Shuffle(order);

  const auto n_train = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n)));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + n_train);
  out.test.assign(order.begin() + n_train, order.end());
  if (reference_size > out.train.size()) {
    ThrowInvalidArgument("reference size " + std::to_string(reference_size) +
                         " exceeds the " + std::to_string(out.train.size()) +
                         " training rows");
  }
  std::vector<std::size_t> pool(out.train);
  rng.Shuffle(pool);
  out.reference.assign(pool.begin(), pool.begin() + reference_size);
  return out;
}

SynthData GenerateSynthetic(const SynthOptions& options) {
  if (options.rows < 1 || options.features < 1) {
    ThrowInvalidArgument("synthetic data needs rows >= 1 and features >= 1");
  }
  if (!(options.correlation >= 0.0 && options.correlation < 1.0)) {
    ThrowInvalidArgument("correlation must lie in [0, 1)");
  }
  if (options.inessential > options.features) {
    ThrowInvalidArgument("more inessential features than features");
  }
  const std::size_t n = options.rows;
  const std::size_t m = options.features;
  SeededRng rng(options.seed);

  SynthData out;
  out.alpha = options.intercept;
  out.betas.resize(m, 0.0);
  for (std::size_t j = 0; j + options.inessential < m; ++j) {
    out.betas[j] = -0.6 + 1.2 * rng.Uniform();
  }

  const double shared = std::sqrt(options.correlation);
  const double own = std::sqrt(1.0 - options.correlation);
  std::vector<double> values(n * m);
  out.data.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double common = rng.Normal();
    double eta = out.alpha;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = own * rng.Normal() + shared * common;
      values[i * m + j] = x;
      eta += out.betas[j] * x;
    }
    if (options.noise > 0.0) eta += options.noise * rng.Normal();
    out.data.target[i] = std::exp(eta);
  }
  out.data.features = DataTable(n, m, std::move(values));
  return out;
}

RowFilter ParseFilter(const std::string& text) {
  static constexpr std::pair<std::string_view, Condition::Op> kOps[] = {
      {"<=", Condition::Op::kLessEqual}, {">=", Condition::Op::kGreaterEqual},
      {"==", Condition::Op::kEqual},     {"<", Condition::Op::kLess},
      {">", Condition::Op::kGreater},
  };
  RowFilter filter;
  filter.label = text;
  for (const std::string& part : Split(text, '&')) {
    const std::string_view term = Trim(part);
    std::size_t best_pos = std::string_view::npos;
    std::size_t best_len = 0;
    Condition::Op best_op = Condition::Op::kLess;
    for (const auto& [token, op] : kOps) {
      const auto pos = term.find(token);
      if (pos == std::string_view::npos) continue;
      if (pos < best_pos || (pos == best_pos && token.size() > best_len)) {
        best_pos = pos;
        best_len = token.size();
        best_op = op;
      }
    }
    if (best_pos == std::string_view::npos || best_pos == 0) {
      ThrowInvalidArgument("filter term '" + std::string(term) +
                           "' is not of the form col<op>value");
    }
    Condition cond;
    cond.column = std::string(Trim(term.substr(0, best_pos)));
    cond.op = best_op;
    const auto value = ParseDouble(term.substr(best_pos + best_len));
    if (!value) {
      ThrowInvalidArgument("filter term '" + std::string(term) +
                           "' has a non-numeric value");
    }
    cond.value = *value;
    filter.conditions.push_back(std::move(cond));
  }
  return filter;
}

std::vector<std::size_t> FilterRows(const DataTable& table,
                                    const RowFilter& filter) {
  std::vector<std::size_t> cols;
  for (const auto& cond : filter.conditions) {
    const std::size_t c = table.find(cond.column);
    if (c >= table.cols()) {
      ThrowInvalidArgument("filter '" + filter.label +
                           "' names unknown column '" + cond.column + "'");
    }
    cols.push_back(c);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    bool keep = true;
    for (std::size_t k = 0; k < cols.size() && keep; ++k) {
      const double v = table.at(i, cols[k]);
      const double t = filter.conditions[k].value;
      switch (filter.conditions[k].op) {
        case Condition::Op::kLess: keep = v < t; break;
        case Condition::Op::kLessEqual: keep = v <= t; break;
        case Condition::Op::kEqual: keep = v == t; break;
        case Condition::Op::kGreaterEqual: keep = v >= t; break;
        case Condition::Op::kGreater: keep = v > t; break;
      }
    }
    if (keep) out.push_back(i);
  }
  return out;
}

}  // namespace xshap
