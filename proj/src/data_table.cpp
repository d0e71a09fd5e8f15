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

#include "xshap/data_table.hpp"

#include <algorithm>
#include <utility>

#include "xshap/error.hpp"

namespace xshap {

DataTable::DataTable(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      values_(rows * cols, 0.0),
      names_(DefaultFeatureNames(cols)) {}

DataTable::DataTable(std::size_t rows, std::size_t cols,
                     std::vector<double> values,
                     std::vector<std::string> names)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    ThrowShape("DataTable: expected " + std::to_string(rows * cols) +
               " values, got " + std::to_string(values_.size()));
  }
  set_names(names.empty() ? DefaultFeatureNames(cols) : std::move(names));
}

std::vector<double> DataTable::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

void DataTable::set_names(std::vector<std::string> names) {
  if (names.size() != cols_) {
    ThrowShape("DataTable: " + std::to_string(names.size()) +
               " names for " + std::to_string(cols_) + " columns");
  }
  names_ = std::move(names);
}

std::size_t DataTable::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return static_cast<std::size_t>(it - names_.begin());
}

DataTable DataTable::select_rows(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * cols_);
  for (std::size_t r : indices) {
    if (r >= rows_) {
      ThrowInvalidArgument("DataTable: row index " + std::to_string(r) +
                           " out of range");
    }
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
  }
  return DataTable(indices.size(), cols_, std::move(values), names_);
}

std::vector<std::string> DefaultFeatureNames(std::size_t m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t j = 0; j < m; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

}  // namespace xshap
