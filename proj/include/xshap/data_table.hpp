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

#ifndef XSHAP_DATA_TABLE_HPP_
#define XSHAP_DATA_TABLE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace xshap {

// Dense row-major n x m matrix of feature values with column names.
class DataTable {
 public:
  DataTable() = default;
  DataTable(std::size_t rows, std::size_t cols);
  DataTable(std::size_t rows, std::size_t cols, std::vector<double> values,
            std::vector<std::string> names = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::vector<double> column(std::size_t c) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }
  void set_names(std::vector<std::string> names);

  // Index of the named column, or cols() when absent.
  std::size_t find(const std::string& name) const;

  DataTable select_rows(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
};

// Generated names "x1".."xm".
std::vector<std::string> DefaultFeatureNames(std::size_t m);

}  // namespace xshap

#endif  // XSHAP_DATA_TABLE_HPP_
