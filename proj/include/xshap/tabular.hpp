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

#ifndef XSHAP_TABULAR_HPP_
#define XSHAP_TABULAR_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "xshap/data_table.hpp"

namespace xshap {

// Raw cells of a CSV file.
struct TabularFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 parsing: quoted fields, doubled quotes, CRLF or LF line ends.
// Throws ErrorCode::kIngestion naming the offending row.
TabularFile ParseCsv(std::istream& in);
TabularFile LoadCsv(const std::string& path);

void WriteCsv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

struct CategoricalColumn {
  std::string name;
  std::vector<std::string> levels;  // first-appearance order
  std::size_t first_feature = 0;    // index of the "name=levels[0]" column
};

// Numeric feature matrix plus target.
struct Dataset {
  DataTable features;
  std::vector<double> target;
  std::vector<CategoricalColumn> categorical;
};

// A column is numeric when every cell parses as a number; other columns are
// one-hot encoded into "col=value" indicators. The target column must be
// numeric; with require_positive_target every target value must be > 0.
Dataset EncodeDataset(const TabularFile& file, const std::string& target,
                      bool require_positive_target);

// Recovers the original cells of a one-hot encoded column.
std::vector<std::string> DecodeOneHot(const Dataset& data,
                                      const CategoricalColumn& column);

// mt19937_64 based draws whose results do not depend on the standard
// library's distribution implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, bound).
  std::uint64_t UniformIndex(std::uint64_t bound);
  // Uniform on [0, 1).
  double Uniform();
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> reference;  // subset of train
};

// Seeded shuffle of 0..n-1; the first ceil(fraction * n) go to train, the
// rest to test. The reference rows are a seeded sample without replacement of
// `reference_size` train rows.
SplitIndices SplitAndSample(std::size_t n, double fraction,
                            std::size_t reference_size, std::uint64_t seed);

struct SynthOptions {
  std::size_t rows = 1000;
  std::size_t features = 6;
  std::uint64_t seed = 1;
  double intercept = 1.0;
  double noise = 0.0;        // sd of the Gaussian noise on ln(y)
  double correlation = 0.0;  // pairwise correlation of the features, [0, 1)
  std::size_t inessential = 0;  // trailing features with zero coefficient
};

struct SynthData {
  Dataset data;
  double alpha = 0.0;
  std::vector<double> betas;
};

// ln(y) = alpha + sum_j beta_j x_j + noise, standard normal features.
SynthData GenerateSynthetic(const SynthOptions& options);

// Conjunction of single-column comparisons, written "col<v&other==w".
struct Condition {
  enum class Op { kLess, kLessEqual, kEqual, kGreaterEqual, kGreater };
  std::string column;
  Op op = Op::kLess;
  double value = 0.0;
};

struct RowFilter {
  std::string label;
  std::vector<Condition> conditions;
};

RowFilter ParseFilter(const std::string& text);

// Row indices of `table` satisfying every condition. Throws
// ErrorCode::kInvalidArgument for unknown columns.
std::vector<std::size_t> FilterRows(const DataTable& table,
                                    const RowFilter& filter);

}  // namespace xshap

#endif  // XSHAP_TABULAR_HPP_
