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

#ifndef XSHAP_ERROR_HPP_
#define XSHAP_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace xshap {

enum class ErrorCode {
  kInvalidArgument,
  kShape,
  kNonPositive,
  kRankDeficient,
  kTooManyFeatures,
  kExplanation,
  kExternalModel,
  kIngestion,
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type for the library. The code drives the C API status
// and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A value <= 0 (or non-finite) where a strictly positive one is required.
class NonPositiveError : public Error {
 public:
  NonPositiveError(std::size_t index, double value, const std::string& what);

  std::size_t index() const { return index_; }
  double value() const { return value_; }

 private:
  std::size_t index_;
  double value_;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(double condition, const std::string& what);

  // Estimated 2-norm condition number of the normal matrix (inf if singular).
  double condition() const { return condition_; }

 private:
  double condition_;
};

[[noreturn]] void ThrowInvalidArgument(const std::string& message);
[[noreturn]] void ThrowShape(const std::string& message);

}  // namespace xshap

#endif  // XSHAP_ERROR_HPP_
