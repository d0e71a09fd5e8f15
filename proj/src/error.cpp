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

#include "xshap/error.hpp"

#include <sstream>

namespace xshap {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kNonPositive:
      return "non-positive-value";
    case ErrorCode::kRankDeficient:
      return "rank-deficient";
    case ErrorCode::kTooManyFeatures:
      return "too-many-features";
    case ErrorCode::kExplanation:
      return "explanation";
    case ErrorCode::kExternalModel:
      return "external-model";
    case ErrorCode::kIngestion:
      return "ingestion";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "unknown";
}

namespace {

std::string FormatNonPositive(std::size_t index, double value,
                              const std::string& what) {
  std::ostringstream os;
  os << what << ": value " << value << " at index " << index
     << " is not strictly positive";
  return os.str();
}

std::string FormatRankDeficient(double condition, const std::string& what) {
  std::ostringstream os;
  os << what << ": normal matrix is rank deficient (condition estimate "
     << condition << ")";
  return os.str();
}

}  // namespace

NonPositiveError::NonPositiveError(std::size_t index, double value,
                                   const std::string& what)
    : Error(ErrorCode::kNonPositive, FormatNonPositive(index, value, what)),
      index_(index),
      value_(value) {}

RankDeficientError::RankDeficientError(double condition,
                                       const std::string& what)
    : Error(ErrorCode::kRankDeficient, FormatRankDeficient(condition, what)),
      condition_(condition) {}

void ThrowInvalidArgument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

void ThrowShape(const std::string& message) {
  throw Error(ErrorCode::kShape, message);
}

}  // namespace xshap
