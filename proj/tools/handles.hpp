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

// RAII owners for the C API handles used by the command line tool.

#ifndef XSHAP_TOOLS_HANDLES_HPP_
#define XSHAP_TOOLS_HANDLES_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "xshap/xshap.h"

namespace xshap_cli {

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Table = Handle<xshap_table, xshap_table_free>;
using Dataset = Handle<xshap_dataset, xshap_dataset_free>;
using Split = Handle<xshap_split, xshap_split_free>;
using Model = Handle<xshap_model, xshap_model_free>;
using Reference = Handle<xshap_reference, xshap_reference_free>;
using Plan = Handle<xshap_plan, xshap_plan_free>;
using Batch = Handle<xshap_batch, xshap_batch_free>;

// A failed C API call.
class ApiError : public std::runtime_error {
 public:
  ApiError(xshap_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  xshap_status status() const { return status_; }

 private:
  xshap_status status_;
};

inline void Check(xshap_status status) {
  if (status != XSHAP_OK) throw ApiError(status, xshap_last_error());
}

}  // namespace xshap_cli

#endif  // XSHAP_TOOLS_HANDLES_HPP_
