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

#ifndef XSHAP_EXTERNAL_MODEL_HPP_
#define XSHAP_EXTERNAL_MODEL_HPP_

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

#include "xshap/models.hpp"

namespace xshap {

// Predictor backed by a child process speaking a line protocol on its
// stdin/stdout:
//
//   engine: "XSHAP-PROTO 1"          model: "OK"
//   engine: "PREDICT <n> <m>"        then n lines of m comma-separated floats
//   model:  n lines, one float each
//   engine: "BYE"
//
// Floats are written with shortest round-trip formatting. One request is in
// flight at a time; concurrent Predict() calls are serialized.
class ExternalModel : public Predictor {
 public:
  static constexpr int kProtocolVersion = 1;

  struct Options {
    PredictionMode mode = PredictionMode::kMultiplicative;
    // Per-read deadline.
    std::chrono::milliseconds timeout{60000};
  };

  // Launches `command` through /bin/sh -c and completes the handshake.
  ExternalModel(std::string command, Options options);
  ~ExternalModel() override;

  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  std::vector<double> Predict(const DataTable& rows) const override;
  PredictionMode mode() const override { return options_.mode; }
  bool parallel_safe() const override { return false; }

  const std::string& command() const { return command_; }

 private:
  [[noreturn]] void Fail(const std::string& what) const;
  void WriteAll(const std::string& data) const;
  std::string ReadLine() const;
  void Shutdown();

  std::string command_;
  Options options_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string stderr_path_;

  mutable std::mutex mu_;
  mutable std::string buffer_;
  mutable bool broken_ = false;
};

}  // namespace xshap

#endif  // XSHAP_EXTERNAL_MODEL_HPP_
