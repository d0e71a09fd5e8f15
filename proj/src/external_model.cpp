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

#include "xshap/external_model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "xshap/error.hpp"
#include "xshap/text.hpp"

namespace xshap {
namespace {

void IgnoreSigpipeOnce() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction current {};
    if (sigaction(SIGPIPE, nullptr, &current) == 0 &&
        current.sa_handler == SIG_DFL) {
      signal(SIGPIPE, SIG_IGN);
    }
  });
}

std::string ReadTail(const std::string& path, std::size_t max_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  std::string all = ss.str();
  if (all.size() > max_bytes) all = all.substr(all.size() - max_bytes);
  while (!all.empty() && (all.back() == '\n' || all.back() == '\r')) {
    all.pop_back();
  }
  return all;
}

}  // namespace

ExternalModel::ExternalModel(std::string command, Options options)
    : command_(std::move(command)), options_(options) {
  IgnoreSigpipeOnce();

  char tmpl[] = "/tmp/xshap-extern-XXXXXX";
  const int err_fd = mkstemp(tmpl);
  if (err_fd < 0) {
    throw Error(ErrorCode::kExternalModel,
                std::string("cannot create stderr capture file: ") +
                    std::strerror(errno));
  }
  stderr_path_ = tmpl;

  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(err_fd);
    throw Error(ErrorCode::kExternalModel,
                std::string("pipe failed: ") + std::strerror(errno));
  }

  pid_ = fork();
  if (pid_ < 0) {
    close(err_fd);
    throw Error(ErrorCode::kExternalModel,
                std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_fd, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(err_fd);
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  std::lock_guard<std::mutex> lock(mu_);
  WriteAll("XSHAP-PROTO " + std::to_string(kProtocolVersion) + "\n");
  const std::string reply = ReadLine();
  if (Trim(reply) != "OK") Fail("handshake rejected: '" + reply + "'");
}

ExternalModel::~ExternalModel() { Shutdown(); }

void ExternalModel::Shutdown() {
  if (to_child_ >= 0) {
    if (!broken_) {
      const char bye[] = "BYE\n";
      [[maybe_unused]] auto n = write(to_child_, bye, sizeof(bye) - 1);
    }
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 200; ++i) {
      if (waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }
  if (!stderr_path_.empty()) {
    unlink(stderr_path_.c_str());
    stderr_path_.clear();
  }
}

void ExternalModel::Fail(const std::string& what) const {
  broken_ = true;
  std::string message = "external model '" + command_ + "': " + what;
  const std::string diag = ReadTail(stderr_path_, 2000);
  if (!diag.empty()) message += " [stderr: " + diag + "]";
  throw Error(ErrorCode::kExternalModel, message);
}

void ExternalModel::WriteAll(const std::string& data) const {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(std::string("write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::string ExternalModel::ReadLine() const {
  while (true) {
    const auto pos = buffer_.find('\n');
    if (pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(options_.timeout.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) Fail("timed out waiting for a reply");
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) Fail("model process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<double> ExternalModel::Predict(const DataTable& rows) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (broken_) Fail("channel unusable after an earlier error");

  std::string request = "PREDICT " + std::to_string(rows.rows()) + " " +
                        std::to_string(rows.cols()) + "\n";
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    auto x = rows.row(r);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j) request.push_back(',');
      request += FormatDouble(x[j]);
    }
    request.push_back('\n');
  }
  WriteAll(request);

  std::vector<std::string> lines(rows.rows());
  for (auto& line : lines) line = ReadLine();

  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto value = ParseDouble(lines[r]);
    if (!value) {
      Fail("non-numeric reply '" + lines[r] + "' for row " +
           std::to_string(r));
    }
    out[r] = *value;
  }
  if (options_.mode == PredictionMode::kMultiplicative) {
    for (std::size_t r = 0; r < out.size(); ++r) {
      if (!(out[r] > 0.0) || !std::isfinite(out[r])) {
        throw NonPositiveError(r, out[r], "external model prediction");
      }
    }
  }
  return out;
}

}  // namespace xshap
