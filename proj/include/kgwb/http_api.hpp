// Copyright 2026 The kgwb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kgwb/workbench.hpp"

namespace kgwb {

/// HTTP status for a workbench error.
int http_status(const Error& e);

/// JSON API over a Workbench. The server runs on the calling thread of listen().
class ApiServer {
 public:
  explicit ApiServer(Workbench& workbench);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds an ephemeral port and returns it.
  int bind_to_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Serves until stop(). Call after one of the bind functions.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  /// "METHOD /path" of every request handled so far.
  std::vector<std::string> request_log() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kgwb
