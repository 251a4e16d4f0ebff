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

#include "httplib.h"
#include "kgwb/oracle.hpp"

namespace kgwb {
namespace {

class HttplibClient final : public HttpClient {
 public:
  explicit HttplibClient(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse post_json(const std::string& url, const std::vector<std::pair<std::string, std::string>>& headers,
                         const std::string& body) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      return HttpResponse{0, "", "not an absolute URL: " + url};
    }
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);

    auto res = client.Post(path, h, body, "application/json");
    if (!res) return HttpResponse{0, "", httplib::to_string(res.error())};
    return HttpResponse{res->status, res->body, ""};
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::shared_ptr<HttpClient> make_http_client(std::chrono::seconds timeout) {
  return std::make_shared<HttplibClient>(timeout);
}

}  // namespace kgwb
