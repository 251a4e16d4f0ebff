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

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgwb/common.hpp"
#include "kgwb/prompts.hpp"

namespace kgwb {

/// Sampling settings sent with every request. Unset fields fall back to the provider default.
struct DecodingParams {
  std::string model;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  std::optional<int> seed;

  json to_json() const;
  static DecodingParams from_json(const json& j);
  friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

struct OracleRequest {
  PromptKind kind = PromptKind::KgcNoBf;
  std::string prompt;
  DecodingParams params;
  // Distinguishes the repeats of one prompt so each can be recorded and replayed on its own.
  int sample = 0;
  std::string template_version;

  std::string digest() const;
};

enum class TransportKind { Live, Replay, Scripted };

std::string_view to_string(TransportKind kind);

struct TransportReply {
  std::string text;
  int attempt = 1;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportKind kind() const = 0;
  virtual TransportReply send(const OracleRequest& request) = 0;
};

/// Reads `<dir>/<digest>.json`. Throws ReplayMiss when absent.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}
  TransportKind kind() const override { return TransportKind::Replay; }
  TransportReply send(const OracleRequest& request) override;
  const std::string& dir() const noexcept { return dir_; }

 private:
  std::string dir_;
};

/// Forwards to another transport and writes each reply as a replay fixture.
class RecordingTransport final : public Transport {
 public:
  RecordingTransport(std::shared_ptr<Transport> inner, std::string fixture_dir)
      : inner_(std::move(inner)), dir_(std::move(fixture_dir)) {}
  TransportKind kind() const override { return inner_->kind(); }
  TransportReply send(const OracleRequest& request) override;

 private:
  std::shared_ptr<Transport> inner_;
  std::string dir_;
  std::mutex write_mu_;
};

class ScriptedTransport final : public Transport {
 public:
  using Script = std::function<std::string(const OracleRequest&)>;
  explicit ScriptedTransport(Script script) : script_(std::move(script)) {}
  TransportKind kind() const override { return TransportKind::Scripted; }
  TransportReply send(const OracleRequest& request) override;

  /// Builds a script from JSON rules, tried in order:
  /// {"rules": [{"kind": "...", "contains": "...", "responses": ["...", ...]}], "default": "..."}
  /// Sample k (1-based, 0 for single prompts) takes the rule's k-th response, clamped to the last one.
  static Script from_json(const json& spec);

 private:
  Script script_;
};

json fixture_json(const OracleRequest& request, const std::string& response);
void write_fixture(const std::string& dir, const OracleRequest& request, const std::string& response);

struct HttpResponse {
  int status = 0;  // 0 when no HTTP response arrived
  std::string body;
  std::string error;
};

class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse post_json(const std::string& url, const std::vector<std::pair<std::string, std::string>>& headers,
                                 const std::string& body) = 0;
};

std::shared_ptr<HttpClient> make_http_client(std::chrono::seconds timeout = std::chrono::seconds(120));

struct LiveConfig {
  std::string endpoint;  // full chat-completions URL
  std::string api_key;
  int max_attempts = 5;
  std::chrono::milliseconds backoff{500};
};

/// OpenAI-compatible chat completion. Retries 429, 5xx and network failures.
class LiveTransport final : public Transport {
 public:
  LiveTransport(LiveConfig config, std::shared_ptr<HttpClient> client);
  TransportKind kind() const override { return TransportKind::Live; }
  TransportReply send(const OracleRequest& request) override;

  static json request_body(const OracleRequest& request);

 private:
  LiveConfig config_;
  std::shared_ptr<HttpClient> client_;
};

struct OracleTranscript {
  std::string prompt_text;
  PromptKind prompt_kind = PromptKind::KgcNoBf;
  std::string response_text;
  TransportKind transport = TransportKind::Scripted;
  std::string request_digest;
  std::string timestamp;
  int attempt = 1;
  int sample = 0;
  DecodingParams params;
};

void to_json(json& j, const OracleTranscript& t);
void from_json(const json& j, OracleTranscript& t);

/// A transport bound to templates and decoding parameters, with a cap on in-flight requests.
class Oracle {
 public:
  static constexpr int kDefaultMaxInFlight = 4;

  Oracle(std::shared_ptr<Transport> transport, PromptTemplates templates, DecodingParams params = {},
         Clock clock = system_clock(), int max_in_flight = kDefaultMaxInFlight);

  OracleTranscript complete(PromptKind kind, const std::string& prompt, int sample = 0);

  const PromptTemplates& templates() const noexcept { return templates_; }
  const DecodingParams& params() const noexcept { return params_; }
  int max_in_flight() const noexcept { return max_in_flight_; }
  TransportKind transport_kind() const { return transport_->kind(); }

 private:
  std::shared_ptr<Transport> transport_;
  PromptTemplates templates_;
  DecodingParams params_;
  Clock clock_;
  int max_in_flight_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

struct OracleEnv {
  std::string mode = "replay";  // live | replay | record | scripted
  std::string endpoint;
  std::string api_key;
  std::string model;
  std::string fixture_dir;
  std::string script_path;

  static OracleEnv from_environment();
};

/// Builds the transport selected by `env`. Scripted mode loads the script JSON at `script_path`.
std::shared_ptr<Transport> make_transport(const OracleEnv& env, std::shared_ptr<HttpClient> client = nullptr);

/// The largest region of `response` that parses as Turtle, or the whole text when none does.
std::string extract_rdf(std::string_view response);

enum class Verdict { Yes, No, Indeterminate };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

struct EntailmentVerdict {
  Verdict value = Verdict::Indeterminate;
  std::string rationale;
};

EntailmentVerdict parse_entailment_verdict(std::string_view response);

}  // namespace kgwb
