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

#include "kgwb/oracle.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "kgwb/rdf.hpp"

namespace kgwb {
namespace fs = std::filesystem;

json DecodingParams::to_json() const {
  json j{{"model", model}};
  if (temperature) j["temperature"] = *temperature;
  if (top_p) j["top_p"] = *top_p;
  if (max_tokens) j["max_tokens"] = *max_tokens;
  if (seed) j["seed"] = *seed;
  return j;
}

DecodingParams DecodingParams::from_json(const json& j) {
  DecodingParams p;
  p.model = j.value("model", std::string{});
  if (j.contains("temperature")) p.temperature = j["temperature"].get<double>();
  if (j.contains("top_p")) p.top_p = j["top_p"].get<double>();
  if (j.contains("max_tokens")) p.max_tokens = j["max_tokens"].get<int>();
  if (j.contains("seed")) p.seed = j["seed"].get<int>();
  return p;
}

std::string OracleRequest::digest() const {
  const json key{{"template_version", template_version}, {"prompt", prompt}, {"params", params.to_json()},
                 {"sample", sample}};
  return sha256_hex(key.dump());
}

std::string_view to_string(TransportKind kind) {
  switch (kind) {
    case TransportKind::Live: return "live";
    case TransportKind::Replay: return "replay";
    case TransportKind::Scripted: return "scripted";
  }
  return "unknown";
}

json fixture_json(const OracleRequest& request, const std::string& response) {
  return json{{"request_digest", request.digest()},
              {"template_version", request.template_version},
              {"prompt_kind", to_string(request.kind)},
              {"prompt", request.prompt},
              {"params", request.params.to_json()},
              {"sample", request.sample},
              {"response", response}};
}

void write_fixture(const std::string& dir, const OracleRequest& request, const std::string& response) {
  write_file_atomic((fs::path(dir) / (request.digest() + ".json")).string(),
                    fixture_json(request, response).dump(2) + "\n");
}

TransportReply ReplayTransport::send(const OracleRequest& request) {
  const std::string digest = request.digest();
  const fs::path path = fs::path(dir_) / (digest + ".json");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::ReplayMiss, "no fixture for request digest " + digest + " in " + dir_);
  }
  try {
    const json j = json::parse(read_file(path.string()));
    return TransportReply{j.at("response").get<std::string>(), 1};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::TransportError, "malformed fixture " + path.string() + ": " + e.what());
  }
}

TransportReply RecordingTransport::send(const OracleRequest& request) {
  TransportReply reply = inner_->send(request);
  std::lock_guard lock(write_mu_);
  write_fixture(dir_, request, reply.text);
  return reply;
}

TransportReply ScriptedTransport::send(const OracleRequest& request) { return TransportReply{script_(request), 1}; }

ScriptedTransport::Script ScriptedTransport::from_json(const json& spec) {
  struct Rule {
    std::optional<PromptKind> kind;
    std::string contains;
    std::vector<std::string> responses;
  };
  std::vector<Rule> rules;
  for (const auto& r : spec.value("rules", json::array())) {
    Rule rule;
    if (r.contains("kind")) rule.kind = prompt_kind_from_string(r["kind"].get<std::string>());
    rule.contains = r.value("contains", std::string{});
    if (r.contains("responses")) {
      rule.responses = r["responses"].get<std::vector<std::string>>();
    } else {
      rule.responses.push_back(r.at("response").get<std::string>());
    }
    if (rule.responses.empty()) throw Error(ErrorCode::InvalidArgument, "scripted rule without responses");
    rules.push_back(std::move(rule));
  }
  std::optional<std::string> fallback;
  if (spec.contains("default")) fallback = spec["default"].get<std::string>();
  return [rules = std::move(rules), fallback](const OracleRequest& req) -> std::string {
    for (const auto& rule : rules) {
      if (rule.kind && *rule.kind != req.kind) continue;
      if (!rule.contains.empty() && req.prompt.find(rule.contains) == std::string::npos) continue;
      const auto i = std::min<std::size_t>(req.sample > 0 ? static_cast<std::size_t>(req.sample - 1) : 0,
                                           rule.responses.size() - 1);
      return rule.responses[i];
    }
    if (fallback) return *fallback;
    throw Error(ErrorCode::TransportError, "no scripted response for " + std::string(to_string(req.kind)) +
                                               " request " + req.digest());
  };
}

LiveTransport::LiveTransport(LiveConfig config, std::shared_ptr<HttpClient> client)
    : config_(std::move(config)), client_(std::move(client)) {
  if (config_.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "live transport needs an endpoint URL");
  if (config_.max_attempts < 1) throw Error(ErrorCode::InvalidArgument, "max_attempts must be at least 1");
  if (!client_) client_ = make_http_client();
}

json LiveTransport::request_body(const OracleRequest& request) {
  json body = request.params.to_json();
  body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
  return body;
}

TransportReply LiveTransport::send(const OracleRequest& request) {
  const std::string body = request_body(request).dump();
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config_.api_key);

  HttpResponse last;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    last = client_->post_json(config_.endpoint, headers, body);
    if (last.status == 200) {
      try {
        const json j = json::parse(last.body);
        return TransportReply{j.at("choices").at(0).at("message").at("content").get<std::string>(), attempt};
      } catch (const json::exception& e) {
        throw Error(ErrorCode::TransportError, std::string("unexpected completion payload: ") + e.what());
      }
    }
    const bool transient = last.status == 0 || last.status == 429 || last.status >= 500;
    if (!transient) {
      throw Error(ErrorCode::TransportError,
                  "HTTP " + std::to_string(last.status) + ": " + last.body.substr(0, 300));
    }
    if (attempt < config_.max_attempts && config_.backoff.count() > 0) {
      std::this_thread::sleep_for(config_.backoff * (1 << std::min(attempt - 1, 6)));
    }
  }
  const std::string tries = std::to_string(config_.max_attempts) + " attempts";
  if (last.status == 429) throw Error(ErrorCode::RateLimited, "still rate limited after " + tries);
  if (last.status == 0) throw Error(ErrorCode::TransportError, "network failure after " + tries + ": " + last.error);
  throw Error(ErrorCode::TransportError, "HTTP " + std::to_string(last.status) + " after " + tries);
}

void to_json(json& j, const OracleTranscript& t) {
  j = json{{"prompt_text", t.prompt_text},
           {"prompt_kind", to_string(t.prompt_kind)},
           {"response_text", t.response_text},
           {"transport", to_string(t.transport)},
           {"request_digest", t.request_digest},
           {"timestamp", t.timestamp},
           {"attempt", t.attempt},
           {"sample", t.sample},
           {"params", t.params.to_json()}};
}

void from_json(const json& j, OracleTranscript& t) {
  t.prompt_text = j.at("prompt_text").get<std::string>();
  t.prompt_kind = prompt_kind_from_string(j.at("prompt_kind").get<std::string>());
  t.response_text = j.at("response_text").get<std::string>();
  const auto transport = j.at("transport").get<std::string>();
  t.transport = transport == "live" ? TransportKind::Live
                : transport == "replay" ? TransportKind::Replay
                                        : TransportKind::Scripted;
  t.request_digest = j.at("request_digest").get<std::string>();
  t.timestamp = j.at("timestamp").get<std::string>();
  t.attempt = j.at("attempt").get<int>();
  t.sample = j.value("sample", 0);
  t.params = DecodingParams::from_json(j.at("params"));
}

Oracle::Oracle(std::shared_ptr<Transport> transport, PromptTemplates templates, DecodingParams params, Clock clock,
               int max_in_flight)
    : transport_(std::move(transport)),
      templates_(std::move(templates)),
      params_(std::move(params)),
      clock_(std::move(clock)),
      max_in_flight_(max_in_flight) {
  if (!transport_) throw Error(ErrorCode::InvalidArgument, "oracle needs a transport");
  if (max_in_flight_ < 1) throw Error(ErrorCode::InvalidArgument, "max_in_flight must be at least 1");
  slots_ = std::make_unique<std::counting_semaphore<>>(max_in_flight_);
}

OracleTranscript Oracle::complete(PromptKind kind, const std::string& prompt, int sample) {
  OracleRequest request{kind, prompt, params_, sample, templates_.version()};
  slots_->acquire();
  TransportReply reply;
  try {
    reply = transport_->send(request);
  } catch (...) {
    slots_->release();
    throw;
  }
  slots_->release();

  OracleTranscript t;
  t.prompt_text = prompt;
  t.prompt_kind = kind;
  t.response_text = std::move(reply.text);
  t.transport = transport_->kind();
  t.request_digest = request.digest();
  t.timestamp = clock_();
  t.attempt = reply.attempt;
  t.sample = sample;
  t.params = params_;
  return t;
}

namespace {

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

std::string chat_completions_url(std::string endpoint) {
  while (!endpoint.empty() && endpoint.back() == '/') endpoint.pop_back();
  constexpr std::string_view kSuffix = "/chat/completions";
  if (endpoint.size() < kSuffix.size() || endpoint.compare(endpoint.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
    endpoint += kSuffix;
  }
  return endpoint;
}

}  // namespace

OracleEnv OracleEnv::from_environment() {
  OracleEnv env;
  env.mode = env_or("ORACLE_MODE", "replay");
  env.endpoint = env_or("ORACLE_ENDPOINT");
  env.api_key = env_or("ORACLE_API_KEY");
  env.model = env_or("ORACLE_MODEL");
  env.fixture_dir = env_or("FIXTURE_DIR");
  env.script_path = env_or("ORACLE_SCRIPT");
  return env;
}

std::shared_ptr<Transport> make_transport(const OracleEnv& env, std::shared_ptr<HttpClient> client) {
  auto live = [&]() {
    if (env.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "ORACLE_ENDPOINT is not set");
    return std::make_shared<LiveTransport>(LiveConfig{chat_completions_url(env.endpoint), env.api_key},
                                           client ? client : make_http_client());
  };
  auto fixtures = [&]() {
    if (env.fixture_dir.empty()) throw Error(ErrorCode::InvalidArgument, "FIXTURE_DIR is not set");
    return env.fixture_dir;
  };
  if (env.mode == "live") return live();
  if (env.mode == "replay") return std::make_shared<ReplayTransport>(fixtures());
  if (env.mode == "record") return std::make_shared<RecordingTransport>(live(), fixtures());
  if (env.mode == "scripted") {
    if (env.script_path.empty()) throw Error(ErrorCode::InvalidArgument, "ORACLE_SCRIPT is not set");
    return std::make_shared<ScriptedTransport>(ScriptedTransport::from_json(json::parse(read_file(env.script_path))));
  }
  throw Error(ErrorCode::InvalidArgument, "ORACLE_MODE must be live, replay, record or scripted, not '" + env.mode + "'");
}

// ---------------------------------------------------------------------------
// Response extraction

namespace {

constexpr std::size_t kMaxSearchLines = 400;

bool parses_with_triples(std::string_view text) {
  try {
    return !rdf::parse_ttl(text).facts.empty();
  } catch (const Error&) {
    return false;
  }
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && to_lower(s.substr(0, prefix.size())) == prefix;
}

// A line that reads as a Turtle statement rather than prose. Regions that would
// drop such a line are rejected so a syntax error inside the RDF is not hidden.
bool looks_like_turtle(std::string_view raw) {
  const std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return false;
  if (starts_with_ci(line, "@prefix") || starts_with_ci(line, "@base") || starts_with_ci(line, "prefix ") ||
      starts_with_ci(line, "base ")) {
    return true;
  }
  if (line.find("<http") != std::string::npos || line.front() == '<' || line.front() == '[') return true;
  for (std::size_t i = 1; i + 1 < line.size(); ++i) {
    const auto prev = static_cast<unsigned char>(line[i - 1]);
    const auto next = static_cast<unsigned char>(line[i + 1]);
    if (line[i] == ':' && (std::isalnum(prev) || prev == '_') && (std::isalnum(next) || next == '_')) return true;
  }
  return false;
}

std::string join_lines(const std::vector<std::string>& lines, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    out += lines[i];
    out.push_back('\n');
  }
  return out;
}

std::vector<std::string> fenced_blocks(const std::vector<std::string>& lines) {
  std::vector<std::string> blocks;
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).rfind("```", 0) != 0) continue;
    if (open) {
      blocks.push_back(join_lines(lines, *open + 1, i));
      open.reset();
    } else {
      open = i;
    }
  }
  if (open) blocks.push_back(join_lines(lines, *open + 1, lines.size()));
  return blocks;
}

}  // namespace

std::string extract_rdf(std::string_view response) {
  if (parses_with_triples(response)) return std::string(response);
  const std::vector<std::string> lines = split_lines(response);

  std::optional<std::string> best_block;
  for (auto& block : fenced_blocks(lines)) {
    if (parses_with_triples(block) && (!best_block || block.size() > best_block->size())) best_block = block;
  }
  if (best_block) return *best_block;
  if (lines.size() > kMaxSearchLines) return std::string(response);

  // Turtle-looking lines may be dropped only from outside the region, so the
  // region is bounded by the first and last such lines.
  std::vector<bool> dropped_ok(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) dropped_ok[i] = !looks_like_turtle(lines[i]);
  std::size_t best_begin = 0;
  std::size_t best_len = 0;
  for (std::size_t begin = 0; begin < lines.size(); ++begin) {
    if (begin > 0 && !dropped_ok[begin - 1]) break;
    if (lines.size() - begin <= best_len) break;
    for (std::size_t end = lines.size(); end > begin + best_len; --end) {
      if (end < lines.size() && !dropped_ok[end]) break;
      if (parses_with_triples(join_lines(lines, begin, end))) {
        best_begin = begin;
        best_len = end - begin;
        break;
      }
    }
  }
  if (best_len == 0) return std::string(response);
  return join_lines(lines, best_begin, best_begin + best_len);
}

// ---------------------------------------------------------------------------
// Verdicts

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "yes") return Verdict::Yes;
  if (s == "no") return Verdict::No;
  if (s == "indeterminate") return Verdict::Indeterminate;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + std::string(s) + "'");
}

EntailmentVerdict parse_entailment_verdict(std::string_view response) {
  static constexpr std::array<std::string_view, 6> kYes{"yes", "yeah", "yep", "true", "correct", "affirmative"};
  static constexpr std::array<std::string_view, 5> kNo{"no", "nope", "false", "incorrect", "negative"};
  static constexpr std::size_t kExcerpt = 500;

  EntailmentVerdict verdict;
  const std::string text = trim(response);
  verdict.rationale = text.substr(0, kExcerpt);

  std::size_t end = text.find_first_of(".!?\n");
  std::string sentence = to_lower(text.substr(0, end));
  auto skip_noise = [&sentence]() {
    std::size_t i = 0;
    while (i < sentence.size() && !std::isalnum(static_cast<unsigned char>(sentence[i]))) ++i;
    sentence.erase(0, i);
  };
  skip_noise();
  if (sentence.rfind("answer", 0) == 0) {
    sentence.erase(0, 6);
    skip_noise();
  }
  std::size_t word_end = 0;
  while (word_end < sentence.size() && std::isalpha(static_cast<unsigned char>(sentence[word_end]))) ++word_end;
  const std::string_view word(sentence.data(), word_end);
  if (std::find(kYes.begin(), kYes.end(), word) != kYes.end()) {
    verdict.value = Verdict::Yes;
  } else if (std::find(kNo.begin(), kNo.end(), word) != kNo.end()) {
    verdict.value = Verdict::No;
  }
  return verdict;
}

}  // namespace kgwb
