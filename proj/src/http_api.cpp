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

#include "kgwb/http_api.hpp"

#include "httplib.h"
#include "kgwb/graph_export.hpp"

namespace kgwb {

int http_status(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownBf: return 404;
    case ErrorCode::Duplicate:
    case ErrorCode::AlreadySplit:
    case ErrorCode::NotEligible:
    case ErrorCode::NotSystematic:
    case ErrorCode::InvalidTransition:
    case ErrorCode::Busy:
    case ErrorCode::StaleVersion: return 409;
    case ErrorCode::EmptyUnion:
    case ErrorCode::NoBaseRse: return 422;
    case ErrorCode::RateLimited: return 503;
    case ErrorCode::TransportError:
    case ErrorCode::ReplayMiss: return 502;
    case ErrorCode::OracleUnavailable: {
      const auto* ou = dynamic_cast<const OracleUnavailable*>(&e);
      return ou != nullptr && ou->cause() == ErrorCode::RateLimited ? 503 : 502;
    }
    case ErrorCode::Io: return 500;
    default: return 400;
  }
}

struct ApiServer::Impl {
  explicit Impl(Workbench& w) : wb(w) { routes(); }

  Workbench& wb;
  httplib::Server server;
  mutable std::mutex log_mu;
  std::vector<std::string> log;

  static void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
  }

  static json body_of(const httplib::Request& req) {
    if (trim(req.body).empty()) return json::object();
    try {
      json j = json::parse(req.body);
      if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
      return j;
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON body: ") + e.what());
    }
  }

  static int int_param(const httplib::Request& req, const std::string& name, int fallback) {
    if (!req.has_param(name)) return fallback;
    const std::string v = req.get_param_value(name);
    try {
      std::size_t used = 0;
      const int n = std::stoi(v, &used);
      if (used == v.size()) return n;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "query parameter '" + name + "' must be an integer");
  }

  static std::string required_param(const httplib::Request& req, const std::string& name) {
    if (!req.has_param(name)) throw Error(ErrorCode::InvalidArgument, "missing query parameter '" + name + "'");
    return req.get_param_value(name);
  }

  // Wraps a handler so workbench errors become JSON error documents.
  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [this, f](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(log_mu);
        log.push_back(req.method + " " + req.path);
      }
      try {
        f(req, res);
      } catch (const Error& e) {
        json err{{"code", to_string(e.code())}, {"message", e.what()}};
        if (const auto* ou = dynamic_cast<const OracleUnavailable*>(&e)) err["cause"] = to_string(ou->cause());
        send_json(res, json{{"error", err}}, http_status(e));
      } catch (const json::exception& e) {
        send_json(res, json{{"error", {{"code", "InvalidArgument"}, {"message", e.what()}}}}, 400);
      }
    };
  }

  json run_document(const std::string& run_id, bool with_transcripts) const {
    json doc{{"record", wb.run(run_id)}, {"consistency", wb.consistency(run_id)}};
    const auto ent = wb.entailment(run_id);
    doc["entailment"] = ent ? json(*ent) : json(nullptr);
    if (with_transcripts) doc["transcripts"] = wb.transcripts(run_id);
    return doc;
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/items", wrap([this](const httplib::Request&, httplib::Response& res) { send_json(res, json(wb.items())); }));

    server.Post("/items", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      const auto items = wb.ingest(b.at("document").get<std::string>(), b.at("chapter").get<std::string>());
      send_json(res, json(items), 201);
    }));

    server.Get(R"(/items/([^/]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      json doc = json(wb.item(id));
      json suggestions = json::array();
      for (const auto& s : wb.suggest_bfs(id)) suggestions.push_back(json{{"bf", s.bf}, {"matches", s.matches}});
      doc["suggested_bfs"] = suggestions;
      doc["runs"] = wb.runs(id);
      send_json(res, doc);
    }));

    server.Post(R"(/items/([^/]+)/split)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      const auto children = wb.split_item(req.matches[1], b.at("parts").get<std::vector<std::string>>(),
                                          b.value("partition", false));
      send_json(res, json(children), 201);
    }));

    server.Get("/bfs", wrap([this](const httplib::Request&, httplib::Response& res) { send_json(res, json(wb.bfs())); }));

    server.Post("/bfs", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      std::optional<std::string> origin;
      if (b.contains("origin_item") && !b["origin_item"].is_null()) origin = b["origin_item"].get<std::string>();
      const auto bf = wb.add_bf(b.at("text").get<std::string>(),
                                b.value("key_terms", std::vector<std::string>{}), origin);
      send_json(res, json(bf), 201);
    }));

    server.Post(R"(/items/([^/]+)/assign-bfs)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      std::optional<int> expected;
      if (b.contains("expected_version") && !b["expected_version"].is_null()) expected = b["expected_version"].get<int>();
      const auto r = wb.assign_bfs(req.matches[1], b.at("bf_ids").get<std::vector<std::string>>(), expected);
      send_json(res, json{{"assignment", r.assignment}, {"warnings", r.warnings}});
    }));

    server.Post(R"(/items/([^/]+)/runs)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      std::optional<int> version;
      if (b.contains("bf_version") && !b["bf_version"].is_null()) version = b["bf_version"].get<int>();
      const auto record = wb.execute_run(req.matches[1], version, b.value("n_runs", 10));
      send_json(res, run_document(record.run_id, false), 201);
    }));

    server.Get(R"(/runs/([^/]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, run_document(req.matches[1], req.has_param("transcripts")));
    }));

    server.Post(R"(/runs/([^/]+)/facts/(\d+)/bypass)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      const auto report = wb.bypass(req.matches[1], std::stoi(req.matches[2]),
                                    bypass_category_from_string(b.at("category").get<std::string>()),
                                    b.value("note", std::string{}));
      send_json(res, json(report));
    }));

    server.Post(R"(/items/([^/]+)/accept)", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json b = body_of(req);
      const auto r = wb.accept_item(req.matches[1], b.at("run_id").get<std::string>());
      send_json(res, json{{"item_id", r.item_id},
                          {"run_id", r.run_id},
                          {"triples_added", r.triples_added},
                          {"graph_size", r.graph_size},
                          {"state", to_string(wb.state(r.item_id))}});
    }));

    server.Get("/metrics/compare", wrap([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, wb.compare_runs(required_param(req, "item"), required_param(req, "run_a"),
                                     required_param(req, "run_b")));
    }));

    server.Get("/graph/merged.ttl", wrap([this](const httplib::Request&, httplib::Response& res) {
      res.set_content(wb.graph_turtle(), "text/turtle");
    }));

    server.Get("/graph/bipartite", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const int min = int_param(req, "min", 2);
      if (min < 0) throw Error(ErrorCode::InvalidArgument, "min must not be negative");
      const auto g = wb.bipartite(req.has_param("scenario") ? req.get_param_value("scenario") : "bfphi",
                                  static_cast<std::size_t>(min));
      analytics::GraphFormat format = analytics::GraphFormat::Json;
      if (req.has_param("format")) {
        format = analytics::graph_format_from_string(req.get_param_value("format"));
      } else {
        const std::string accept = req.get_header_value("Accept");
        if (accept.find("graphml") != std::string::npos) format = analytics::GraphFormat::GraphMl;
        if (accept.find("graphviz") != std::string::npos) format = analytics::GraphFormat::Dot;
      }
      res.set_content(analytics::render(g, format), std::string(analytics::content_type(format)));
    }));

    server.Get("/concepts", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const int k = int_param(req, "k", 5);
      if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must not be negative");
      const auto rows = analytics::top_concepts(
          wb.concepts(req.has_param("scenario") ? req.get_param_value("scenario") : "bfphi"), static_cast<std::size_t>(k));
      json out = json::array();
      for (const auto& r : rows) out.push_back(analytics::to_json(r));
      send_json(res, out);
    }));
  }
};

ApiServer::ApiServer(Workbench& workbench) : impl_(std::make_unique<Impl>(workbench)) {}
ApiServer::~ApiServer() { stop(); }

int ApiServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool ApiServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool ApiServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void ApiServer::stop() { impl_->server.stop(); }
void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::vector<std::string> ApiServer::request_log() const {
  std::lock_guard lock(impl_->log_mu);
  return impl_->log;
}

}  // namespace kgwb
