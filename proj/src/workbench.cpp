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

#include "kgwb/workbench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace kgwb {
namespace fs = std::filesystem;

std::string_view to_string(ItemState s) {
  switch (s) {
    case ItemState::Unprocessed: return "unprocessed";
    case ItemState::NeedsReview: return "needs_review";
    case ItemState::NeedsBfs: return "needs_bfs";
    case ItemState::NeedsSplit: return "needs_split";
    case ItemState::Accepted: return "accepted";
  }
  return "unprocessed";
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"run_id", r.run_id},
           {"item_id", r.item_id},
           {"bf_assignment_version", r.bf_assignment_version},
           {"bf_ids", r.bf_ids},
           {"template_version", r.template_version},
           {"n_runs", r.n_runs},
           {"systematic", r.systematic},
           {"representative", r.representative ? json(*r.representative) : json(nullptr)},
           {"raw_score", r.raw_score ? json(*r.raw_score) : json(nullptr)},
           {"final_score", r.final_score ? json(*r.final_score) : json(nullptr)},
           {"eligible", r.eligible()},
           {"complete", r.complete},
           {"error", r.error},
           {"created_at", r.created_at},
           {"consistency_ref", "runs/" + r.run_id + "/consistency.json"},
           {"entailment_ref", r.raw_score ? json("runs/" + r.run_id + "/entailment.json") : json(nullptr)}};
}

void from_json(const json& j, RunRecord& r) {
  r = RunRecord{};
  r.run_id = j.at("run_id").get<std::string>();
  r.item_id = j.at("item_id").get<std::string>();
  r.bf_assignment_version = j.at("bf_assignment_version").get<int>();
  r.bf_ids = j.at("bf_ids").get<std::vector<std::string>>();
  r.template_version = j.at("template_version").get<std::string>();
  r.n_runs = j.at("n_runs").get<int>();
  r.systematic = j.at("systematic").get<bool>();
  if (!j.at("representative").is_null()) r.representative = j["representative"].get<int>();
  if (!j.at("raw_score").is_null()) r.raw_score = j["raw_score"].get<Ratio>();
  if (!j.at("final_score").is_null()) r.final_score = j["final_score"].get<Ratio>();
  r.complete = j.value("complete", true);
  r.error = j.value("error", std::string{});
  r.created_at = j.value("created_at", std::string{});
}

void to_json(json& j, const ItemView& v) {
  j = json(v.item);
  j["state"] = to_string(v.state);
  j["bf_assignment"] = v.assignment;
  j["run_ids"] = v.run_ids;
}

namespace {

json run_json(const RunRecord& record, const ConsistencyReport& consistency,
              const std::optional<EntailmentReport>& entailment, const std::vector<OracleTranscript>& transcripts) {
  return json{{"record", record},
              {"consistency", consistency},
              {"entailment", entailment ? json(*entailment) : json(nullptr)},
              {"transcripts", transcripts}};
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Workbench::Workbench(WorkbenchConfig config) : config_(std::move(config)), bfs_(config_.bf_soft_cap) {
  if (config_.workdir.empty()) throw Error(ErrorCode::InvalidArgument, "workbench needs a work directory");
  std::error_code ec;
  fs::create_directories(config_.workdir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + config_.workdir + ": " + ec.message());
  if (config_.transport) {
    oracle_ = std::make_unique<Oracle>(config_.transport, config_.templates, config_.params, config_.clock,
                                       config_.max_in_flight);
  }
  std::lock_guard lock(mu_);
  replay_log();
  materialize_all();
}

std::string Workbench::path(const std::string& relative) const { return (fs::path(config_.workdir) / relative).string(); }

std::size_t Workbench::event_count() const {
  std::lock_guard lock(mu_);
  return event_seq_;
}

// ---------------------------------------------------------------------------
// Event log

void Workbench::replay_log() {
  const std::string log = path("events.jsonl");
  if (!fs::exists(log)) return;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_file(log))) {
    ++line_no;
    if (trim(line).empty()) continue;
    json event;
    try {
      event = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Io, log + ":" + std::to_string(line_no) + ": " + e.what());
    }
    apply(event);
    ++event_seq_;
  }
}

void Workbench::apply(const json& event) {
  const std::string type = event.at("type").get<std::string>();
  const json& d = event.at("data");
  if (type == "ingest") {
    corpus_.add_chapter(d.at("items").get<std::vector<TextItem>>());
  } else if (type == "split") {
    const auto id = d.at("item_id").get<std::string>();
    const auto children =
        corpus_.split_item(id, d.at("parts").get<std::vector<std::string>>(), d.at("partition").get<bool>());
    std::vector<std::string> ids;
    for (const auto& c : children) ids.push_back(c.id);
    bfs_.inherit(id, ids);
  } else if (type == "bf_add") {
    std::optional<std::string> origin;
    if (d.contains("origin_item") && !d["origin_item"].is_null()) origin = d["origin_item"].get<std::string>();
    if (origin) corpus_.get(*origin);
    bfs_.add(d.at("text").get<std::string>(), d.at("key_terms").get<std::vector<std::string>>(), origin);
  } else if (type == "bf_import") {
    bfs_.load_facts_json(d.at("bfs"));
  } else if (type == "bf_assign") {
    const auto id = d.at("item_id").get<std::string>();
    corpus_.get(id);
    bfs_.assign(id, d.at("bf_ids").get<std::vector<std::string>>());
  } else if (type == "run") {
    RunData run;
    run.record = d.at("record").get<RunRecord>();
    run.consistency = d.at("consistency").get<ConsistencyReport>();
    if (!d.at("entailment").is_null()) run.entailment = d["entailment"].get<EntailmentReport>();
    run.transcripts = d.at("transcripts").get<std::vector<OracleTranscript>>();
    const std::string id = run.record.run_id;
    if (runs_.contains(id)) throw Error(ErrorCode::Duplicate, "run '" + id + "' already recorded");
    runs_.emplace(id, std::move(run));
    run_order_.push_back(id);
  } else if (type == "bypass") {
    auto it = runs_.find(d.at("run_id").get<std::string>());
    if (it == runs_.end()) throw Error(ErrorCode::NotFound, "no run '" + d["run_id"].get<std::string>() + "'");
    RunData& run = it->second;
    if (!run.entailment) throw Error(ErrorCode::NotFound, "run '" + run.record.run_id + "' has no entailment report");
    run.entailment = kgwb::bypass(*run.entailment, d.at("fact_ordinal").get<int>(),
                                  bypass_category_from_string(d.at("category").get<std::string>()),
                                  d.value("note", std::string{}), d.value("timestamp", std::string{}));
    run.record.final_score = run.entailment->final_score();
  } else if (type == "accept") {
    const auto item_id = d.at("item_id").get<std::string>();
    const RunData& run = run_locked(d.at("run_id").get<std::string>());
    if (run.record.item_id != item_id) {
      throw Error(ErrorCode::InvalidArgument, "run '" + run.record.run_id + "' belongs to '" + run.record.item_id + "'");
    }
    if (!run.record.eligible()) {
      throw Error(ErrorCode::NotEligible, "run '" + run.record.run_id +
                                              "' needs a systematic consistency check and a final entailment score of 1");
    }
    const auto doc = representative_doc(run);
    graph_.merge(*doc, item_id);
    for (const auto& [prefix, iri] : doc->prefixes) graph_prefixes_.emplace(prefix, iri);
    accepted_[item_id].insert(run.record.run_id);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown event type '" + type + "'");
  }
}

void Workbench::commit(const std::string& type, json data) {
  json event{{"seq", event_seq_ + 1}, {"ts", config_.clock()}, {"type", type}, {"data", std::move(data)}};
  apply(event);
  std::ofstream out(path("events.jsonl"), std::ios::app | std::ios::binary);
  out << event.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "cannot append to " + path("events.jsonl"));
  ++event_seq_;

  if (type == "ingest" || type == "split") {
    materialize_corpus();
    materialize_bfs();
  } else if (type.rfind("bf_", 0) == 0) {
    materialize_bfs();
  } else if (type == "run") {
    materialize_run(runs_.at(event["data"]["record"]["run_id"].get<std::string>()));
  } else if (type == "bypass") {
    materialize_run(runs_.at(event["data"]["run_id"].get<std::string>()));
  } else if (type == "accept") {
    materialize_graph();
  }
  materialize_state();
}

// ---------------------------------------------------------------------------
// Materialized documents

void Workbench::materialize_all() const {
  materialize_corpus();
  materialize_bfs();
  for (const auto& id : run_order_) materialize_run(runs_.at(id));
  materialize_graph();
  materialize_state();
}

void Workbench::materialize_corpus() const {
  for (const auto& chapter : corpus_.chapters()) {
    write_file_atomic(path("corpus/" + chapter + ".json"), pretty(corpus_.chapter_json(chapter)));
  }
}

void Workbench::materialize_bfs() const {
  write_file_atomic(path("bfs.json"), pretty(bfs_.facts_json()));
  write_file_atomic(path("assignments.json"), pretty(bfs_.assignments_json()));
}

void Workbench::materialize_run(const RunData& run) const {
  const std::string dir = "runs/" + run.record.run_id + "/";
  write_file_atomic(path(dir + "record.json"), pretty(json(run.record)));
  write_file_atomic(path(dir + "consistency.json"), pretty(json(run.consistency)));
  if (run.entailment) write_file_atomic(path(dir + "entailment.json"), pretty(json(*run.entailment)));
  write_file_atomic(path(dir + "transcripts.json"), pretty(json(run.transcripts)));
}

void Workbench::materialize_graph() const {
  write_file_atomic(path("graph/merged.ttl"), graph_.to_turtle(graph_prefixes_));
  write_file_atomic(path("graph/merged.nt"), graph_.to_ntriples());
  write_file_atomic(path("graph/provenance.json"), pretty(graph_.provenance_json()));
}

void Workbench::materialize_state() const { write_file_atomic(path("state.json"), pretty(state_json())); }

json Workbench::state_json() const {
  json items = json::array();
  for (const auto& item : corpus_.all_items()) {
    items.push_back(json{{"id", item.id},
                         {"status", item.active() ? "active" : "superseded"},
                         {"state", to_string(state_locked(item.id))}});
  }
  json accepted = json::object();
  for (const auto& [item, ids] : accepted_) accepted[item] = ids;
  return json{{"event_count", event_seq_},
              {"items", items},
              {"runs", run_order_},
              {"accepted", accepted},
              {"graph_triples", graph_.size()},
              {"bf_count", bfs_.all().size()}};
}

// ---------------------------------------------------------------------------
// Corpus

std::vector<TextItem> Workbench::ingest(const std::string& document, const std::string& chapter) {
  auto items = kgwb::ingest(document, chapter);
  std::lock_guard lock(mu_);
  commit("ingest", json{{"chapter", chapter}, {"items", items}});
  return items;
}

std::vector<TextItem> Workbench::split_item(const std::string& item_id, const std::vector<std::string>& parts,
                                            bool partition) {
  std::lock_guard lock(mu_);
  if (busy_.contains(item_id)) throw Error(ErrorCode::Busy, "item '" + item_id + "' has a run in progress");
  commit("split", json{{"item_id", item_id}, {"parts", parts}, {"partition", partition}});
  std::vector<TextItem> children;
  for (const auto& item : corpus_.chapter_items(corpus_.get(item_id).chapter)) {
    if (item.parent_id == item_id) children.push_back(item);
  }
  return children;
}

ItemState Workbench::state_locked(const std::string& item_id) const {
  if (auto it = accepted_.find(item_id); it != accepted_.end() && !it->second.empty()) return ItemState::Accepted;
  for (auto it = run_order_.rbegin(); it != run_order_.rend(); ++it) {
    const RunRecord& r = runs_.at(*it).record;
    if (r.item_id != item_id) continue;
    if (!r.complete || r.systematic) return ItemState::NeedsReview;
    return r.bf_assignment_version == 0 ? ItemState::NeedsBfs : ItemState::NeedsSplit;
  }
  return ItemState::Unprocessed;
}

ItemView Workbench::view_locked(const TextItem& item) const {
  ItemView v{item, state_locked(item.id), bfs_.current(item.id), {}};
  for (const auto& id : run_order_) {
    if (runs_.at(id).record.item_id == item.id) v.run_ids.push_back(id);
  }
  return v;
}

std::vector<ItemView> Workbench::items() const {
  std::lock_guard lock(mu_);
  std::vector<ItemView> out;
  for (const auto& item : corpus_.all_items()) out.push_back(view_locked(item));
  return out;
}

ItemView Workbench::item(const std::string& item_id) const {
  std::lock_guard lock(mu_);
  return view_locked(corpus_.get(item_id));
}

ItemState Workbench::state(const std::string& item_id) const {
  std::lock_guard lock(mu_);
  corpus_.get(item_id);
  return state_locked(item_id);
}

// ---------------------------------------------------------------------------
// Background facts

BackgroundFact Workbench::add_bf(const std::string& text, const std::vector<std::string>& key_terms,
                                 const std::optional<std::string>& origin_item) {
  std::lock_guard lock(mu_);
  commit("bf_add", json{{"text", text},
                        {"key_terms", key_terms},
                        {"origin_item", origin_item ? json(*origin_item) : json(nullptr)}});
  return bfs_.all().back();
}

std::vector<BackgroundFact> Workbench::import_bfs(const json& facts) {
  std::lock_guard lock(mu_);
  const std::size_t before = bfs_.all().size();
  commit("bf_import", json{{"bfs", facts}});
  return {bfs_.all().begin() + static_cast<std::ptrdiff_t>(before), bfs_.all().end()};
}

std::vector<BackgroundFact> Workbench::bfs() const {
  std::lock_guard lock(mu_);
  return bfs_.all();
}

std::vector<Suggestion> Workbench::suggest_bfs(const std::string& item_id) const {
  std::lock_guard lock(mu_);
  return bfs_.suggest(corpus_.get(item_id));
}

AssignResult Workbench::assign_bfs(const std::string& item_id, const std::vector<std::string>& bf_ids,
                                   std::optional<int> expected_version) {
  std::lock_guard lock(mu_);
  const TextItem& item = corpus_.get(item_id);
  const int current = bfs_.current(item_id).version;
  if (expected_version && *expected_version != current) {
    throw Error(ErrorCode::StaleVersion, "BF assignment of '" + item_id + "' is at version " + std::to_string(current) +
                                             ", not " + std::to_string(*expected_version));
  }
  commit("bf_assign", json{{"item_id", item_id}, {"bf_ids", bf_ids}});
  AssignResult r{bfs_.current(item_id), {}};
  r.warnings = bfs_.warnings(item, r.assignment);
  return r;
}

// ---------------------------------------------------------------------------
// Runs

std::string Workbench::next_run_id(const std::string& item_id, int bf_version) const {
  const std::string stem = item_id + "_bf" + std::to_string(bf_version) + "_" + config_.templates.version() + "_";
  int n = 1;
  while (runs_.contains(stem + std::to_string(n))) ++n;
  return stem + std::to_string(n);
}

Workbench::RunData Workbench::persist_run(RunData data) {
  std::lock_guard lock(mu_);
  data.record.run_id = next_run_id(data.record.item_id, data.record.bf_assignment_version);
  commit("run", run_json(data.record, data.consistency, data.entailment, data.transcripts));
  return runs_.at(data.record.run_id);
}

RunRecord Workbench::execute_run(const std::string& item_id, std::optional<int> bf_version, int n_runs) {
  TextItem item;
  BfAssignment assignment;
  std::vector<BackgroundFact> bf_list;
  {
    std::lock_guard lock(mu_);
    if (!oracle_) throw Error(ErrorCode::InvalidArgument, "no oracle transport is configured");
    item = corpus_.get(item_id);
    if (!item.active()) throw Error(ErrorCode::InvalidArgument, "item '" + item_id + "' is superseded by its split");
    assignment = bf_version ? bfs_.at_version(item_id, *bf_version) : bfs_.current(item_id);
    bf_list = bfs_.resolve(assignment);
    if (!busy_.insert(item_id).second) throw Error(ErrorCode::Busy, "item '" + item_id + "' has a run in progress");
  }
  struct Release {
    Workbench* self;
    std::string id;
    ~Release() {
      std::lock_guard lock(self->mu_);
      self->busy_.erase(id);
    }
  } release{this, item_id};

  RunData data;
  data.record.item_id = item_id;
  data.record.bf_assignment_version = assignment.version;
  data.record.bf_ids = assignment.bf_ids;
  data.record.template_version = config_.templates.version();
  data.record.n_runs = n_runs;
  data.record.created_at = config_.clock();

  ConsistencyOptions options{n_runs, config_.mode, assignment.version};
  try {
    data.consistency = run_consistency(*oracle_, item, bf_list, options, &data.transcripts);
  } catch (const OracleUnavailable& e) {
    data.consistency = e.partial_report().get<ConsistencyReport>();
    data.transcripts = e.transcripts();
    data.record.systematic = data.consistency.systematic;
    data.record.complete = false;
    data.record.error = e.what();
    persist_run(std::move(data));
    throw;
  }
  data.record.systematic = data.consistency.systematic;
  if (!data.consistency.systematic) return persist_run(std::move(data)).record;

  const int rep = select_representative(data.consistency);
  data.record.representative = rep;
  const auto doc = rdf::parse_ttl(data.consistency.run(rep).ttl);
  try {
    data.entailment = run_entailment(*oracle_, item, bf_list, doc, &data.transcripts);
  } catch (const OracleUnavailable& e) {
    data.entailment = e.partial_report().get<EntailmentReport>();
    data.transcripts.insert(data.transcripts.end(), e.transcripts().begin(), e.transcripts().end());
    data.record.raw_score = data.entailment->raw_score();
    data.record.final_score = data.entailment->final_score();
    data.record.complete = false;
    data.record.error = e.what();
    persist_run(std::move(data));
    throw;
  }
  data.record.raw_score = data.entailment->raw_score();
  data.record.final_score = data.entailment->final_score();
  return persist_run(std::move(data)).record;
}

const Workbench::RunData& Workbench::run_locked(const std::string& run_id) const {
  auto it = runs_.find(run_id);
  if (it == runs_.end()) throw Error(ErrorCode::NotFound, "no run '" + run_id + "'");
  return it->second;
}

RunRecord Workbench::run(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  return run_locked(run_id).record;
}

std::vector<RunRecord> Workbench::runs(const std::string& item_id) const {
  std::lock_guard lock(mu_);
  std::vector<RunRecord> out;
  for (const auto& id : run_order_) {
    const auto& r = runs_.at(id).record;
    if (item_id.empty() || r.item_id == item_id) out.push_back(r);
  }
  return out;
}

ConsistencyReport Workbench::consistency(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  return run_locked(run_id).consistency;
}

std::optional<EntailmentReport> Workbench::entailment(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  return run_locked(run_id).entailment;
}

std::vector<OracleTranscript> Workbench::transcripts(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  return run_locked(run_id).transcripts;
}

EntailmentReport Workbench::bypass(const std::string& run_id, int fact_ordinal, BypassCategory category,
                                   const std::string& note) {
  std::lock_guard lock(mu_);
  run_locked(run_id);
  commit("bypass", json{{"run_id", run_id},
                        {"fact_ordinal", fact_ordinal},
                        {"category", to_string(category)},
                        {"note", note},
                        {"timestamp", config_.clock()}});
  return *runs_.at(run_id).entailment;
}

AcceptResult Workbench::accept_item(const std::string& item_id, const std::string& run_id) {
  std::lock_guard lock(mu_);
  corpus_.get(item_id);
  const std::size_t before = graph_.size();
  commit("accept", json{{"item_id", item_id}, {"run_id", run_id}});
  return AcceptResult{item_id, run_id, graph_.size() - before, graph_.size()};
}

std::optional<rdf::RdfDocument> Workbench::representative_doc(const RunData& run) const {
  if (!run.record.representative) return std::nullopt;
  return rdf::parse_ttl(run.consistency.run(*run.record.representative).ttl);
}

// ---------------------------------------------------------------------------
// Analytics

json Workbench::compare_runs(const std::string& item_id, const std::string& run_a, const std::string& run_b) const {
  std::lock_guard lock(mu_);
  corpus_.get(item_id);
  const RunData& a = run_locked(run_a);
  const RunData& b = run_locked(run_b);
  for (const RunData* r : {&a, &b}) {
    if (r->record.item_id != item_id) {
      throw Error(ErrorCode::InvalidArgument, "run '" + r->record.run_id + "' belongs to '" + r->record.item_id + "'");
    }
  }
  const auto doc_a = representative_doc(a);
  const auto doc_b = representative_doc(b);
  if (!doc_a || !doc_b) {
    throw Error(ErrorCode::NotSystematic, "both runs need a representative RDF to be compared");
  }
  auto conformity = [](const RunData& r) -> json {
    try {
      return json(analytics::conformity_score(analytics::subject_entity_sets(r.consistency)));
    } catch (const Error&) {
      return nullptr;
    }
  };
  json carry = nullptr;
  try {
    carry = analytics::rse_carryover(*doc_a, *doc_b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBaseRse) throw;
  }
  const bool pass = a.record.raw_score && *a.record.raw_score == Ratio(1, 1);
  return json{{"item_id", item_id},
              {"run_a", run_a},
              {"run_b", run_b},
              {"label", pass ? "BFφ-Pass" : "BFφ-Fail"},
              {"coverage", analytics::to_json(analytics::coverage_delta(*doc_a, *doc_b))},
              {"rse_carryover", carry},
              {"conformity", {{"run_a", conformity(a)}, {"run_b", conformity(b)}}}};
}

std::vector<analytics::ItemEntities> Workbench::scenario_entities(const std::string& scenario) const {
  if (scenario != "bfphi" && scenario != "bfa") {
    throw Error(ErrorCode::InvalidArgument, "scenario must be bfphi or bfa, not '" + scenario + "'");
  }
  std::vector<analytics::ItemEntities> out;
  for (const auto& item : corpus_.active_items()) {
    for (auto it = run_order_.rbegin(); it != run_order_.rend(); ++it) {
      const RunData& run = runs_.at(*it);
      const bool with_bfs = run.record.bf_assignment_version > 0;
      if (run.record.item_id != item.id || with_bfs != (scenario == "bfa") || !run.record.representative) continue;
      analytics::ItemEntities entry{item.id, {}};
      for (const auto& e : rdf::classify(*representative_doc(run)).subject_entities) {
        if (!e.blank()) entry.names.push_back(e.local);
      }
      out.push_back(std::move(entry));
      break;
    }
  }
  return out;
}

std::vector<analytics::ConceptGroup> Workbench::concepts(const std::string& scenario) const {
  std::lock_guard lock(mu_);
  return analytics::group_concepts(scenario_entities(scenario));
}

analytics::BipartiteGraph Workbench::bipartite(const std::string& scenario, std::size_t min_paragraphs) const {
  std::lock_guard lock(mu_);
  const auto entities = scenario_entities(scenario);
  std::vector<std::string> order;
  for (const auto& e : entities) order.push_back(e.item_id);
  return analytics::bipartite(analytics::group_concepts(entities), min_paragraphs, order);
}

MergedGraph Workbench::graph() const {
  std::lock_guard lock(mu_);
  return graph_;
}

std::string Workbench::graph_turtle() const {
  std::lock_guard lock(mu_);
  return graph_.to_turtle(graph_prefixes_);
}

}  // namespace kgwb
