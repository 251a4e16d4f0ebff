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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgwb/analytics.hpp"
#include "kgwb/bf_store.hpp"
#include "kgwb/checker.hpp"
#include "kgwb/common.hpp"
#include "kgwb/corpus.hpp"
#include "kgwb/kg_merge.hpp"
#include "kgwb/oracle.hpp"

namespace kgwb {

enum class ItemState { Unprocessed, NeedsReview, NeedsBfs, NeedsSplit, Accepted };

std::string_view to_string(ItemState s);

struct RunRecord {
  std::string run_id;
  std::string item_id;
  int bf_assignment_version = 0;
  std::vector<std::string> bf_ids;
  std::string template_version;
  int n_runs = 0;
  bool systematic = false;
  std::optional<int> representative;
  std::optional<Ratio> raw_score;
  std::optional<Ratio> final_score;
  bool complete = true;
  std::string error;
  std::string created_at;

  bool eligible() const { return complete && systematic && final_score && *final_score == Ratio(1, 1); }
};

void to_json(json& j, const RunRecord& r);
void from_json(const json& j, RunRecord& r);

struct WorkbenchConfig {
  std::string workdir;
  std::shared_ptr<Transport> transport;  // oracle calls fail with InvalidArgument when unset
  PromptTemplates templates = PromptTemplates::builtin();
  DecodingParams params;
  Clock clock = system_clock();
  int max_in_flight = Oracle::kDefaultMaxInFlight;
  rdf::EqualityMode mode = rdf::EqualityMode::Canonical;
  std::size_t bf_soft_cap = BfStore::kDefaultSoftCap;
};

struct AssignResult {
  BfAssignment assignment;
  std::vector<BfWarning> warnings;
};

struct AcceptResult {
  std::string item_id;
  std::string run_id;
  std::size_t triples_added = 0;
  std::size_t graph_size = 0;
};

struct ItemView {
  TextItem item;
  ItemState state = ItemState::Unprocessed;
  BfAssignment assignment;
  std::vector<std::string> run_ids;
};

void to_json(json& j, const ItemView& v);

/// The orchestration service. Every change is an event appended to
/// `<workdir>/events.jsonl`; the JSON documents beside it are rebuilt from those events.
class Workbench {
 public:
  explicit Workbench(WorkbenchConfig config);

  Workbench(const Workbench&) = delete;
  Workbench& operator=(const Workbench&) = delete;

  // Corpus
  std::vector<TextItem> ingest(const std::string& document, const std::string& chapter);
  std::vector<TextItem> split_item(const std::string& item_id, const std::vector<std::string>& parts, bool partition);
  std::vector<ItemView> items() const;
  ItemView item(const std::string& item_id) const;
  ItemState state(const std::string& item_id) const;

  // Background facts
  BackgroundFact add_bf(const std::string& text, const std::vector<std::string>& key_terms,
                        const std::optional<std::string>& origin_item = std::nullopt);
  std::vector<BackgroundFact> import_bfs(const json& facts);
  std::vector<BackgroundFact> bfs() const;
  std::vector<Suggestion> suggest_bfs(const std::string& item_id) const;
  AssignResult assign_bfs(const std::string& item_id, const std::vector<std::string>& bf_ids,
                          std::optional<int> expected_version = std::nullopt);

  // Runs and review
  RunRecord execute_run(const std::string& item_id, std::optional<int> bf_version = std::nullopt, int n_runs = 10);
  RunRecord run(const std::string& run_id) const;
  std::vector<RunRecord> runs(const std::string& item_id = {}) const;
  ConsistencyReport consistency(const std::string& run_id) const;
  std::optional<EntailmentReport> entailment(const std::string& run_id) const;
  std::vector<OracleTranscript> transcripts(const std::string& run_id) const;
  EntailmentReport bypass(const std::string& run_id, int fact_ordinal, BypassCategory category,
                          const std::string& note);
  AcceptResult accept_item(const std::string& item_id, const std::string& run_id);

  // Analytics
  json compare_runs(const std::string& item_id, const std::string& run_a, const std::string& run_b) const;
  /// "bfphi" uses each active item's latest systematic run without BFs, "bfa" its latest with BFs.
  std::vector<analytics::ConceptGroup> concepts(const std::string& scenario) const;
  analytics::BipartiteGraph bipartite(const std::string& scenario, std::size_t min_paragraphs = 2) const;
  MergedGraph graph() const;
  std::string graph_turtle() const;

  json state_json() const;
  const std::string& workdir() const noexcept { return config_.workdir; }
  std::size_t event_count() const;

 private:
  struct RunData {
    RunRecord record;
    ConsistencyReport consistency;
    std::optional<EntailmentReport> entailment;
    std::vector<OracleTranscript> transcripts;
  };

  void replay_log();
  void apply(const json& event);
  void commit(const std::string& type, json data);
  void materialize_all() const;
  void materialize_corpus() const;
  void materialize_bfs() const;
  void materialize_run(const RunData& run) const;
  void materialize_graph() const;
  void materialize_state() const;

  RunData persist_run(RunData data);
  ItemState state_locked(const std::string& item_id) const;
  ItemView view_locked(const TextItem& item) const;
  const RunData& run_locked(const std::string& run_id) const;
  std::string next_run_id(const std::string& item_id, int bf_version) const;
  std::optional<rdf::RdfDocument> representative_doc(const RunData& run) const;
  std::vector<analytics::ItemEntities> scenario_entities(const std::string& scenario) const;
  std::string path(const std::string& relative) const;

  WorkbenchConfig config_;
  std::unique_ptr<Oracle> oracle_;

  mutable std::mutex mu_;
  Corpus corpus_;
  BfStore bfs_;
  std::map<std::string, RunData> runs_;
  std::vector<std::string> run_order_;
  std::map<std::string, std::set<std::string>> accepted_;  // item -> accepted run ids
  MergedGraph graph_;
  std::map<std::string, std::string> graph_prefixes_;
  std::set<std::string> busy_;
  std::size_t event_seq_ = 0;
};

}  // namespace kgwb
