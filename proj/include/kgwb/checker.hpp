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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgwb/bf_store.hpp"
#include "kgwb/common.hpp"
#include "kgwb/corpus.hpp"
#include "kgwb/oracle.hpp"
#include "kgwb/rdf.hpp"

namespace kgwb {

// ---------------------------------------------------------------------------
// Consistency

struct RunOutcome {
  int run_index = 0;  // 1-based
  std::string transcript_digest;
  bool ok = false;
  std::string digest;  // equality digest when ok
  std::string error;   // syntax error message otherwise
  std::size_t error_line = 0;
  std::size_t error_column = 0;
  std::string ttl;  // the extracted Turtle that was parsed

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

struct ConsistencyGroup {
  std::string digest;
  std::vector<int> members;  // run indices, ascending

  std::size_t size() const noexcept { return members.size(); }
  friend bool operator==(const ConsistencyGroup&, const ConsistencyGroup&) = default;
};

struct ConsistencyReport {
  std::string item_id;
  int bf_version = 0;
  std::string template_version;
  rdf::EqualityMode mode = rdf::EqualityMode::Canonical;
  int requested_runs = 0;
  std::vector<RunOutcome> runs;
  std::vector<ConsistencyGroup> groups;  // ordered by first member
  std::optional<ConsistencyGroup> largest;
  int failed_count = 0;
  bool systematic = false;
  bool complete = true;

  const RunOutcome& run(int run_index) const;
};

void to_json(json& j, const ConsistencyReport& r);
void from_json(const json& j, ConsistencyReport& r);

/// Parses one oracle response for the syntactic check.
RunOutcome evaluate_response(int run_index, const std::string& response, rdf::EqualityMode mode,
                             std::string transcript_digest = {});

/// Groups ok-runs by digest. The largest group is the biggest one, earliest first member winning ties.
ConsistencyReport assemble_consistency(std::vector<RunOutcome> runs);

/// Raised when the transport gives up. Carries the report built from the calls that completed.
class OracleUnavailable : public Error {
 public:
  OracleUnavailable(ErrorCode cause, const std::string& message, json partial_report,
                    std::vector<OracleTranscript> transcripts);

  ErrorCode cause() const noexcept { return cause_; }
  const json& partial_report() const noexcept { return partial_; }
  const std::vector<OracleTranscript>& transcripts() const noexcept { return transcripts_; }

 private:
  ErrorCode cause_;
  json partial_;
  std::vector<OracleTranscript> transcripts_;
};

struct ConsistencyOptions {
  int n_runs = 10;
  rdf::EqualityMode mode = rdf::EqualityMode::Canonical;
  int bf_version = 0;
};

ConsistencyReport run_consistency(Oracle& oracle, const TextItem& item, std::span<const BackgroundFact> bfs,
                                  const ConsistencyOptions& options = {},
                                  std::vector<OracleTranscript>* transcripts = nullptr);

/// Run index of the representative RDF. Throws NotSystematic.
int select_representative(const ConsistencyReport& report);

// ---------------------------------------------------------------------------
// Entailment

enum class FactStatus { Pass, Fail, Indeterminate, Bypassed };
enum class BypassCategory { AuxiliaryEntity, NamespaceScoping, CrossNamespace, Other };

std::string_view to_string(FactStatus s);
std::string_view to_string(BypassCategory c);
BypassCategory bypass_category_from_string(std::string_view s);

struct FactCheck {
  int fact_ordinal = 0;
  std::string subject;
  std::string sentence;
  Verdict verdict = Verdict::Indeterminate;
  std::string rationale;
  FactStatus status = FactStatus::Indeterminate;
  std::optional<BypassCategory> bypass_category;
  std::string bypass_note;
  std::string sentence_digest;
  std::string entailment_digest;

  friend bool operator==(const FactCheck&, const FactCheck&) = default;
};

struct ReviewEvent {
  int version = 0;  // report version produced by this event
  int fact_ordinal = 0;
  FactStatus previous = FactStatus::Fail;
  BypassCategory category = BypassCategory::Other;
  std::string note;
  std::string timestamp;

  friend bool operator==(const ReviewEvent&, const ReviewEvent&) = default;
};

struct EntailmentReport {
  std::string item_id;
  std::string rdf_digest;
  int fact_count = 0;  // N, the number of Facts in the checked RDF
  std::vector<FactCheck> facts;
  int version = 1;
  std::vector<ReviewEvent> reviews;
  bool complete = true;

  int count(FactStatus s) const;
  Ratio raw_score() const;
  Ratio final_score() const;
  const FactCheck& fact(int ordinal) const;
};

void to_json(json& j, const EntailmentReport& r);
void from_json(const json& j, EntailmentReport& r);

FactStatus status_for(Verdict v);

EntailmentReport run_entailment(Oracle& oracle, const TextItem& item, std::span<const BackgroundFact> bfs,
                                const rdf::RdfDocument& doc, std::vector<OracleTranscript>* transcripts = nullptr);

/// Returns the next version of `report` with the Fact bypassed. A pass or an
/// already bypassed Fact is an InvalidTransition; Other needs a note.
EntailmentReport bypass(const EntailmentReport& report, int fact_ordinal, BypassCategory category,
                        const std::string& note, const std::string& timestamp = {});

}  // namespace kgwb
