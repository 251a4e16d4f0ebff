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

#include "kgwb/checker.hpp"

#include <algorithm>
#include <exception>
#include <future>
#include <map>

namespace kgwb {
namespace {

std::string_view mode_name(rdf::EqualityMode m) { return m == rdf::EqualityMode::Canonical ? "canonical" : "strict_text"; }

rdf::EqualityMode mode_from(std::string_view s) {
  if (s == "canonical") return rdf::EqualityMode::Canonical;
  if (s == "strict_text") return rdf::EqualityMode::StrictText;
  throw Error(ErrorCode::InvalidArgument, "unknown equality mode '" + std::string(s) + "'");
}

json group_json(const ConsistencyGroup& g) {
  return json{{"digest", g.digest}, {"size", g.size()}, {"members", g.members}};
}

ConsistencyGroup group_from(const json& j) {
  return ConsistencyGroup{j.at("digest").get<std::string>(), j.at("members").get<std::vector<int>>()};
}

// Oracle failures that end a check early; anything else is a programming or input error.
bool is_transport_failure(ErrorCode c) {
  return c == ErrorCode::TransportError || c == ErrorCode::ReplayMiss || c == ErrorCode::RateLimited;
}

}  // namespace

const RunOutcome& ConsistencyReport::run(int run_index) const {
  for (const auto& r : runs) {
    if (r.run_index == run_index) return r;
  }
  throw Error(ErrorCode::NotFound, "no run " + std::to_string(run_index) + " in the consistency report");
}

void to_json(json& j, const ConsistencyReport& r) {
  json runs = json::array();
  for (const auto& run : r.runs) {
    json o{{"run_index", run.run_index}, {"transcript_digest", run.transcript_digest}, {"ttl", run.ttl}};
    if (run.ok) {
      o["parse_outcome"] = json{{"ok", true}, {"digest", run.digest}};
    } else {
      o["parse_outcome"] =
          json{{"ok", false}, {"error", run.error}, {"line", run.error_line}, {"column", run.error_column}};
    }
    runs.push_back(std::move(o));
  }
  json groups = json::array();
  for (const auto& g : r.groups) groups.push_back(group_json(g));
  j = json{{"item_id", r.item_id},
           {"bf_version", r.bf_version},
           {"template_version", r.template_version},
           {"mode", mode_name(r.mode)},
           {"requested_runs", r.requested_runs},
           {"runs", runs},
           {"groups", groups},
           {"largest_group", r.largest ? group_json(*r.largest) : json(nullptr)},
           {"failed_count", r.failed_count},
           {"systematic", r.systematic},
           {"complete", r.complete}};
}

void from_json(const json& j, ConsistencyReport& r) {
  r = ConsistencyReport{};
  r.item_id = j.at("item_id").get<std::string>();
  r.bf_version = j.at("bf_version").get<int>();
  r.template_version = j.at("template_version").get<std::string>();
  r.mode = mode_from(j.at("mode").get<std::string>());
  r.requested_runs = j.at("requested_runs").get<int>();
  for (const auto& o : j.at("runs")) {
    RunOutcome run;
    run.run_index = o.at("run_index").get<int>();
    run.transcript_digest = o.value("transcript_digest", std::string{});
    run.ttl = o.value("ttl", std::string{});
    const auto& p = o.at("parse_outcome");
    run.ok = p.at("ok").get<bool>();
    if (run.ok) {
      run.digest = p.at("digest").get<std::string>();
    } else {
      run.error = p.at("error").get<std::string>();
      run.error_line = p.value("line", std::size_t{0});
      run.error_column = p.value("column", std::size_t{0});
    }
    r.runs.push_back(std::move(run));
  }
  for (const auto& g : j.at("groups")) r.groups.push_back(group_from(g));
  if (!j.at("largest_group").is_null()) r.largest = group_from(j["largest_group"]);
  r.failed_count = j.at("failed_count").get<int>();
  r.systematic = j.at("systematic").get<bool>();
  r.complete = j.value("complete", true);
}

RunOutcome evaluate_response(int run_index, const std::string& response, rdf::EqualityMode mode,
                             std::string transcript_digest) {
  RunOutcome out;
  out.run_index = run_index;
  out.transcript_digest = std::move(transcript_digest);
  out.ttl = extract_rdf(response);
  try {
    const auto doc = rdf::parse_ttl(out.ttl);
    if (doc.facts.empty()) {
      out.error = "the RDF contains no triples";
      return out;
    }
    out.ok = true;
    out.digest = rdf::equality_digest(doc, mode);
  } catch (const SyntaxError& e) {
    out.error = e.detail();
    out.error_line = e.line();
    out.error_column = e.column();
  }
  return out;
}

ConsistencyReport assemble_consistency(std::vector<RunOutcome> runs) {
  std::sort(runs.begin(), runs.end(), [](const RunOutcome& a, const RunOutcome& b) { return a.run_index < b.run_index; });
  ConsistencyReport report;
  std::map<std::string, std::size_t> index;
  for (const auto& run : runs) {
    if (!run.ok) {
      ++report.failed_count;
      continue;
    }
    auto [it, inserted] = index.emplace(run.digest, report.groups.size());
    if (inserted) report.groups.push_back(ConsistencyGroup{run.digest, {}});
    report.groups[it->second].members.push_back(run.run_index);
  }
  for (const auto& g : report.groups) {
    if (!report.largest || g.size() > report.largest->size()) report.largest = g;
  }
  report.systematic = report.largest && report.largest->size() >= 2;
  report.requested_runs = static_cast<int>(runs.size());
  report.runs = std::move(runs);
  return report;
}

OracleUnavailable::OracleUnavailable(ErrorCode cause, const std::string& message, json partial_report,
                                     std::vector<OracleTranscript> transcripts)
    : Error(ErrorCode::OracleUnavailable, message),
      cause_(cause),
      partial_(std::move(partial_report)),
      transcripts_(std::move(transcripts)) {}

ConsistencyReport run_consistency(Oracle& oracle, const TextItem& item, std::span<const BackgroundFact> bfs,
                                  const ConsistencyOptions& options, std::vector<OracleTranscript>* transcripts) {
  if (options.n_runs < 2) throw Error(ErrorCode::InvalidArgument, "a consistency check needs at least 2 runs");
  const std::string prompt = build_kgc_prompt(oracle.templates(), item, bfs);
  const PromptKind kind = bfs.empty() ? PromptKind::KgcNoBf : PromptKind::KgcWithBf;

  std::vector<std::future<OracleTranscript>> calls;
  calls.reserve(options.n_runs);
  for (int i = 1; i <= options.n_runs; ++i) {
    calls.push_back(std::async(std::launch::async, [&oracle, kind, &prompt, i] { return oracle.complete(kind, prompt, i); }));
  }

  std::vector<RunOutcome> outcomes;
  std::vector<OracleTranscript> done;
  std::optional<Error> failure;
  for (int i = 1; i <= options.n_runs; ++i) {
    try {
      OracleTranscript t = calls[i - 1].get();
      outcomes.push_back(evaluate_response(i, t.response_text, options.mode, t.request_digest));
      done.push_back(std::move(t));
    } catch (const Error& e) {
      if (!is_transport_failure(e.code())) throw;
      if (!failure) failure = e;
    }
  }

  ConsistencyReport report = assemble_consistency(std::move(outcomes));
  report.item_id = item.id;
  report.bf_version = options.bf_version;
  report.template_version = oracle.templates().version();
  report.mode = options.mode;
  report.requested_runs = options.n_runs;
  if (transcripts != nullptr) transcripts->insert(transcripts->end(), done.begin(), done.end());
  if (failure) {
    report.complete = false;
    throw OracleUnavailable(failure->code(), std::string("consistency check stopped: ") + failure->what(), json(report),
                            std::move(done));
  }
  return report;
}

int select_representative(const ConsistencyReport& report) {
  if (!report.systematic || !report.largest) {
    throw Error(ErrorCode::NotSystematic, "no two runs produced the same RDF for '" + report.item_id + "'");
  }
  return report.largest->members.front();
}

// ---------------------------------------------------------------------------

std::string_view to_string(FactStatus s) {
  switch (s) {
    case FactStatus::Pass: return "pass";
    case FactStatus::Fail: return "fail";
    case FactStatus::Indeterminate: return "indeterminate";
    case FactStatus::Bypassed: return "bypassed";
  }
  return "indeterminate";
}

namespace {

FactStatus status_from(std::string_view s) {
  for (auto st : {FactStatus::Pass, FactStatus::Fail, FactStatus::Indeterminate, FactStatus::Bypassed}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fact status '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(BypassCategory c) {
  switch (c) {
    case BypassCategory::AuxiliaryEntity: return "AuxiliaryEntity";
    case BypassCategory::NamespaceScoping: return "NamespaceScoping";
    case BypassCategory::CrossNamespace: return "CrossNamespace";
    case BypassCategory::Other: return "Other";
  }
  return "Other";
}

BypassCategory bypass_category_from_string(std::string_view s) {
  for (auto c : {BypassCategory::AuxiliaryEntity, BypassCategory::NamespaceScoping, BypassCategory::CrossNamespace,
                 BypassCategory::Other}) {
    if (to_lower(to_string(c)) == to_lower(s)) return c;
  }
  throw Error(ErrorCode::InvalidArgument,
              "bypass category must be AuxiliaryEntity, NamespaceScoping, CrossNamespace or Other, not '" +
                  std::string(s) + "'");
}

int EntailmentReport::count(FactStatus s) const {
  return static_cast<int>(std::count_if(facts.begin(), facts.end(), [s](const FactCheck& f) { return f.status == s; }));
}

Ratio EntailmentReport::raw_score() const {
  if (fact_count == 0) return Ratio(0, 1);
  return Ratio(count(FactStatus::Pass), fact_count);
}

Ratio EntailmentReport::final_score() const {
  if (fact_count == 0) return Ratio(0, 1);
  return Ratio(count(FactStatus::Pass) + count(FactStatus::Bypassed), fact_count);
}

const FactCheck& EntailmentReport::fact(int ordinal) const {
  for (const auto& f : facts) {
    if (f.fact_ordinal == ordinal) return f;
  }
  throw Error(ErrorCode::NotFound, "no Fact " + std::to_string(ordinal) + " in the entailment report");
}

void to_json(json& j, const EntailmentReport& r) {
  json facts = json::array();
  for (const auto& f : r.facts) {
    json o{{"fact_ordinal", f.fact_ordinal},
           {"subject", f.subject},
           {"sentence_text", f.sentence},
           {"verdict", to_string(f.verdict)},
           {"rationale", f.rationale},
           {"status", to_string(f.status)},
           {"sentence_digest", f.sentence_digest},
           {"entailment_digest", f.entailment_digest}};
    if (f.bypass_category) {
      o["bypass"] = json{{"category", to_string(*f.bypass_category)}, {"note", f.bypass_note}};
    } else {
      o["bypass"] = nullptr;
    }
    facts.push_back(std::move(o));
  }
  json reviews = json::array();
  for (const auto& e : r.reviews) {
    reviews.push_back(json{{"version", e.version},
                           {"fact_ordinal", e.fact_ordinal},
                           {"previous", to_string(e.previous)},
                           {"category", to_string(e.category)},
                           {"note", e.note},
                           {"timestamp", e.timestamp}});
  }
  j = json{{"item_id", r.item_id},
           {"rdf_digest", r.rdf_digest},
           {"fact_count", r.fact_count},
           {"facts", facts},
           {"counts",
            {{"pass", r.count(FactStatus::Pass)},
             {"fail", r.count(FactStatus::Fail)},
             {"indeterminate", r.count(FactStatus::Indeterminate)},
             {"bypassed", r.count(FactStatus::Bypassed)}}},
           {"raw_score", r.raw_score()},
           {"final_score", r.final_score()},
           {"version", r.version},
           {"reviews", reviews},
           {"complete", r.complete}};
}

void from_json(const json& j, EntailmentReport& r) {
  r = EntailmentReport{};
  r.item_id = j.at("item_id").get<std::string>();
  r.rdf_digest = j.at("rdf_digest").get<std::string>();
  r.fact_count = j.at("fact_count").get<int>();
  for (const auto& o : j.at("facts")) {
    FactCheck f;
    f.fact_ordinal = o.at("fact_ordinal").get<int>();
    f.subject = o.value("subject", std::string{});
    f.sentence = o.at("sentence_text").get<std::string>();
    f.verdict = verdict_from_string(o.at("verdict").get<std::string>());
    f.rationale = o.value("rationale", std::string{});
    f.status = status_from(o.at("status").get<std::string>());
    f.sentence_digest = o.value("sentence_digest", std::string{});
    f.entailment_digest = o.value("entailment_digest", std::string{});
    if (o.contains("bypass") && !o["bypass"].is_null()) {
      f.bypass_category = bypass_category_from_string(o["bypass"].at("category").get<std::string>());
      f.bypass_note = o["bypass"].value("note", std::string{});
    }
    r.facts.push_back(std::move(f));
  }
  r.version = j.at("version").get<int>();
  for (const auto& o : j.at("reviews")) {
    ReviewEvent e;
    e.version = o.at("version").get<int>();
    e.fact_ordinal = o.at("fact_ordinal").get<int>();
    e.previous = status_from(o.at("previous").get<std::string>());
    e.category = bypass_category_from_string(o.at("category").get<std::string>());
    e.note = o.value("note", std::string{});
    e.timestamp = o.value("timestamp", std::string{});
    r.reviews.push_back(std::move(e));
  }
  r.complete = j.value("complete", true);
}

FactStatus status_for(Verdict v) {
  switch (v) {
    case Verdict::Yes: return FactStatus::Pass;
    case Verdict::No: return FactStatus::Fail;
    case Verdict::Indeterminate: return FactStatus::Indeterminate;
  }
  return FactStatus::Indeterminate;
}

namespace {

struct FactResult {
  FactCheck check;
  std::vector<OracleTranscript> transcripts;
};

FactResult check_fact(Oracle& oracle, const TextItem& item, std::span<const BackgroundFact> bfs, const rdf::Fact& fact) {
  FactResult out;
  out.check.fact_ordinal = fact.ordinal;
  out.check.subject = fact.subject.iri();

  auto to_sentence = oracle.complete(PromptKind::FactToSentence, build_fact_sentence_prompt(oracle.templates(), fact));
  out.check.sentence = trim(to_sentence.response_text);
  out.check.sentence_digest = to_sentence.request_digest;
  out.transcripts.push_back(std::move(to_sentence));
  if (out.check.sentence.empty()) {
    out.check.rationale = "the oracle returned an empty sentence";
    return out;
  }

  const PromptKind kind = bfs.empty() ? PromptKind::EntailmentNoBf : PromptKind::EntailmentWithBf;
  auto answer = oracle.complete(kind, build_entailment_prompt(oracle.templates(), kind, item, bfs, out.check.sentence));
  const EntailmentVerdict verdict = parse_entailment_verdict(answer.response_text);
  out.check.verdict = verdict.value;
  out.check.rationale = verdict.rationale;
  out.check.status = status_for(verdict.value);
  out.check.entailment_digest = answer.request_digest;
  out.transcripts.push_back(std::move(answer));
  return out;
}

}  // namespace

EntailmentReport run_entailment(Oracle& oracle, const TextItem& item, std::span<const BackgroundFact> bfs,
                                const rdf::RdfDocument& doc, std::vector<OracleTranscript>* transcripts) {
  if (doc.facts.empty()) throw Error(ErrorCode::InvalidArgument, "the RDF has no Facts to check");

  EntailmentReport report;
  report.item_id = item.id;
  report.rdf_digest = rdf::canonicalize(doc).digest;
  report.fact_count = static_cast<int>(doc.facts.size());

  std::vector<std::future<FactResult>> calls;
  for (const auto& fact : doc.facts) {
    calls.push_back(std::async(std::launch::async, [&oracle, &item, bfs, &fact] { return check_fact(oracle, item, bfs, fact); }));
  }
  std::vector<OracleTranscript> done;
  std::optional<Error> failure;
  for (auto& call : calls) {
    try {
      FactResult r = call.get();
      report.facts.push_back(std::move(r.check));
      done.insert(done.end(), r.transcripts.begin(), r.transcripts.end());
    } catch (const Error& e) {
      if (!is_transport_failure(e.code())) throw;
      if (!failure) failure = e;
    }
  }
  if (transcripts != nullptr) transcripts->insert(transcripts->end(), done.begin(), done.end());
  if (failure) {
    report.complete = false;
    throw OracleUnavailable(failure->code(), std::string("entailment check stopped: ") + failure->what(), json(report),
                            std::move(done));
  }
  return report;
}

EntailmentReport bypass(const EntailmentReport& report, int fact_ordinal, BypassCategory category,
                        const std::string& note, const std::string& timestamp) {
  if (category == BypassCategory::Other && trim(note).empty()) {
    throw Error(ErrorCode::InvalidArgument, "a bypass in category Other needs a note");
  }
  EntailmentReport next = report;
  auto it = std::find_if(next.facts.begin(), next.facts.end(),
                         [fact_ordinal](const FactCheck& f) { return f.fact_ordinal == fact_ordinal; });
  if (it == next.facts.end()) throw Error(ErrorCode::NotFound, "no Fact " + std::to_string(fact_ordinal));
  if (it->status == FactStatus::Pass || it->status == FactStatus::Bypassed) {
    throw Error(ErrorCode::InvalidTransition,
                "Fact " + std::to_string(fact_ordinal) + " is " + std::string(to_string(it->status)) +
                    "; only fail or indeterminate Facts can be bypassed");
  }
  const FactStatus previous = it->status;
  it->status = FactStatus::Bypassed;
  it->bypass_category = category;
  it->bypass_note = trim(note);
  next.version = report.version + 1;
  next.reviews.push_back(ReviewEvent{next.version, fact_ordinal, previous, category, trim(note), timestamp});
  return next;
}

}  // namespace kgwb
