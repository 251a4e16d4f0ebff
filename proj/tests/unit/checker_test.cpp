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


#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

#include "kgwb/checker.hpp"
#include "test_util.hpp"

namespace kgwb {
namespace {

TextItem paragraph(const std::string& text = "SLTI places the value 1 in register rd.") {
  TextItem item;
  item.id = "ch1-p1";
  item.chapter = "ch1";
  item.seq = 1;
  item.text = text;
  return item;
}

// Each label is one RDF graph. The surface form varies with `variant` so equal labels
// only group through canonical equality.
std::string ttl_for(char label, int variant) {
  if (label == 'x') return "@prefix ex: <http://example.org/ex#> .\nex:item ex:label \"broken\"\n";
  const std::string prefix = variant % 2 == 0 ? "ex" : "p" + std::to_string(variant);
  std::string out = "@prefix " + prefix + ": <http://example.org/ex#> .\n";
  if (variant % 3 == 0) out = "Here is the RDF:\n```turtle\n" + out;
  out += prefix + ":item " + prefix + ":label \"" + std::string(1, label) + "\" ;\n    " + prefix + ":kind " + prefix +
         ":Thing .\n";
  if (variant % 3 == 0) out += "```\n";
  return out;
}

std::shared_ptr<Transport> kgc_script(const std::string& labels) {
  return std::make_shared<ScriptedTransport>([labels](const OracleRequest& r) {
    return ttl_for(labels.at(static_cast<std::size_t>(r.sample - 1)), r.sample);
  });
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

TEST(Consistency, TenRunExample) {
  const auto start = std::chrono::steady_clock::now();
  Oracle oracle(kgc_script("aabcccxxab"), PromptTemplates::builtin());
  std::vector<OracleTranscript> transcripts;
  const auto report = run_consistency(oracle, paragraph(), {}, {}, &transcripts);

  EXPECT_EQ(report.requested_runs, 10);
  EXPECT_EQ(report.failed_count, 2);
  ASSERT_EQ(report.groups.size(), 3u);
  EXPECT_EQ(report.groups[0].members, (std::vector<int>{1, 2, 9}));
  EXPECT_EQ(report.groups[1].members, (std::vector<int>{3, 10}));
  EXPECT_EQ(report.groups[2].members, (std::vector<int>{4, 5, 6}));
  EXPECT_TRUE(report.systematic);
  ASSERT_TRUE(report.largest.has_value());
  // a and c both have three members; a starts first.
  EXPECT_EQ(*report.largest, report.groups[0]);
  EXPECT_EQ(select_representative(report), 1);
  EXPECT_FALSE(report.run(7).ok);
  EXPECT_EQ(report.run(7).error_line, 3u);
  EXPECT_EQ(transcripts.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(transcripts[i].sample, i + 1);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(Consistency, NoTwoEqualIsNotSystematic) {
  Oracle oracle(kgc_script("abcdexxxxx"), PromptTemplates::builtin());
  const auto report = run_consistency(oracle, paragraph(), {}, {});
  EXPECT_FALSE(report.systematic);
  EXPECT_EQ(report.groups.size(), 5u);
  EXPECT_EQ(code_of([&] { select_representative(report); }), ErrorCode::NotSystematic);

  Oracle all_fail(kgc_script("xxxxxxxxxx"), PromptTemplates::builtin());
  const auto failed = run_consistency(all_fail, paragraph(), {}, {});
  EXPECT_EQ(failed.failed_count, 10);
  EXPECT_FALSE(failed.largest.has_value());
  EXPECT_FALSE(failed.systematic);
}

TEST(Consistency, StrictTextModeSeparatesSurfaceVariants) {
  Oracle oracle(kgc_script("aaaa"), PromptTemplates::builtin());
  ConsistencyOptions opts;
  opts.n_runs = 4;
  opts.mode = rdf::EqualityMode::StrictText;
  const auto strict = run_consistency(oracle, paragraph(), {}, opts);
  opts.mode = rdf::EqualityMode::Canonical;
  const auto canonical = run_consistency(oracle, paragraph(), {}, opts);
  EXPECT_EQ(canonical.groups.size(), 1u);
  EXPECT_GT(strict.groups.size(), 1u);
}

TEST(Consistency, EmptyDocumentCountsAsFailure) {
  const auto out = evaluate_response(1, "@prefix ex: <http://example.org/ex#> .\n", rdf::EqualityMode::Canonical);
  EXPECT_FALSE(out.ok);
  EXPECT_FALSE(out.error.empty());
  EXPECT_EQ(code_of([&] {
              Oracle oracle(kgc_script("aa"), PromptTemplates::builtin());
              ConsistencyOptions o;
              o.n_runs = 1;
              run_consistency(oracle, paragraph(), {}, o);
            }),
            ErrorCode::InvalidArgument);
}

TEST(Consistency, JsonRoundTrip) {
  Oracle oracle(kgc_script("aabcccxxab"), PromptTemplates::builtin());
  const auto report = run_consistency(oracle, paragraph(), {}, {});
  const json j = report;
  EXPECT_EQ(j["largest_group"]["members"], json::array({1, 2, 9}));
  EXPECT_EQ(j["runs"][6]["parse_outcome"]["ok"], false);
  EXPECT_EQ(j["mode"], "canonical");
  EXPECT_EQ(json(j.get<ConsistencyReport>()), j);
}

TEST(Consistency, TransportFailureKeepsPartialReport) {
  auto flaky = std::make_shared<ScriptedTransport>([](const OracleRequest& r) -> std::string {
    if (r.sample == 4) throw Error(ErrorCode::RateLimited, "429");
    return ttl_for('a', r.sample);
  });
  Oracle oracle(flaky, PromptTemplates::builtin());
  try {
    run_consistency(oracle, paragraph(), {}, {});
    FAIL();
  } catch (const OracleUnavailable& e) {
    EXPECT_EQ(e.cause(), ErrorCode::RateLimited);
    EXPECT_EQ(e.partial_report()["complete"], false);
    EXPECT_EQ(e.partial_report()["runs"].size(), 9u);
    EXPECT_EQ(e.transcripts().size(), 9u);
  }
}

// Checks that the report partitions the runs and picks the largest group as specified.
void expect_well_formed(const ConsistencyReport& r, const std::vector<RunOutcome>& outcomes) {
  std::vector<int> seen;
  std::set<std::string> digests;
  std::size_t grouped = 0;
  for (const auto& g : r.groups) {
    ASSERT_FALSE(g.members.empty());
    EXPECT_TRUE(std::is_sorted(g.members.begin(), g.members.end()));
    EXPECT_TRUE(digests.insert(g.digest).second);
    for (int m : g.members) {
      EXPECT_EQ(outcomes[m - 1].digest, g.digest);
      EXPECT_TRUE(outcomes[m - 1].ok);
      seen.push_back(m);
    }
    grouped += g.size();
  }
  for (const auto& o : outcomes) {
    if (!o.ok) seen.push_back(o.run_index);
  }
  std::sort(seen.begin(), seen.end());
  std::vector<int> all(outcomes.size());
  std::iota(all.begin(), all.end(), 1);
  EXPECT_EQ(seen, all);
  EXPECT_EQ(static_cast<std::size_t>(r.failed_count) + grouped, outcomes.size());
  for (std::size_t i = 1; i < r.groups.size(); ++i) {
    EXPECT_LT(r.groups[i - 1].members.front(), r.groups[i].members.front());
  }

  std::size_t max_size = 0;
  for (const auto& g : r.groups) max_size = std::max(max_size, g.size());
  EXPECT_EQ(r.systematic, max_size >= 2);
  if (r.groups.empty()) {
    EXPECT_FALSE(r.largest.has_value());
    return;
  }
  ASSERT_TRUE(r.largest.has_value());
  EXPECT_EQ(r.largest->size(), max_size);
  for (const auto& g : r.groups) {
    if (g.size() == max_size) {
      EXPECT_EQ(*r.largest, g);
      break;
    }
  }
}

std::multiset<std::size_t> group_sizes(const ConsistencyReport& r) {
  std::multiset<std::size_t> out;
  for (const auto& g : r.groups) out.insert(g.size());
  return out;
}

TEST(ConsistencyProperty, RandomScriptedRuns) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> n_dist(2, 12);
  std::uniform_int_distribution<int> alphabet_dist(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = n_dist(rng);
    const int alphabet = alphabet_dist(rng);
    std::uniform_int_distribution<int> pick(0, alphabet);
    std::string labels;
    for (int i = 0; i < n; ++i) {
      const int k = pick(rng);
      labels.push_back(k == alphabet ? 'x' : static_cast<char>('a' + k));
    }
    Oracle oracle(kgc_script(labels), PromptTemplates::builtin());
    ConsistencyOptions opts;
    opts.n_runs = n;
    const auto report = run_consistency(oracle, paragraph(), {}, opts);
    SCOPED_TRACE(labels);

    std::vector<RunOutcome> outcomes = report.runs;
    const auto sizes = group_sizes(report);
    expect_well_formed(report, outcomes);

    // Runs with the same label must group together, different labels apart.
    std::map<char, std::string> digest_of;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == 'x') {
        EXPECT_FALSE(report.run(i + 1).ok);
        continue;
      }
      auto [it, inserted] = digest_of.try_emplace(labels[i], report.run(i + 1).digest);
      EXPECT_EQ(it->second, report.run(i + 1).digest);
    }
    std::set<std::string> distinct;
    for (const auto& [label, digest] : digest_of) distinct.insert(digest);
    EXPECT_EQ(distinct.size(), digest_of.size());

    // Relabelling the runs by a permutation leaves the grouping structure unchanged.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<RunOutcome> permuted = outcomes;
    for (int i = 0; i < n; ++i) permuted[i].run_index = perm[i];
    const auto again = assemble_consistency(permuted);
    std::sort(permuted.begin(), permuted.end(),
              [](const RunOutcome& a, const RunOutcome& b) { return a.run_index < b.run_index; });
    expect_well_formed(again, permuted);
    EXPECT_EQ(group_sizes(again), sizes);
    EXPECT_EQ(again.failed_count, report.failed_count);
    EXPECT_EQ(again.systematic, report.systematic);
    if (report.largest && std::count(sizes.begin(), sizes.end(), report.largest->size()) == 1) {
      EXPECT_EQ(again.largest->digest, report.largest->digest);
    }
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

// ---------------------------------------------------------------------------
// Entailment

EntailmentReport report_with(const std::vector<FactStatus>& statuses) {
  EntailmentReport r;
  r.item_id = "ch1-p1";
  r.fact_count = static_cast<int>(statuses.size());
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    FactCheck f;
    f.fact_ordinal = static_cast<int>(i) + 1;
    f.status = statuses[i];
    r.facts.push_back(f);
  }
  return r;
}

TEST(EntailmentScore, ExhaustiveUpToEightFacts) {
  const FactStatus kAll[] = {FactStatus::Pass, FactStatus::Fail, FactStatus::Indeterminate, FactStatus::Bypassed};
  std::size_t checked = 0;
  for (int n = 1; n <= 8; ++n) {
    std::vector<int> digits(n, 0);
    while (true) {
      std::vector<FactStatus> statuses;
      int pass = 0;
      int bypassed = 0;
      for (int d : digits) {
        statuses.push_back(kAll[d]);
        pass += kAll[d] == FactStatus::Pass;
        bypassed += kAll[d] == FactStatus::Bypassed;
      }
      const auto r = report_with(statuses);
      ASSERT_EQ(r.raw_score(), Ratio(pass, n));
      ASSERT_EQ(r.final_score(), Ratio(pass + bypassed, n));
      ASSERT_LE(r.raw_score(), r.final_score());
      ++checked;

      // Bypassing any open Fact keeps raw and raises final by exactly 1/N.
      for (const auto& f : r.facts) {
        if (f.status != FactStatus::Fail && f.status != FactStatus::Indeterminate) continue;
        const auto next = bypass(r, f.fact_ordinal, BypassCategory::AuxiliaryEntity, "");
        ASSERT_EQ(next.raw_score(), r.raw_score());
        ASSERT_EQ(next.final_score(), Ratio(pass + bypassed + 1, n));
        ASSERT_EQ(next.version, r.version + 1);
      }

      int i = 0;
      while (i < n && ++digits[i] == 4) digits[i++] = 0;
      if (i == n) break;
    }
  }
  EXPECT_EQ(checked, 87380u);  // sum of 4^n for n = 1..8
}

TEST(EntailmentScore, EmptyReportScoresZero) {
  const auto r = report_with({});
  EXPECT_EQ(r.raw_score(), Ratio(0, 1));
  EXPECT_EQ(r.final_score(), Ratio(0, 1));
}

TEST(Bypass, TransitionsAndAudit) {
  const auto r = report_with({FactStatus::Pass, FactStatus::Fail, FactStatus::Indeterminate});
  EXPECT_EQ(code_of([&] { bypass(r, 1, BypassCategory::AuxiliaryEntity, ""); }), ErrorCode::InvalidTransition);
  EXPECT_EQ(code_of([&] { bypass(r, 9, BypassCategory::AuxiliaryEntity, ""); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { bypass(r, 2, BypassCategory::Other, " "); }), ErrorCode::InvalidArgument);

  const auto v2 = bypass(r, 2, BypassCategory::NamespaceScoping, " rv: vs ex: ", "2026-01-01T00:00:00Z");
  EXPECT_EQ(v2.fact(2).status, FactStatus::Bypassed);
  EXPECT_EQ(v2.fact(2).bypass_note, "rv: vs ex:");
  ASSERT_EQ(v2.reviews.size(), 1u);
  EXPECT_EQ(v2.reviews[0], (ReviewEvent{2, 2, FactStatus::Fail, BypassCategory::NamespaceScoping, "rv: vs ex:",
                                        "2026-01-01T00:00:00Z"}));
  EXPECT_EQ(code_of([&] { bypass(v2, 2, BypassCategory::AuxiliaryEntity, ""); }), ErrorCode::InvalidTransition);
  const auto v3 = bypass(v2, 3, BypassCategory::Other, "sentence was garbled");
  EXPECT_EQ(v3.version, 3);
  EXPECT_EQ(v3.final_score(), Ratio(1, 1));
  EXPECT_EQ(v3.raw_score(), Ratio(1, 3));
  // The input report is left untouched.
  EXPECT_EQ(r.fact(2).status, FactStatus::Fail);

  const json j = v3;
  EXPECT_EQ(j["raw_score"]["num"], 1);
  EXPECT_EQ(json(j.get<EntailmentReport>()), j);
  EXPECT_EQ(bypass_category_from_string("auxiliaryentity"), BypassCategory::AuxiliaryEntity);
  EXPECT_EQ(bypass_category_from_string(to_string(BypassCategory::CrossNamespace)), BypassCategory::CrossNamespace);
}

TEST(Entailment, TwoPromptsPerFact) {
  const auto doc = rdf::parse_ttl(testing::read_data("slti/slti_plain.ttl"));
  auto script = std::make_shared<ScriptedTransport>([](const OracleRequest& r) -> std::string {
    if (r.kind == PromptKind::FactToSentence) {
      if (r.prompt.find("rv:SLTIU a") != std::string::npos) return "SLTIU is an unsigned comparison.";
      if (r.prompt.find("rv:Immediate a") != std::string::npos) return "   ";
      return "Statement " + std::to_string(r.prompt.size());
    }
    if (r.prompt.find("SLTIU is an unsigned") != std::string::npos) return "No. Not stated.";
    return "Yes.";
  });
  Oracle oracle(script, PromptTemplates::builtin());
  std::vector<OracleTranscript> transcripts;
  const auto report = run_entailment(oracle, paragraph(), {}, doc, &transcripts);
  ASSERT_EQ(report.fact_count, 4);
  EXPECT_EQ(report.fact(1).status, FactStatus::Pass);
  EXPECT_EQ(report.fact(2).status, FactStatus::Fail);
  EXPECT_EQ(report.fact(2).verdict, Verdict::No);
  EXPECT_EQ(report.fact(3).status, FactStatus::Indeterminate);
  EXPECT_TRUE(report.fact(3).entailment_digest.empty());
  EXPECT_EQ(report.fact(4).status, FactStatus::Pass);
  EXPECT_EQ(report.raw_score(), Ratio(1, 2));
  EXPECT_EQ(transcripts.size(), 7u);
  EXPECT_EQ(report.rdf_digest, rdf::canonicalize(doc).digest);

  const rdf::RdfDocument empty;
  EXPECT_EQ(code_of([&] { run_entailment(oracle, paragraph(), {}, empty); }), ErrorCode::InvalidArgument);
}

TEST(Entailment, UsesBfTemplateWhenBfsGiven) {
  const auto doc = rdf::parse_ttl("@prefix rv: <http://example.org/riscv#> .\nrv:SLTI rv:writes rv:rd .\n");
  std::vector<PromptKind> kinds;
  std::mutex mu;
  auto script = std::make_shared<ScriptedTransport>([&](const OracleRequest& r) -> std::string {
    std::lock_guard lock(mu);
    kinds.push_back(r.kind);
    return "Yes.";
  });
  Oracle oracle(script, PromptTemplates::builtin());
  BackgroundFact b;
  b.id = "bf-0001";
  b.text = "rd is the destination register.";
  const std::vector<BackgroundFact> bfs{b};
  run_entailment(oracle, paragraph(), bfs, doc);
  EXPECT_EQ(kinds, (std::vector<PromptKind>{PromptKind::FactToSentence, PromptKind::EntailmentWithBf}));
}

TEST(Entailment, TransportFailureIsOracleUnavailable) {
  const auto doc = rdf::parse_ttl(testing::read_data("slti/slti_plain.ttl"));
  auto script = std::make_shared<ScriptedTransport>([](const OracleRequest& r) -> std::string {
    if (r.prompt.find("rv:Register a") != std::string::npos) throw Error(ErrorCode::TransportError, "reset");
    return r.kind == PromptKind::FactToSentence ? "A sentence." : "Yes.";
  });
  Oracle oracle(script, PromptTemplates::builtin());
  try {
    run_entailment(oracle, paragraph(), {}, doc);
    FAIL();
  } catch (const OracleUnavailable& e) {
    EXPECT_EQ(e.cause(), ErrorCode::TransportError);
    EXPECT_EQ(e.partial_report()["facts"].size(), 3u);
    EXPECT_EQ(e.partial_report()["complete"], false);
  }
}

}  // namespace
}  // namespace kgwb
