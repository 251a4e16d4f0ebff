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

#include <condition_variable>
#include <filesystem>
#include <thread>

#include "kgwb/workbench.hpp"
#include "minicorpus_scenario.hpp"
#include "test_util.hpp"

namespace kgwb {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

std::shared_ptr<Transport> replay() {
  return std::make_shared<ReplayTransport>(testing::minicorpus_dir() + "/fixtures");
}

std::map<std::string, std::string> tree(const std::string& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  }
  return out;
}

class MiniCorpus : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("wb-replay");
    Workbench wb(testing::minicorpus_config(dir_->str(), replay()));
    result_ = new testing::ScenarioResult(testing::run_minicorpus_scenario(wb));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete dir_;
  }

  static std::string run(const std::string& label) { return result_->runs.at(label); }

  static TempDir* dir_;
  static testing::ScenarioResult* result_;
};

TempDir* MiniCorpus::dir_ = nullptr;
testing::ScenarioResult* MiniCorpus::result_ = nullptr;

TEST_F(MiniCorpus, RunIdsAndScores) {
  EXPECT_EQ(run("p1"), "riscv-p1_bf0_v1_1");
  EXPECT_EQ(run("p3_bfa"), "riscv-p3_bf1_v1_1");
  EXPECT_EQ(run("p4_bfa"), "riscv-p4_bf1_v1_1");

  Workbench wb(testing::minicorpus_config(dir_->str(), nullptr));
  const auto p1 = wb.run(run("p1"));
  EXPECT_TRUE(p1.systematic);
  EXPECT_EQ(p1.representative, 1);
  EXPECT_EQ(p1.final_score, Ratio(1, 1));
  const auto c1 = wb.consistency(run("p1"));
  EXPECT_EQ(c1.failed_count, 2);
  ASSERT_EQ(c1.groups.size(), 2u);
  EXPECT_EQ(c1.groups[0].members, (std::vector<int>{1, 2, 4, 6, 7, 9, 10}));
  EXPECT_EQ(c1.groups[1].members, (std::vector<int>{3}));

  const auto p2 = wb.run(run("p2"));
  EXPECT_EQ(p2.raw_score, Ratio(3, 4));
  EXPECT_EQ(p2.final_score, Ratio(1, 1));
  const auto e2 = wb.entailment(run("p2"));
  ASSERT_TRUE(e2.has_value());
  EXPECT_EQ(e2->facts[3].status, FactStatus::Bypassed);

  for (const char* label : {"p3", "p5"}) {
    const auto r = wb.run(run(label));
    EXPECT_FALSE(r.systematic) << label;
    EXPECT_FALSE(r.final_score.has_value()) << label;
  }
  EXPECT_EQ(wb.consistency(run("p3")).failed_count, 10);
  EXPECT_EQ(wb.run(run("p4")).raw_score, Ratio(1, 2));
  EXPECT_EQ(wb.run(run("p4_bfa")).final_score, Ratio(1, 1));
  EXPECT_EQ(wb.transcripts(run("p4")).size(), 10u + 4u);
}

TEST_F(MiniCorpus, GraphAndStates) {
  Workbench wb(testing::minicorpus_config(dir_->str(), nullptr));
  EXPECT_EQ(wb.event_count(), 24u);
  for (const auto& v : wb.items()) EXPECT_EQ(v.state, ItemState::Accepted) << v.item.id;
  const auto g = wb.graph();
  EXPECT_EQ(g.size(), 42u);
  EXPECT_EQ(g.items().size(), 6u);
  bool shared_triple = false;
  for (const auto& [line, ids] : g.provenance()) {
    if (ids == std::set<std::string>{"riscv-p3", "riscv-p4"}) shared_triple = true;
  }
  EXPECT_TRUE(shared_triple);
  EXPECT_NE(wb.graph_turtle().find(" a rv:Instruction"), std::string::npos);
  const json state = wb.state_json();
  EXPECT_EQ(state["items"].size(), 6u);
}

TEST_F(MiniCorpus, CompareRunsShowsUpDown) {
  Workbench wb(testing::minicorpus_config(dir_->str(), nullptr));
  const json c = wb.compare_runs("riscv-p4", run("p4"), run("p4_bfa"));
  EXPECT_EQ(c["label"], "BFφ-Fail");
  EXPECT_EQ(c["coverage"]["quadrant"], "UD");
  EXPECT_EQ(c["coverage"]["d_entities"], 1);
  EXPECT_EQ(c["coverage"]["d_triples"], -1);
  EXPECT_EQ(c["rse_carryover"]["num"], 1);
  EXPECT_EQ(c["rse_carryover"]["den"], 1);
  const json same = wb.compare_runs("riscv-p1", run("p1"), run("p1"));
  EXPECT_EQ(same["coverage"]["quadrant"], "FLAT");
  EXPECT_EQ(same["rse_carryover"]["value"], 1.0);
  EXPECT_EQ(same["label"], "BFφ-Pass");
  EXPECT_EQ(code_of([&] { wb.compare_runs("riscv-p4", run("p3"), run("p4_bfa")); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { wb.compare_runs("riscv-p3", run("p3"), run("p3_bfa")); }), ErrorCode::NotSystematic);
}

TEST_F(MiniCorpus, Concepts) {
  Workbench wb(testing::minicorpus_config(dir_->str(), nullptr));
  const auto bfa = wb.concepts("bfa");
  const auto bfphi = wb.concepts("bfphi");
  EXPECT_FALSE(bfa.empty());
  EXPECT_FALSE(bfphi.empty());
  const auto g = wb.bipartite("bfphi", 2);
  for (const auto& c : g.concepts) EXPECT_GE(c.occurrence_count, 2u);
  EXPECT_EQ(code_of([&] { wb.concepts("both"); }), ErrorCode::InvalidArgument);
}

TEST_F(MiniCorpus, EventLogRebuildsIdenticalFiles) {
  const auto before = tree(dir_->str());
  TempDir copy("wb-rebuild");
  fs::copy_file(dir_->str() + "/events.jsonl", copy.str() + "/events.jsonl");
  Workbench rebuilt(testing::minicorpus_config(copy.str(), nullptr));
  EXPECT_EQ(tree(copy.str()), before);
}

TEST_F(MiniCorpus, ReplayIsDeterministic) {
  TempDir other("wb-replay-2");
  {
    Workbench wb(testing::minicorpus_config(other.str(), replay()));
    EXPECT_EQ(testing::run_minicorpus_scenario(wb).runs, result_->runs);
  }
  EXPECT_EQ(tree(other.str()), tree(dir_->str()));
}

TEST_F(MiniCorpus, GuardsOnTransitions) {
  TempDir scratch("wb-guards");
  fs::copy_file(dir_->str() + "/events.jsonl", scratch.str() + "/events.jsonl");
  Workbench wb(testing::minicorpus_config(scratch.str(), replay()));
  EXPECT_EQ(code_of([&] { wb.accept_item("riscv-p4", run("p4")); }), ErrorCode::NotEligible);
  EXPECT_EQ(code_of([&] { wb.accept_item("riscv-p3", run("p3")); }), ErrorCode::NotEligible);
  EXPECT_EQ(code_of([&] { wb.accept_item("riscv-p1", run("p2")); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { wb.assign_bfs("riscv-p4", {}, 0); }), ErrorCode::StaleVersion);
  EXPECT_EQ(wb.assign_bfs("riscv-p4", {}, 1).assignment.version, 2);
  EXPECT_EQ(code_of([&] { wb.assign_bfs("riscv-p4", {"bf-0042"}); }), ErrorCode::UnknownBf);
  EXPECT_EQ(code_of([&] { wb.run("nope"); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { wb.bypass(run("p1"), 1, BypassCategory::Other, "x"); }), ErrorCode::InvalidTransition);
  const auto again = wb.accept_item("riscv-p1", run("p1"));
  EXPECT_EQ(again.triples_added, 0u);
  EXPECT_EQ(again.graph_size, 42u);
  // Old BF versions stay runnable against the same fixtures.
  EXPECT_EQ(wb.execute_run("riscv-p4", 1).run_id, "riscv-p4_bf1_v1_2");
}

TEST_F(MiniCorpus, AssignWarnsAboutSuperimposedBf) {
  TempDir scratch("wb-warn");
  Workbench wb(testing::minicorpus_config(scratch.str(), replay()));
  wb.ingest(read_file(testing::minicorpus_dir() + "/corpus.txt"), "riscv");
  const auto bf = wb.add_bf("The pc register holds the address of the instruction being executed.", {"pc", "AUIPC"});
  const auto suggestions = wb.suggest_bfs("riscv-p4");
  ASSERT_EQ(suggestions.size(), 1u);
  const auto result = wb.assign_bfs("riscv-p4", {bf.id});
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_EQ(result.warnings[0].kind, BfWarning::Kind::Superimposed);
}

// ---------------------------------------------------------------------------
// Scripted oracles

const char* kDoc = "@prefix ex: <http://example.org/ex#> .\nex:A ex:p ex:B .\n";

TEST(Workbench, BusyWhileRunInFlight) {
  TempDir dir("wb-busy");
  std::mutex m;
  std::condition_variable cv;
  bool started = false;
  bool release = false;
  auto transport = std::make_shared<ScriptedTransport>([&](const OracleRequest& r) -> std::string {
    if (r.kind == PromptKind::KgcNoBf && r.sample == 1) {
      std::unique_lock lock(m);
      started = true;
      cv.notify_all();
      cv.wait(lock, [&] { return release; });
    }
    if (r.kind == PromptKind::KgcNoBf || r.kind == PromptKind::KgcWithBf) return kDoc;
    if (r.kind == PromptKind::FactToSentence) return "A relates to B.";
    return "Yes.";
  });
  WorkbenchConfig config;
  config.workdir = dir.str();
  config.transport = transport;
  config.max_in_flight = 1;
  Workbench wb(config);
  wb.ingest("First paragraph.\n\nSecond paragraph.\n", "ch");
  std::thread worker([&] { wb.execute_run("ch-p1", std::nullopt, 3); });
  {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return started; });
  }
  EXPECT_EQ(code_of([&] { wb.execute_run("ch-p1", std::nullopt, 3); }), ErrorCode::Busy);
  EXPECT_EQ(code_of([&] { wb.split_item("ch-p1", {"First", "paragraph."}, true); }), ErrorCode::Busy);
  {
    std::lock_guard lock(m);
    release = true;
  }
  cv.notify_all();
  worker.join();
  EXPECT_EQ(wb.state("ch-p1"), ItemState::NeedsReview);
  EXPECT_EQ(wb.state("ch-p2"), ItemState::Unprocessed);
  EXPECT_NO_THROW(wb.execute_run("ch-p1", std::nullopt, 2));
  EXPECT_EQ(code_of([&] { wb.execute_run("ch-p1", std::nullopt, 1); }), ErrorCode::InvalidArgument);
}

TEST(Workbench, SplitInheritsBfsAndRetiresParent) {
  TempDir dir("wb-split");
  WorkbenchConfig config;
  config.workdir = dir.str();
  config.transport = std::make_shared<ScriptedTransport>([](const OracleRequest&) { return std::string(kDoc); });
  Workbench wb(config);
  wb.ingest("Alpha beta. Gamma delta.\n", "ch");
  const auto bf = wb.add_bf("Alpha is a letter.", {"Alpha"});
  wb.assign_bfs("ch-p1", {bf.id});
  const auto children = wb.split_item("ch-p1", {"Alpha beta.", "Gamma delta."}, true);
  ASSERT_EQ(children.size(), 2u);
  EXPECT_EQ(children[0].id, "ch-p1.1");
  EXPECT_EQ(wb.item("ch-p1.2").assignment.bf_ids, (std::vector<std::string>{bf.id}));
  EXPECT_EQ(code_of([&] { wb.execute_run("ch-p1"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { wb.split_item("ch-p1.1", {"Alpha", "gamma"}, true); }), ErrorCode::PartitionMismatch);

  Workbench reopened(WorkbenchConfig{dir.str()});
  EXPECT_EQ(reopened.items().size(), 3u);
  EXPECT_EQ(code_of([&] { reopened.execute_run("ch-p1.1"); }), ErrorCode::InvalidArgument);
}

TEST(Workbench, CorruptLogIsReported) {
  TempDir dir("wb-corrupt");
  write_file_atomic(dir.str() + "/events.jsonl", "{\"type\":\"ingest\"\n");
  EXPECT_EQ(code_of([&] { Workbench wb(WorkbenchConfig{dir.str()}); }), ErrorCode::Io);
}

}  // namespace
}  // namespace kgwb
