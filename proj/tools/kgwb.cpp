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

// kgwb: command-line client of the knowledge-graph construction workbench.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "kgwb/graph_export.hpp"
#include "kgwb/http_api.hpp"
#include "kgwb/workbench.hpp"

namespace {

using kgwb::json;

std::string default_workdir() {
  const char* home = std::getenv("KGWB_HOME");
  return home != nullptr && *home != '\0' ? home : "kgwb-work";
}

std::unique_ptr<kgwb::Workbench> open_workbench(const std::string& workdir, bool need_oracle) {
  kgwb::WorkbenchConfig config;
  config.workdir = workdir;
  if (need_oracle) {
    kgwb::OracleEnv env = kgwb::OracleEnv::from_environment();
    if (env.fixture_dir.empty()) env.fixture_dir = (std::filesystem::path(workdir) / "fixtures").string();
    config.transport = kgwb::make_transport(env);
    config.params.model = env.model;
    if (const char* t = std::getenv("ORACLE_TEMPERATURE")) config.params.temperature = std::stod(t);
    if (const char* seed = std::getenv("ORACLE_SEED")) config.params.seed = std::stoi(seed);
  }
  if (const char* prompts = std::getenv("KGWB_PROMPTS")) config.templates = kgwb::PromptTemplates::load(prompts);
  if (const char* fixed = std::getenv("KGWB_FIXED_CLOCK")) config.clock = kgwb::fixed_clock(fixed);
  return std::make_unique<kgwb::Workbench>(std::move(config));
}

std::string ratio_text(const std::optional<kgwb::Ratio>& r) {
  if (!r) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s (%.3f)", r->str().c_str(), r->value());
  return buf;
}

void print_run(const kgwb::RunRecord& r) {
  std::cout << "run " << r.run_id << "\n"
            << "  item          " << r.item_id << " (BF version " << r.bf_assignment_version << ")\n"
            << "  systematic    " << (r.systematic ? "yes" : "no") << "\n"
            << "  representative " << (r.representative ? std::to_string(*r.representative) : "-") << "\n"
            << "  raw score     " << ratio_text(r.raw_score) << "\n"
            << "  final score   " << ratio_text(r.final_score) << "\n";
  if (!r.complete) std::cout << "  incomplete: " << r.error << "\n";
}

void print_review(kgwb::Workbench& wb, const std::string& run_id) {
  const auto record = wb.run(run_id);
  print_run(record);
  const auto c = wb.consistency(run_id);
  std::cout << "\nconsistency: " << c.runs.size() << " runs, " << c.failed_count << " syntax failures, groups";
  for (const auto& g : c.groups) std::cout << " " << g.size();
  std::cout << "\n";
  const auto e = wb.entailment(run_id);
  if (!e) {
    std::cout << "no entailment check (no representative RDF)\n";
    return;
  }
  std::printf("\n%-5s %-14s %-13s %s\n", "fact", "status", "verdict", "sentence");
  for (const auto& f : e->facts) {
    std::string status(kgwb::to_string(f.status));
    if (f.bypass_category) status += ":" + std::string(kgwb::to_string(*f.bypass_category));
    std::printf("%-5d %-14s %-13s %s\n", f.fact_ordinal, status.c_str(), std::string(kgwb::to_string(f.verdict)).c_str(),
                f.sentence.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph construction workbench"};
  app.require_subcommand(1);
  std::string workdir = default_workdir();
  app.add_option("--workdir,-w", workdir, "Work directory (default: $KGWB_HOME or ./kgwb-work)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Split a document into text items");
  std::string ingest_file, chapter;
  ingest->add_option("file", ingest_file, "Plain-text document")->required()->check(CLI::ExistingFile);
  ingest->add_option("--chapter", chapter, "Chapter label")->required();

  // split
  auto* split = app.add_subcommand("split", "Replace an item by sub-paragraphs");
  std::string split_item;
  std::vector<std::string> split_parts;
  bool split_partition = false;
  split->add_option("item", split_item)->required();
  split->add_option("--part", split_parts, "Text of one part; repeat per part")->required();
  split->add_flag("--partition", split_partition, "Require the parts to cover the parent text exactly");

  // items
  auto* items = app.add_subcommand("items", "List items and their states");

  // bf
  auto* bf = app.add_subcommand("bf", "Background facts");
  bf->require_subcommand(1);
  auto* bf_add = bf->add_subcommand("add", "Store a background fact");
  std::string bf_text;
  std::vector<std::string> bf_terms;
  std::string bf_origin;
  bf_add->add_option("text", bf_text)->required();
  bf_add->add_option("--key-term,-k", bf_terms, "Surface string the fact is about; repeatable");
  bf_add->add_option("--origin", bf_origin, "Item after whose review the fact was written");
  auto* bf_list = bf->add_subcommand("list", "List background facts");
  std::string bf_list_item;
  bf_list->add_option("--suggest", bf_list_item, "Rank the facts that match this item");
  auto* bf_assign = bf->add_subcommand("assign", "Set the background facts of an item");
  std::string bf_assign_item;
  std::vector<std::string> bf_assign_ids;
  std::optional<int> bf_expected;
  bf_assign->add_option("item", bf_assign_item)->required();
  bf_assign->add_option("bf_ids", bf_assign_ids)->required();
  bf_assign->add_option("--expected-version", bf_expected);
  auto* bf_import = bf->add_subcommand("import", "Load a background-fact file");
  std::string bf_import_file;
  bf_import->add_option("file", bf_import_file)->required()->check(CLI::ExistingFile);

  // run
  auto* run = app.add_subcommand("run", "Consistency and entailment checks for an item");
  std::string run_item;
  std::optional<int> run_bf_version;
  int run_n = 10;
  run->add_option("item", run_item)->required();
  run->add_option("--bf-version", run_bf_version, "BF assignment version (default: current)");
  run->add_option("--runs", run_n, "Number of repeated prompts")->check(CLI::Range(2, 1000));

  auto* review = app.add_subcommand("review", "Show the per-Fact table of a run");
  std::string review_run;
  review->add_option("run", review_run)->required();

  auto* bypass = app.add_subcommand("bypass", "Bypass a failing Fact after manual review");
  std::string bypass_run, bypass_category, bypass_note;
  int bypass_fact = 0;
  bypass->add_option("run", bypass_run)->required();
  bypass->add_option("fact", bypass_fact)->required();
  bypass->add_option("--category", bypass_category, "AuxiliaryEntity, NamespaceScoping, CrossNamespace or Other")
      ->required();
  bypass->add_option("--note", bypass_note);

  auto* accept = app.add_subcommand("accept", "Merge an eligible run into the knowledge graph");
  std::string accept_item, accept_run;
  accept->add_option("item", accept_item)->required();
  accept->add_option("run", accept_run)->required();

  auto* metrics = app.add_subcommand("metrics", "Run comparisons");
  metrics->require_subcommand(1);
  auto* compare = metrics->add_subcommand("compare", "Coverage, carry-over and conformity of two runs");
  std::string cmp_item, cmp_a, cmp_b;
  compare->add_option("item", cmp_item)->required();
  compare->add_option("run_a", cmp_a)->required();
  compare->add_option("run_b", cmp_b)->required();

  auto* concepts = app.add_subcommand("concepts", "Subject concepts");
  concepts->require_subcommand(1);
  auto* concepts_export = concepts->add_subcommand("export", "Concept-paragraph bipartite graph");
  std::string concepts_scenario = "bfphi", concepts_format = "dot", concepts_out;
  std::size_t concepts_min = 2;
  concepts_export->add_option("--scenario", concepts_scenario)->check(CLI::IsMember({"bfphi", "bfa"}));
  concepts_export->add_option("--min", concepts_min, "Minimum paragraphs per concept");
  concepts_export->add_option("--format", concepts_format)->check(CLI::IsMember({"dot", "graphml", "json"}));
  concepts_export->add_option("--output,-o", concepts_out);
  auto* concepts_top = concepts->add_subcommand("top", "Most frequent concepts as CSV");
  std::size_t top_k = 5;
  concepts_top->add_option("--scenario", concepts_scenario)->check(CLI::IsMember({"bfphi", "bfa"}));
  concepts_top->add_option("-k", top_k);

  auto* graph = app.add_subcommand("graph", "Print the merged graph as Turtle");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP JSON API");
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  serve->add_option("--host", serve_host);
  serve->add_option("--port", serve_port);

  CLI11_PARSE(app, argc, argv);

  try {
    const bool need_oracle = run->parsed() || serve->parsed();
    auto wb = open_workbench(workdir, need_oracle);

    if (ingest->parsed()) {
      const auto created = wb->ingest(kgwb::read_file(ingest_file), chapter);
      for (const auto& item : created) std::cout << item.id << "\n";
    } else if (split->parsed()) {
      for (const auto& child : wb->split_item(split_item, split_parts, split_partition)) std::cout << child.id << "\n";
    } else if (items->parsed()) {
      for (const auto& v : wb->items()) {
        std::printf("%-16s %-11s %-13s bf v%d\n", v.item.id.c_str(), v.item.active() ? "active" : "superseded",
                    std::string(kgwb::to_string(v.state)).c_str(), v.assignment.version);
      }
    } else if (bf_add->parsed()) {
      std::optional<std::string> origin;
      if (!bf_origin.empty()) origin = bf_origin;
      std::cout << wb->add_bf(bf_text, bf_terms, origin).id << "\n";
    } else if (bf_list->parsed()) {
      if (bf_list_item.empty()) {
        for (const auto& f : wb->bfs()) std::cout << f.id << "  " << f.text << "\n";
      } else {
        for (const auto& s : wb->suggest_bfs(bf_list_item)) std::cout << s.bf.id << "  " << s.matches << "  " << s.bf.text << "\n";
      }
    } else if (bf_assign->parsed()) {
      const auto r = wb->assign_bfs(bf_assign_item, bf_assign_ids, bf_expected);
      std::cout << bf_assign_item << " BF version " << r.assignment.version << "\n";
      for (const auto& w : r.warnings) std::cerr << "warning: " << w.message << "\n";
    } else if (bf_import->parsed()) {
      const auto added = wb->import_bfs(json::parse(kgwb::read_file(bf_import_file)));
      std::cout << added.size() << " background facts imported\n";
    } else if (run->parsed()) {
      print_run(wb->execute_run(run_item, run_bf_version, run_n));
      std::cout << "  state         " << kgwb::to_string(wb->state(run_item)) << "\n";
    } else if (review->parsed()) {
      print_review(*wb, review_run);
    } else if (bypass->parsed()) {
      const auto report =
          wb->bypass(bypass_run, bypass_fact, kgwb::bypass_category_from_string(bypass_category), bypass_note);
      std::cout << "final score " << ratio_text(report.final_score()) << "\n";
    } else if (accept->parsed()) {
      const auto r = wb->accept_item(accept_item, accept_run);
      std::cout << r.triples_added << " triples added, graph has " << r.graph_size << "\n";
    } else if (compare->parsed()) {
      std::cout << wb->compare_runs(cmp_item, cmp_a, cmp_b).dump(2) << "\n";
    } else if (concepts_export->parsed()) {
      const auto g = wb->bipartite(concepts_scenario, concepts_min);
      const std::string text = kgwb::analytics::render(g, kgwb::analytics::graph_format_from_string(concepts_format));
      if (concepts_out.empty()) {
        std::cout << text;
      } else {
        kgwb::write_file_atomic(concepts_out, text);
        std::cerr << g.concepts.size() << " concepts, " << g.edges.size() << " edges written to " << concepts_out << "\n";
      }
    } else if (concepts_top->parsed()) {
      std::cout << kgwb::analytics::to_csv(kgwb::analytics::top_concepts(wb->concepts(concepts_scenario), top_k));
    } else if (graph->parsed()) {
      std::cout << wb->graph_turtle();
    } else if (serve->parsed()) {
      kgwb::ApiServer server(*wb);
      if (!server.bind(serve_host, serve_port)) {
        std::cerr << "kgwb: cannot bind " << serve_host << ":" << serve_port << "\n";
        return 1;
      }
      std::cerr << "serving " << wb->workdir() << " on http://" << serve_host << ":" << serve_port << "\n";
      server.listen_after_bind();
    }
  } catch (const kgwb::Error& e) {
    std::cerr << "kgwb: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kgwb: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
