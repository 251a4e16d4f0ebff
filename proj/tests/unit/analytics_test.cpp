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

#include <bit>
#include <chrono>
#include <random>

#include "kgwb/analytics.hpp"
#include "kgwb/graph_export.hpp"
#include "random_rdf.hpp"
#include "test_util.hpp"

namespace kgwb::analytics {
namespace {

using kgwb::testing::read_data;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

// ---------------------------------------------------------------------------
// Conformity

std::set<std::string> set_of(unsigned mask) {
  std::set<std::string> out;
  for (int b = 0; b < 5; ++b) {
    if (mask & (1u << b)) out.insert("e" + std::to_string(b));
  }
  return out;
}

// Enumerates every multiset of R subsets of a u-element universe; the score is
// symmetric in its arguments, so ordered families add nothing.
template <typename Fn>
void for_each_family(int universe, int r, Fn&& fn) {
  const unsigned n_subsets = 1u << universe;
  std::vector<unsigned> family(r, 0);
  while (true) {
    fn(family);
    int i = r - 1;
    while (i >= 0 && family[i] == n_subsets - 1) --i;
    if (i < 0) return;
    ++family[i];
    for (int j = i + 1; j < r; ++j) family[j] = family[i];
  }
}

TEST(Conformity, BruteForceOverSmallFamilies) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (int universe = 1; universe <= 5; ++universe) {
    for (int r = 1; r <= 4; ++r) {
      for_each_family(universe, r, [&](const std::vector<unsigned>& family) {
        unsigned uni = 0;
        int total = 0;
        std::vector<std::set<std::string>> sets;
        for (unsigned m : family) {
          uni |= m;
          total += std::popcount(m);
          sets.push_back(set_of(m));
        }
        if (uni == 0) {
          ASSERT_EQ(code_of([&] { conformity_score(sets); }), ErrorCode::EmptyUnion);
          return;
        }
        const Ratio score = conformity_score(sets);
        ASSERT_EQ(score, Ratio(total, std::popcount(uni)));
        ASSERT_GE(score, Ratio(1, 1));
        ASSERT_LE(score, Ratio(r, 1));
        ++checked;
      });
    }
  }
  EXPECT_GT(checked, 50000u);
  EXPECT_EQ(code_of([] { conformity_score({}); }), ErrorCode::InvalidArgument);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(Conformity, Endpoints) {
  const std::set<std::string> s{"SLTI", "SLTIU", "Immediate"};
  for (int r = 1; r <= 10; ++r) {
    EXPECT_EQ(conformity_score(std::vector<std::set<std::string>>(r, s)), Ratio(r, 1));
  }
  EXPECT_EQ(conformity_score({{"a"}, {"b", "c"}, {"d"}, {"e", "f", "g"}}), Ratio(1, 1));
  EXPECT_EQ(conformity_score({{"a", "b"}, {"b", "c"}}), Ratio(4, 3));
  EXPECT_EQ(conformity_score({{"A", "B"}, {"A", "C"}, {"A", "B"}}), Ratio(2, 1));
}

// ---------------------------------------------------------------------------
// Coverage

TEST(Quadrant, SignsOfBothDeltas) {
  EXPECT_EQ(quadrant_of(3, 2), Quadrant::UU);
  EXPECT_EQ(quadrant_of(1, -1), Quadrant::UD);
  EXPECT_EQ(quadrant_of(-1, 4), Quadrant::DU);
  EXPECT_EQ(quadrant_of(-2, -2), Quadrant::DD);
  EXPECT_EQ(quadrant_of(0, 5), Quadrant::FLAT_E);
  EXPECT_EQ(quadrant_of(5, 0), Quadrant::FLAT_T);
  EXPECT_EQ(quadrant_of(0, 0), Quadrant::FLAT);
  EXPECT_EQ(to_string(Quadrant::UD), "UD");
}

TEST(Coverage, DeltaBetweenTwoDocuments) {
  const auto plain = rdf::parse_ttl(read_data("slti/slti_plain.ttl"));
  const auto with_bfs = rdf::parse_ttl(read_data("slti/slti_with_bfs.ttl"));
  const auto d = coverage_delta(plain, with_bfs);
  EXPECT_EQ(d.base.entity_count_with_literals, 11u);
  EXPECT_EQ(d.other.entity_count_with_literals, 13u);
  EXPECT_EQ(d.other.entity_count_named, 8u);
  EXPECT_EQ(d.d_entities, 2);
  EXPECT_EQ(d.d_entities_named, 2);
  EXPECT_EQ(d.d_triples, 0);
  EXPECT_EQ(d.quadrant, Quadrant::FLAT_T);
  EXPECT_EQ(coverage_delta(plain, plain).quadrant, Quadrant::FLAT);
  const json j = to_json(d);
  EXPECT_EQ(j["quadrant"], "FLAT_T");
  EXPECT_EQ(j["d_triples"], 0);
}

// ---------------------------------------------------------------------------
// Root subject entities and carry-over

TEST(Rse, MatchesObjectFieldScan) {
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    const auto triples = testing::random_triples(rng, 10);
    const auto doc = rdf::parse_ttl(testing::render_turtle(triples));
    std::set<std::string> subjects;
    std::set<std::string> objects;
    for (const auto& t : triples) {
      subjects.insert(t.s.substr(3));
      if (t.o.rfind("ex:", 0) == 0) objects.insert(t.o.substr(3));
    }
    std::set<std::string> expected;
    for (const auto& s : subjects) {
      if (!objects.contains(s)) expected.insert(s);
    }
    std::set<std::string> actual;
    for (const auto& e : rdf::classify(doc).rse) actual.insert(e.local);
    ASSERT_EQ(actual, expected) << testing::render_turtle(triples);

    if (expected.empty()) {
      ASSERT_EQ(code_of([&] { rse_carryover(doc, doc); }), ErrorCode::NoBaseRse);
    } else {
      ASSERT_EQ(rse_carryover(doc, doc), Ratio(1, 1));
    }
  }
}

TEST(Rse, CarryoverCountsRetainedBaseEntities) {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto a = rdf::parse_ttl(testing::render_turtle(testing::random_triples(rng, 8)));
    const auto b = rdf::parse_ttl(testing::render_turtle(testing::random_triples(rng, 8)));
    const auto rse_a = rdf::classify(a).rse;
    const auto rse_b = rdf::classify(b).rse;
    if (rse_a.empty()) continue;
    long kept = 0;
    for (const auto& e : rse_a) kept += rse_b.contains(e);
    ASSERT_EQ(rse_carryover(a, b), Ratio(kept, static_cast<long>(rse_a.size())));
  }
}

TEST(Rse, NormalizedMatching) {
  const auto a = rdf::parse_ttl("@prefix rv: <http://example.org/riscv#> .\nrv:Base_ISA rv:p \"x\" .\nrv:Other rv:p \"y\" .\n");
  const auto b = rdf::parse_ttl("@prefix rv: <http://example.org/riscv#> .\nrv:baseisa rv:p \"x\" .\n");
  EXPECT_EQ(rse_carryover(a, b), Ratio(1, 2));
  const auto exact = [](const rdf::EntityRef& e) { return e.iri(); };
  EXPECT_EQ(rse_carryover(a, b, exact), Ratio(0, 1));
  const auto other_ns = rdf::parse_ttl("@prefix ex: <http://example.org/ex#> .\nex:Base_ISA ex:p \"x\" .\n");
  EXPECT_EQ(rse_carryover(a, other_ns), Ratio(0, 1));
}

TEST(Rse, ZeroCarryoverCases) {
  for (const char* name : {"base_isas", "ialign", "invisible_trap", "rv32e"}) {
    SCOPED_TRACE(name);
    const auto base = rdf::parse_ttl(read_data(std::string("carryover/") + name + "_base.ttl"));
    const auto other = rdf::parse_ttl(read_data(std::string("carryover/") + name + "_bf.ttl"));
    EXPECT_EQ(rse_carryover(base, other), Ratio(0, 1));
  }
  const auto rv32e = rdf::classify(rdf::parse_ttl(read_data("carryover/rv32e_base.ttl"))).rse;
  const auto chapter = rdf::classify(rdf::parse_ttl(read_data("carryover/rv32e_bf.ttl"))).rse;
  ASSERT_EQ(rv32e.size(), 1u);
  EXPECT_EQ(rv32e.begin()->local, "RV32E");
  ASSERT_EQ(chapter.size(), 1u);
  EXPECT_EQ(chapter.begin()->local, "Chapter4");

  // IALIGN stays a subject entity but becomes the object of "relaxes".
  const auto ialign_bf = rdf::classify(rdf::parse_ttl(read_data("carryover/ialign_bf.ttl")));
  EXPECT_TRUE(ialign_bf.subject_entities.contains(rdf::entity("http://example.org/riscv#IALIGN")));
  EXPECT_FALSE(ialign_bf.rse.contains(rdf::entity("http://example.org/riscv#IALIGN")));
}

// ---------------------------------------------------------------------------
// Names, suffixes and concept groups

TEST(Names, Tokens) {
  using V = std::vector<std::string>;
  EXPECT_EQ(name_tokens("cacheControlInstruction"), (V{"cache", "Control", "Instruction"}));
  EXPECT_EQ(name_tokens("Variable_Length_Instructions"), (V{"Variable", "Length", "Instructions"}));
  EXPECT_EQ(name_tokens("CSRInstructions"), (V{"CSR", "Instructions"}));
  EXPECT_EQ(name_tokens("RISC-V_ISA"), (V{"RISC", "V", "ISA"}));
  EXPECT_EQ(name_tokens("32IntegerRegisters"), (V{"32", "Integer", "Registers"}));
  EXPECT_EQ(name_tokens("usesRegisterX5AsAlternateLinkRegister"),
            (V{"uses", "Register", "X", "5", "As", "Alternate", "Link", "Register"}));
  EXPECT_EQ(name_tokens("RV32I"), (V{"RV", "32", "I"}));
}

TEST(Names, Suffix) {
  EXPECT_EQ(suffix_of("StoreInstruction"), "Instruction");
  EXPECT_EQ(suffix_of("whyNotSingleISA"), "ISA");
  EXPECT_EQ(suffix_of("RV32I_ISA"), "ISA");
  EXPECT_EQ(suffix_of("RV32I"), "RV");
  EXPECT_EQ(suffix_of("x0"), "x");
  EXPECT_EQ(suffix_of("5-bit_Immediate"), "Immediate");
  EXPECT_EQ(suffix_of("42"), "42");
  EXPECT_EQ(suffix_of("CSRInstruction"), "Instruction");
  EXPECT_EQ(suffix_of("32_bit_instruction"), "instruction");
  EXPECT_EQ(suffix_of("Hart"), "Hart");
}

struct TableRow {
  std::string concept_label;
  std::set<std::string> entities;
  std::set<std::string> elsewhere;
};

std::vector<std::pair<std::string, std::vector<TableRow>>> entity_tables() {
  const json j = json::parse(read_data("concepts/entity_tables.json"));
  std::vector<std::pair<std::string, std::vector<TableRow>>> out;
  for (const auto& t : j["tables"]) {
    std::vector<TableRow> rows;
    for (const auto& r : t["rows"]) {
      TableRow row;
      row.concept_label = r["concept"].get<std::string>();
      for (const auto& e : r["entities"]) row.entities.insert(e.get<std::string>());
      for (const auto& e : r.value("listed_under_other_suffix", json::array())) row.elsewhere.insert(e.get<std::string>());
      rows.push_back(row);
    }
    out.emplace_back(t["name"].get<std::string>(), rows);
  }
  return out;
}

const ConceptGroup* group_containing(const std::vector<ConceptGroup>& groups, const std::string& name) {
  for (const auto& g : groups) {
    if (g.member_names().contains(name)) return &g;
  }
  return nullptr;
}

TEST(ConceptGroups, TranscribedTablesRegroupExactly) {
  const auto tables = entity_tables();
  ASSERT_EQ(tables.size(), 4u);
  for (const auto& [table, rows] : tables) {
    SCOPED_TRACE(table);
    // One pseudo-paragraph per entity keeps the grouping independent of paragraph layout.
    std::vector<ItemEntities> items;
    std::set<std::string> misplaced;
    for (const auto& row : rows) {
      for (const auto& e : row.entities) items.push_back({table + "-" + e, {e}});
      misplaced.insert(row.elsewhere.begin(), row.elsewhere.end());
    }
    const auto groups = group_concepts(items);
    for (const auto& row : rows) {
      SCOPED_TRACE(row.concept_label);
      std::set<std::string> expected;
      for (const auto& e : row.entities) {
        if (!row.elsewhere.contains(e)) expected.insert(e);
      }
      const ConceptGroup* g = group_containing(groups, *expected.begin());
      ASSERT_NE(g, nullptr);
      for (const auto& m : misplaced) {
        if (stem(suffix_of(m)) == g->stem) expected.insert(m);
      }
      EXPECT_EQ(g->member_names(), expected);
    }
  }
}

TEST(ConceptGroups, NamedCases) {
  const auto tables = entity_tables();
  const auto& ch1_bfphi = tables[0].second;
  ASSERT_EQ(ch1_bfphi[0].concept_label, "Instruction");
  ASSERT_EQ(ch1_bfphi[0].entities.size(), 16u);
  std::vector<ItemEntities> items{{"ch1", {ch1_bfphi[0].entities.begin(), ch1_bfphi[0].entities.end()}}};
  auto groups = group_concepts(items);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].stem, "instruct");
  EXPECT_EQ(groups[0].member_names().size(), 16u);

  groups = group_concepts({{"p1", {"Hart", "HostHart", "GuestHart"}}, {"p2", {"EachHart", "AllHarts"}}});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].label, "Hart");
  EXPECT_EQ(groups[0].occurrence_count(), 2u);

  groups = group_concepts({{"p1", {"instructionEncodings"}}, {"p2", {"howItEncodes"}}});
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].stem, stem("encodings"));
}

TEST(ConceptGroups, LabelsOrderAndParagraphs) {
  const auto groups = group_concepts({
      {"p3", {"LoadInstruction", "Trap"}},
      {"p1", {"StoreInstruction", "FatalTrap", "Traps"}},
      {"p2", {"JumpInstructions", "Register"}},
      {"p1b", {"BranchInstructions"}},
  });
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].stem, "instruct");
  EXPECT_EQ(groups[1].stem, "regist");
  EXPECT_EQ(groups[2].stem, "trap");
  // Instruction and Instructions tie 2-2; the lexicographically smaller form wins.
  EXPECT_EQ(groups[0].label, "Instruction");
  EXPECT_EQ(groups[0].paragraph_ids, (std::vector<std::string>{"p3", "p1", "p2", "p1b"}));
  EXPECT_EQ(groups[2].label, "Trap");
  EXPECT_EQ(groups[2].paragraph_ids, (std::vector<std::string>{"p3", "p1"}));

  const auto g = bipartite(groups, 2, {"p1", "p1b", "p2", "p3"});
  ASSERT_EQ(g.concepts.size(), 2u);
  EXPECT_EQ(g.paragraphs, (std::vector<std::string>{"p1", "p1b", "p2", "p3"}));
  EXPECT_EQ(g.edges.size(), 6u);
  EXPECT_EQ(bipartite(groups, 3).concepts.size(), 1u);
  EXPECT_EQ(bipartite(groups, 1).concepts.size(), 3u);

  const json j = to_json(g);
  EXPECT_EQ(j["concepts"][0]["id"], "c:instruct");
  EXPECT_EQ(j["paragraphs"][0]["id"], "p:p1");
  EXPECT_EQ(j["min_paragraphs"], 2);

  const auto top = top_concepts(groups, 2);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].label, "Instruction");
  EXPECT_EQ(top[0].count, 4u);
  EXPECT_EQ(top[1].label, "Trap");
  const json row = to_json(top[0]);
  EXPECT_TRUE(row["count"].is_number_unsigned());
  EXPECT_EQ(row["members"].size(), 4u);
}

TEST(ConceptGroups, PartitionAndEdgeCount) {
  std::mt19937 rng(17);
  const std::vector<std::string> heads{"Load", "Store", "Base", "Host", "x", "RV32"};
  const std::vector<std::string> tails{"Instruction", "Instructions", "Hart", "Harts", "ISA", "Register", "encodes"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ItemEntities> items;
    std::multiset<std::pair<std::string, std::string>> pairs;
    const int n_items = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int i = 0; i < n_items; ++i) {
      ItemEntities it{"p" + std::to_string(i), {}};
      std::set<std::string> seen;
      const int n = std::uniform_int_distribution<int>(0, 5)(rng);
      for (int k = 0; k < n; ++k) {
        const std::string name = heads[rng() % heads.size()] + tails[rng() % tails.size()];
        if (seen.insert(name).second) {
          it.names.push_back(name);
          pairs.emplace(name, it.item_id);
        }
      }
      items.push_back(it);
    }
    const auto groups = group_concepts(items);
    std::multiset<std::pair<std::string, std::string>> grouped;
    for (const auto& g : groups) {
      for (const auto& m : g.members) {
        grouped.insert(m);
        ASSERT_EQ(stem(suffix_of(m.first)), g.stem);
      }
    }
    ASSERT_EQ(grouped, pairs);
    for (std::size_t min = 0; min <= 3; ++min) {
      const auto g = bipartite(groups, min);
      std::size_t expected = 0;
      for (const auto& c : groups) {
        if (c.occurrence_count() >= min) expected += c.paragraph_ids.size();
      }
      ASSERT_EQ(g.edges.size(), expected);
    }
  }
}

TEST(ConceptGroups, BipartiteOnTwoThreeOneParagraphs) {
  const auto groups = group_concepts({{"p1", {"LoadInstruction", "Trap", "Hart"}},
                                      {"p2", {"StoreInstruction", "FatalTrap"}},
                                      {"p3", {"Trap"}}});
  const auto g = bipartite(groups, 2);
  EXPECT_EQ(g.concepts.size(), 2u);
  EXPECT_EQ(g.edges.size(), 5u);
  EXPECT_TRUE(bipartite(group_concepts({{"p1", {"A"}}, {"p2", {"B"}}}), 2).concepts.empty());
  EXPECT_TRUE(top_concepts(groups, 0).empty());
}

TEST(GraphExport, DotGraphMlAndCsv) {
  const auto groups = group_concepts({{"p1", {"Hart"}}, {"say \"p2\"", {"GuestHart"}}, {"A&B", {"Hart"}}});
  const auto g = bipartite(groups, 1);
  const auto dot = to_dot(g);
  EXPECT_EQ(dot.rfind("graph concepts {\n", 0), 0u);
  EXPECT_NE(dot.find("\"c:hart\" -- \"p:p1\";"), std::string::npos);
  EXPECT_NE(dot.find("\"p:say \\\"p2\\\"\""), std::string::npos);
  const auto xml = to_graphml(g);
  EXPECT_NE(xml.find("<edge id=\"e0\" source=\"c:"), std::string::npos);
  EXPECT_NE(xml.find("A&amp;B"), std::string::npos);
  EXPECT_EQ(graph_format_from_string("GraphML"), GraphFormat::GraphMl);
  EXPECT_EQ(content_type(GraphFormat::Dot), "text/vnd.graphviz");
  EXPECT_EQ(code_of([] { graph_format_from_string("png"); }), ErrorCode::InvalidArgument);

  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
  const auto csv = to_csv(top_concepts(groups, 5));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,stem,count,members");
}

}  // namespace
}  // namespace kgwb::analytics
