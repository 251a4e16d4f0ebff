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

#include "kgwb/bf_store.hpp"

namespace kgwb {
namespace {

TextItem item(const std::string& text) {
  TextItem t;
  t.id = "riscv-p1";
  t.text = text;
  return t;
}

TEST(BfStore, AddAssignsSequentialIdsAndRejectsDuplicates) {
  BfStore store;
  const auto a = store.add("  The hart is a hardware thread. ", {"hart", " ", "hardware thread"}, "riscv-p5");
  EXPECT_EQ(a.id, "bf-0001");
  EXPECT_EQ(a.text, "The hart is a hardware thread.");
  EXPECT_EQ(a.key_terms, (std::vector<std::string>{"hart", "hardware thread"}));
  EXPECT_EQ(store.add("rd is the destination register.", {"rd"}).id, "bf-0002");
  try {
    store.add("the HART is a   hardware thread.", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Duplicate);
  }
  EXPECT_THROW(store.add(" \n ", {}), Error);
  EXPECT_EQ(store.all().size(), 2u);
}

TEST(BfStore, CountTermHonoursWordBoundaries) {
  EXPECT_EQ(count_term("A hart runs; harts share memory. Hart!", "hart"), 2);
  EXPECT_EQ(count_term("rd, rd and rds", "rd"), 2);
  EXPECT_EQ(count_term("uses the U-immediate field", "U-immediate"), 1);
  EXPECT_EQ(count_term("x0 is hardwired", "x0"), 1);
  EXPECT_EQ(count_term("anything", " "), 0);
}

TEST(BfStore, SuggestOrdersByMatchesThenAge) {
  BfStore store;
  store.add("One.", {"register"});
  store.add("Two.", {"pc", "AUIPC"});
  store.add("Three.", {"immediate"});
  store.add("Four.", {"AUIPC"});
  const auto s = store.suggest(item("AUIPC adds an immediate to the pc and writes the register. AUIPC is U-type."));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].bf.id, "bf-0002");
  EXPECT_EQ(s[0].matches, 3);
  EXPECT_EQ(s[1].bf.id, "bf-0004");
  EXPECT_EQ(s[2].bf.id, "bf-0001");
  EXPECT_EQ(s[3].bf.id, "bf-0003");
  EXPECT_TRUE(store.suggest(item("nothing relevant")).empty());
}

TEST(BfStore, AssignmentsAreVersioned) {
  BfStore store;
  store.add("One.", {});
  store.add("Two.", {});
  EXPECT_EQ(store.current("p").version, 0);
  EXPECT_EQ(store.assign("p", {"bf-0002"}).version, 1);
  EXPECT_EQ(store.assign("p", {"bf-0001", "bf-0002"}).version, 2);
  EXPECT_EQ(store.at_version("p", 1).bf_ids, (std::vector<std::string>{"bf-0002"}));
  EXPECT_TRUE(store.at_version("p", 0).bf_ids.empty());
  EXPECT_EQ(store.render(store.current("p")), "One.\nTwo.");
  EXPECT_EQ(store.render(store.at_version("p", 0)), "");

  auto code = [&](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code([&] { store.assign("p", {"bf-0009"}); }), ErrorCode::UnknownBf);
  EXPECT_EQ(code([&] { store.assign("p", {"bf-0001", "bf-0001"}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code([&] { store.at_version("p", 3); }), ErrorCode::NotFound);
  EXPECT_EQ(store.current("p").version, 2);
}

TEST(BfStore, WarningsForCapAndSuperimposition) {
  BfStore store(2);
  store.add("The pc holds the address of the current instruction.", {"pc", "AUIPC"});
  store.add("AUIPC writes rd.", {"AUIPC", "rd"});
  store.add("Unrelated.", {"x0"});
  const auto text = item("AUIPC adds the U-immediate to the pc.");
  const auto w = store.warnings(text, store.assign(text.id, {"bf-0001", "bf-0002", "bf-0003"}));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].kind, BfWarning::Kind::TooMany);
  EXPECT_EQ(w[1].kind, BfWarning::Kind::Superimposed);
  EXPECT_EQ(w[1].bf_id, "bf-0001");
  EXPECT_EQ(json(w[1])["kind"], "superimposed");
}

TEST(BfStore, InheritanceCopiesParentList) {
  BfStore store;
  store.add("One.", {});
  store.assign("p", {"bf-0001"});
  store.assign("p.2", {});
  store.inherit("p", {"p.1", "p.2"});
  EXPECT_EQ(store.current("p.1"), (BfAssignment{"p.1", {"bf-0001"}, 1}));
  EXPECT_TRUE(store.current("p.2").bf_ids.empty());
  store.inherit("q", {"q.1"});
  EXPECT_EQ(store.current("q.1").version, 0);
}

TEST(BfStore, JsonRoundTripAndLoadChecks) {
  BfStore store;
  store.add("One.", {"a"}, "riscv-p1");
  store.add("Two.", {});
  store.assign("riscv-p1", {"bf-0002", "bf-0001"});
  BfStore back;
  back.load_facts_json(store.facts_json());
  back.load_assignments_json(store.assignments_json());
  EXPECT_EQ(back.all(), store.all());
  EXPECT_EQ(back.current("riscv-p1"), store.current("riscv-p1"));
  EXPECT_EQ(back.add("Three.", {}).id, "bf-0003");

  BfStore dup;
  EXPECT_THROW(dup.load_facts_json(json::array({json(store.all()[0]), json(store.all()[0])})), Error);
  json swapped = store.facts_json();
  std::swap(swapped[0], swapped[1]);
  EXPECT_THROW(BfStore().load_facts_json(swapped), Error);
}

}  // namespace
}  // namespace kgwb
