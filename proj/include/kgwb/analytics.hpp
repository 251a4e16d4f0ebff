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

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgwb/checker.hpp"
#include "kgwb/common.hpp"
#include "kgwb/rdf.hpp"
#include "kgwb/stemmer.hpp"

namespace kgwb::analytics {

/// Sum of set sizes over the size of their union. Throws EmptyUnion.
Ratio conformity_score(const std::vector<std::set<std::string>>& subject_entity_sets);

/// Subject-entity IRIs of every syntactically valid run in the report.
std::vector<std::set<std::string>> subject_entity_sets(const ConsistencyReport& report);

enum class Quadrant { UU, UD, DU, DD, FLAT_E, FLAT_T, FLAT };

std::string_view to_string(Quadrant q);

/// First letter follows the entity delta, second the triple delta.
Quadrant quadrant_of(long d_entities, long d_triples);

struct CoverageDelta {
  rdf::FactCounts base;
  rdf::FactCounts other;
  long d_entities = 0;        // over entity_count_with_literals
  long d_entities_named = 0;  // over entity_count_named
  long d_triples = 0;
  Quadrant quadrant = Quadrant::FLAT;
};

json to_json(const CoverageDelta& d);

CoverageDelta coverage_delta(const rdf::RdfDocument& base, const rdf::RdfDocument& other);

using EntityMatcher = std::function<std::string(const rdf::EntityRef&)>;

/// Namespace IRI plus the local name lowercased with `_` and `-` removed.
std::string normalized_entity_key(const rdf::EntityRef& e);

/// Share of the base RSEs found among the other document's RSEs. Throws NoBaseRse.
Ratio rse_carryover(const rdf::RdfDocument& base, const rdf::RdfDocument& other,
                    const EntityMatcher& matcher = normalized_entity_key);
Ratio rse_carryover(const std::set<rdf::EntityRef>& base_rse, const std::set<rdf::EntityRef>& other_rse,
                    const EntityMatcher& matcher = normalized_entity_key);

/// Camel/snake tokenization of an entity local name.
std::vector<std::string> name_tokens(std::string_view name);

/// Last alphabetic token of two or more letters, else the last alphabetic token, else the name.
std::string suffix_of(std::string_view entity_name);

inline std::string stem(std::string_view word) { return porter_stem(word); }

struct ItemEntities {
  std::string item_id;
  std::vector<std::string> names;  // subject entity local names
};

struct ConceptGroup {
  std::string stem;
  std::string label;
  std::set<std::pair<std::string, std::string>> members;  // (entity name, item id)
  std::vector<std::string> paragraph_ids;                 // distinct, in input order

  std::size_t occurrence_count() const noexcept { return paragraph_ids.size(); }
  std::set<std::string> member_names() const;
};

/// Groups by stem(suffix_of(name)). Output is ordered by stem.
std::vector<ConceptGroup> group_concepts(const std::vector<ItemEntities>& items);

struct BipartiteGraph {
  struct Concept {
    std::string stem;
    std::string label;
    std::size_t occurrence_count = 0;
  };
  std::vector<Concept> concepts;
  std::vector<std::string> paragraphs;
  std::vector<std::pair<std::string, std::string>> edges;  // (concept stem, paragraph id)
  std::size_t min_paragraphs = 2;
};

json to_json(const BipartiteGraph& g);

/// Keeps concepts occurring in at least `min_paragraphs` paragraphs. Paragraph nodes
/// follow `item_order` when given, otherwise their first appearance.
BipartiteGraph bipartite(const std::vector<ConceptGroup>& groups, std::size_t min_paragraphs = 2,
                         const std::vector<std::string>& item_order = {});

struct ConceptRow {
  std::string label;
  std::string stem;
  std::size_t count = 0;
  std::vector<std::string> members;
};

/// Sorted by occurrence count descending, then label ascending.
std::vector<ConceptRow> top_concepts(const std::vector<ConceptGroup>& groups, std::size_t k);

json to_json(const ConceptRow& row);

}  // namespace kgwb::analytics
