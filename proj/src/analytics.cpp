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

#include "kgwb/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace kgwb::analytics {

Ratio conformity_score(const std::vector<std::set<std::string>>& sets) {
  if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "conformity needs at least one run");
  std::set<std::string> all;
  std::int64_t total = 0;
  for (const auto& s : sets) {
    total += static_cast<std::int64_t>(s.size());
    all.insert(s.begin(), s.end());
  }
  if (all.empty()) throw Error(ErrorCode::EmptyUnion, "no run has a subject entity");
  return Ratio(total, static_cast<std::int64_t>(all.size()));
}

std::vector<std::set<std::string>> subject_entity_sets(const ConsistencyReport& report) {
  std::vector<std::set<std::string>> out;
  for (const auto& run : report.runs) {
    if (!run.ok) continue;
    std::set<std::string> names;
    for (const auto& e : rdf::classify(rdf::parse_ttl(run.ttl)).subject_entities) names.insert(e.iri());
    out.push_back(std::move(names));
  }
  return out;
}

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::UU: return "UU";
    case Quadrant::UD: return "UD";
    case Quadrant::DU: return "DU";
    case Quadrant::DD: return "DD";
    case Quadrant::FLAT_E: return "FLAT_E";
    case Quadrant::FLAT_T: return "FLAT_T";
    case Quadrant::FLAT: return "FLAT";
  }
  return "FLAT";
}

Quadrant quadrant_of(long d_entities, long d_triples) {
  if (d_entities == 0 && d_triples == 0) return Quadrant::FLAT;
  if (d_entities == 0) return Quadrant::FLAT_E;
  if (d_triples == 0) return Quadrant::FLAT_T;
  if (d_entities > 0) return d_triples > 0 ? Quadrant::UU : Quadrant::UD;
  return d_triples > 0 ? Quadrant::DU : Quadrant::DD;
}

namespace {

json counts_json(const rdf::FactCounts& c) {
  return json{{"entities_named", c.entity_count_named},
              {"entities_with_literals", c.entity_count_with_literals},
              {"triples", c.triple_count}};
}

long diff(std::size_t a, std::size_t b) { return static_cast<long>(a) - static_cast<long>(b); }

}  // namespace

json to_json(const CoverageDelta& d) {
  return json{{"base", counts_json(d.base)},
              {"other", counts_json(d.other)},
              {"d_entities", d.d_entities},
              {"d_entities_named", d.d_entities_named},
              {"d_triples", d.d_triples},
              {"quadrant", to_string(d.quadrant)}};
}

CoverageDelta coverage_delta(const rdf::RdfDocument& base, const rdf::RdfDocument& other) {
  CoverageDelta d;
  d.base = rdf::fact_counts(base);
  d.other = rdf::fact_counts(other);
  d.d_entities = diff(d.other.entity_count_with_literals, d.base.entity_count_with_literals);
  d.d_entities_named = diff(d.other.entity_count_named, d.base.entity_count_named);
  d.d_triples = diff(d.other.triple_count, d.base.triple_count);
  d.quadrant = quadrant_of(d.d_entities, d.d_triples);
  return d;
}

std::string normalized_entity_key(const rdf::EntityRef& e) {
  std::string local;
  for (char c : e.local) {
    if (c != '_' && c != '-') local.push_back(c);
  }
  return e.ns + to_lower(local);
}

Ratio rse_carryover(const rdf::RdfDocument& base, const rdf::RdfDocument& other, const EntityMatcher& matcher) {
  return rse_carryover(rdf::classify(base).rse, rdf::classify(other).rse, matcher);
}

Ratio rse_carryover(const std::set<rdf::EntityRef>& base_rse, const std::set<rdf::EntityRef>& other_rse,
                    const EntityMatcher& matcher) {
  if (base_rse.empty()) throw Error(ErrorCode::NoBaseRse, "the base RDF has no root subject entity");
  std::set<std::string> other_keys;
  for (const auto& e : other_rse) other_keys.insert(matcher(e));
  std::int64_t carried = 0;
  for (const auto& e : base_rse) carried += other_keys.count(matcher(e)) > 0 ? 1 : 0;
  return Ratio(carried, static_cast<std::int64_t>(base_rse.size()));
}

std::vector<std::string> name_tokens(std::string_view name) {
  enum class Cls { Upper, Lower, Digit, Other };
  auto cls = [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isupper(c)) return Cls::Upper;
    if (std::isdigit(c)) return Cls::Digit;
    if (std::islower(c) || c >= 0x80) return Cls::Lower;
    return Cls::Other;
  };
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const Cls c = cls(name[i]);
    if (c == Cls::Other) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const Cls p = cls(cur.back());
      const bool digit_edge = (p == Cls::Digit) != (c == Cls::Digit);
      const bool camel = p == Cls::Lower && c == Cls::Upper;
      const bool acronym_end =
          p == Cls::Upper && c == Cls::Upper && i + 1 < name.size() && cls(name[i + 1]) == Cls::Lower;
      if (digit_edge || camel || acronym_end) flush();
    }
    cur.push_back(name[i]);
  }
  flush();
  return tokens;
}

std::string suffix_of(std::string_view entity_name) {
  const auto tokens = name_tokens(entity_name);
  const std::string* last_alpha = nullptr;
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (std::isdigit(static_cast<unsigned char>(it->front()))) continue;
    if (it->size() >= 2) return *it;
    if (last_alpha == nullptr) last_alpha = &*it;
  }
  return last_alpha != nullptr ? *last_alpha : std::string(entity_name);
}

std::set<std::string> ConceptGroup::member_names() const {
  std::set<std::string> names;
  for (const auto& [name, item] : members) names.insert(name);
  return names;
}

std::vector<ConceptGroup> group_concepts(const std::vector<ItemEntities>& items) {
  std::map<std::string, ConceptGroup> by_stem;
  std::map<std::string, std::map<std::string, int>> surfaces;
  for (const auto& item : items) {
    for (const auto& name : item.names) {
      const std::string suffix = suffix_of(name);
      const std::string key = stem(suffix);
      auto& g = by_stem[key];
      g.stem = key;
      if (!g.members.emplace(name, item.item_id).second) continue;
      ++surfaces[key][suffix];
      if (std::find(g.paragraph_ids.begin(), g.paragraph_ids.end(), item.item_id) == g.paragraph_ids.end()) {
        g.paragraph_ids.push_back(item.item_id);
      }
    }
  }
  std::vector<ConceptGroup> out;
  for (auto& [key, g] : by_stem) {
    int best = -1;
    for (const auto& [surface, n] : surfaces[key]) {
      if (n > best) {  // map order makes the first of equal counts the lexicographically smallest
        best = n;
        g.label = surface;
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

json to_json(const BipartiteGraph& g) {
  json concepts = json::array();
  for (const auto& c : g.concepts) {
    concepts.push_back(json{{"id", "c:" + c.stem}, {"stem", c.stem}, {"label", c.label}, {"count", c.occurrence_count}});
  }
  json paragraphs = json::array();
  for (const auto& p : g.paragraphs) paragraphs.push_back(json{{"id", "p:" + p}, {"item_id", p}});
  json edges = json::array();
  for (const auto& [c, p] : g.edges) edges.push_back(json{{"source", "c:" + c}, {"target", "p:" + p}});
  return json{{"min_paragraphs", g.min_paragraphs},
              {"concept_count", g.concepts.size()},
              {"paragraph_count", g.paragraphs.size()},
              {"edge_count", g.edges.size()},
              {"concepts", concepts},
              {"paragraphs", paragraphs},
              {"edges", edges}};
}

BipartiteGraph bipartite(const std::vector<ConceptGroup>& groups, std::size_t min_paragraphs,
                         const std::vector<std::string>& item_order) {
  BipartiteGraph g;
  g.min_paragraphs = min_paragraphs;
  std::vector<std::string> seen;
  for (const auto& group : groups) {
    if (group.occurrence_count() < min_paragraphs || group.occurrence_count() == 0) continue;
    g.concepts.push_back({group.stem, group.label, group.occurrence_count()});
    for (const auto& p : group.paragraph_ids) {
      g.edges.emplace_back(group.stem, p);
      if (std::find(seen.begin(), seen.end(), p) == seen.end()) seen.push_back(p);
    }
  }
  if (item_order.empty()) {
    g.paragraphs = std::move(seen);
  } else {
    for (const auto& id : item_order) {
      if (std::find(seen.begin(), seen.end(), id) != seen.end()) g.paragraphs.push_back(id);
    }
    for (const auto& id : seen) {
      if (std::find(g.paragraphs.begin(), g.paragraphs.end(), id) == g.paragraphs.end()) g.paragraphs.push_back(id);
    }
  }
  return g;
}

std::vector<ConceptRow> top_concepts(const std::vector<ConceptGroup>& groups, std::size_t k) {
  std::vector<ConceptRow> rows;
  for (const auto& g : groups) {
    const auto names = g.member_names();
    rows.push_back(ConceptRow{g.label, g.stem, g.occurrence_count(), {names.begin(), names.end()}});
  }
  std::sort(rows.begin(), rows.end(), [](const ConceptRow& a, const ConceptRow& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.label != b.label) return a.label < b.label;
    return a.stem < b.stem;
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

json to_json(const ConceptRow& row) {
  return json{{"label", row.label}, {"stem", row.stem}, {"count", row.count}, {"members", row.members}};
}

}  // namespace kgwb::analytics
