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

#include "kgwb/kg_merge.hpp"

#include <algorithm>
#include <cctype>

namespace kgwb {
namespace {

std::string blank_scope(const std::string& item_id) {
  std::string out;
  for (char c : item_id) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

void MergedGraph::add(const rdf::Triple& t, const std::string& item_id) {
  const std::string line = rdf::to_nt(t);
  triples_.emplace(line, t);
  provenance_[line].insert(item_id);
  if (!t.subject.blank()) entity_index_[t.subject.iri()].insert(item_id);
  if (const rdf::EntityRef* o = t.object_entity(); o != nullptr && !o->blank()) entity_index_[o->iri()].insert(item_id);
}

void MergedGraph::merge(const rdf::RdfDocument& doc, const std::string& item_id) {
  if (item_id.empty()) throw Error(ErrorCode::InvalidArgument, "merge needs an item id");
  const std::string scope = blank_scope(item_id);
  auto scoped = [&scope](rdf::EntityRef e) {
    if (e.blank()) e.local = scope + "_" + e.local;
    return e;
  };
  for (rdf::Triple t : rdf::canonical_triples(doc)) {
    t.subject = scoped(t.subject);
    if (const rdf::EntityRef* o = t.object_entity()) t.object = scoped(*o);
    add(t, item_id);
  }
}

MergedGraph merge(MergedGraph g, const rdf::RdfDocument& doc, const std::string& item_id) {
  g.merge(doc, item_id);
  return g;
}

std::set<std::string> MergedGraph::items() const {
  std::set<std::string> out;
  for (const auto& [line, ids] : provenance_) out.insert(ids.begin(), ids.end());
  return out;
}

std::vector<SharedEntity> MergedGraph::shared_entities(std::size_t min_items) const {
  std::vector<SharedEntity> out;
  for (const auto& [iri, ids] : entity_index_) {
    if (ids.size() >= min_items) out.push_back({iri, ids});
  }
  std::stable_sort(out.begin(), out.end(), [](const SharedEntity& a, const SharedEntity& b) {
    return a.item_ids.size() > b.item_ids.size();
  });
  return out;
}

std::string MergedGraph::to_ntriples() const {
  std::string out;
  for (const auto& [line, t] : triples_) out += line + "\n";
  return out;
}

std::string MergedGraph::to_turtle(const std::map<std::string, std::string>& prefixes) const {
  std::vector<rdf::Triple> all;
  all.reserve(triples_.size());
  for (const auto& [line, t] : triples_) all.push_back(t);
  return rdf::to_turtle(all, prefixes);
}

json MergedGraph::provenance_json() const {
  json triples = json::array();
  for (const auto& [line, ids] : provenance_) triples.push_back(json{{"triple", line}, {"items", ids}});
  json entities = json::object();
  for (const auto& [iri, ids] : entity_index_) entities[iri] = ids;
  return json{{"triple_count", triples_.size()}, {"triples", triples}, {"entities", entities}};
}

MergedGraph MergedGraph::from_provenance_json(const json& j) {
  MergedGraph g;
  std::string nt;
  std::vector<std::set<std::string>> owners;
  for (const auto& entry : j.at("triples")) {
    nt += entry.at("triple").get<std::string>() + "\n";
    owners.push_back(entry.at("items").get<std::set<std::string>>());
  }
  if (owners.empty()) return g;
  const auto doc = rdf::parse_ttl(nt);
  const auto triples = doc.triples();
  if (triples.size() != owners.size()) {
    throw Error(ErrorCode::InvalidArgument, "provenance file does not round-trip through N-Triples");
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    for (const auto& id : owners[i]) g.add(triples[i], id);
  }
  return g;
}

}  // namespace kgwb
