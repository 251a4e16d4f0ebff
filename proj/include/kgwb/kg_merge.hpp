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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgwb/common.hpp"
#include "kgwb/rdf.hpp"

namespace kgwb {

struct SharedEntity {
  std::string iri;
  std::set<std::string> item_ids;
};

/// The cumulative graph: a set of triples keyed by their N-Triples line, each
/// tagged with the items that asserted it.
class MergedGraph {
 public:
  /// Adds the document's triples under `item_id`. Blank nodes are scoped to the item.
  void merge(const rdf::RdfDocument& doc, const std::string& item_id);

  std::size_t size() const noexcept { return triples_.size(); }
  bool contains(const std::string& nt_line) const { return triples_.contains(nt_line); }

  const std::map<std::string, rdf::Triple>& triples() const noexcept { return triples_; }
  const std::map<std::string, std::set<std::string>>& provenance() const noexcept { return provenance_; }
  const std::map<std::string, std::set<std::string>>& entity_index() const noexcept { return entity_index_; }
  std::set<std::string> items() const;

  /// Entities named by at least `min_items` items, most items first, then by IRI.
  std::vector<SharedEntity> shared_entities(std::size_t min_items = 2) const;

  std::string to_ntriples() const;
  std::string to_turtle(const std::map<std::string, std::string>& prefixes = {}) const;
  json provenance_json() const;

  static MergedGraph from_provenance_json(const json& j);

  friend bool operator==(const MergedGraph& a, const MergedGraph& b) {
    return a.provenance_ == b.provenance_ && a.entity_index_ == b.entity_index_;
  }

 private:
  void add(const rdf::Triple& t, const std::string& item_id);

  std::map<std::string, rdf::Triple> triples_;
  std::map<std::string, std::set<std::string>> provenance_;
  std::map<std::string, std::set<std::string>> entity_index_;
};

MergedGraph merge(MergedGraph g, const rdf::RdfDocument& doc, const std::string& item_id);

}  // namespace kgwb
