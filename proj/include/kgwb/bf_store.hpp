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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgwb/common.hpp"
#include "kgwb/corpus.hpp"

namespace kgwb {

/// A human-authored domain statement injected into prompts.
struct BackgroundFact {
  std::string id;
  std::string text;
  std::vector<std::string> key_terms;
  int created_seq = 0;
  std::optional<std::string> origin_item;

  friend bool operator==(const BackgroundFact&, const BackgroundFact&) = default;
};

void to_json(json& j, const BackgroundFact& bf);
void from_json(const json& j, BackgroundFact& bf);

/// The BF list used for one item. Version 0 means no BFs were ever assigned.
struct BfAssignment {
  std::string item_id;
  std::vector<std::string> bf_ids;
  int version = 0;

  friend bool operator==(const BfAssignment&, const BfAssignment&) = default;
};

void to_json(json& j, const BfAssignment& a);
void from_json(const json& j, BfAssignment& a);

struct BfWarning {
  enum class Kind { TooMany, Superimposed };
  Kind kind;
  std::string bf_id;  // empty for TooMany
  std::string message;
};

void to_json(json& j, const BfWarning& w);

struct Suggestion {
  BackgroundFact bf;
  int matches = 0;
};

/// One BF per line, in the given order. Empty input renders as "".
std::string render_bf_block(std::span<const BackgroundFact> bfs);

/// Counts case-insensitive occurrences of `term` in `text` that start and end on word boundaries.
int count_term(std::string_view text, std::string_view term);

class BfStore {
 public:
  static constexpr std::size_t kDefaultSoftCap = 12;

  explicit BfStore(std::size_t soft_cap = kDefaultSoftCap) : soft_cap_(soft_cap) {}

  /// Throws Duplicate when a BF with the same normalized text exists.
  BackgroundFact add(const std::string& text, std::vector<std::string> key_terms,
                     std::optional<std::string> origin_item = std::nullopt);

  /// BFs with a key term in the item text, most matches first, then by accumulation order.
  std::vector<Suggestion> suggest(const TextItem& item) const;

  /// Replaces the item's BF list and bumps its version. Throws UnknownBf.
  BfAssignment assign(const std::string& item_id, const std::vector<std::string>& bf_ids);

  /// Advisory checks: too many BFs, or a two-term BF whose terms both occur in the paragraph.
  std::vector<BfWarning> warnings(const TextItem& item, const BfAssignment& assignment) const;

  const BackgroundFact& get(const std::string& bf_id) const;
  const std::vector<BackgroundFact>& all() const noexcept { return facts_; }

  /// Latest assignment, or a version-0 empty assignment.
  BfAssignment current(const std::string& item_id) const;
  /// Any historical version; version 0 is always the empty list.
  BfAssignment at_version(const std::string& item_id, int version) const;
  std::vector<BackgroundFact> resolve(const BfAssignment& assignment) const;
  std::string render(const BfAssignment& assignment) const;

  /// Copies the parent's current BF list to each child, as version 1 of the child.
  void inherit(const std::string& parent_id, const std::vector<std::string>& child_ids);

  json facts_json() const;
  /// Loads a BF array ordered by created_seq, as written by facts_json().
  void load_facts_json(const json& j);
  json assignments_json() const;
  void load_assignments_json(const json& j);

  std::size_t soft_cap() const noexcept { return soft_cap_; }

 private:
  std::size_t soft_cap_;
  std::vector<BackgroundFact> facts_;
  std::map<std::string, std::vector<BfAssignment>> history_;
};

}  // namespace kgwb
