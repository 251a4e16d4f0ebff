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
#include <string>
#include <string_view>
#include <vector>

#include "kgwb/common.hpp"

namespace kgwb {

enum class ItemStatus { Active, Superseded };

/// One paragraph of the source document, or a split child of one.
struct TextItem {
  std::string id;
  std::string chapter;
  int seq = 0;
  std::string text;
  std::optional<std::string> parent_id;
  std::optional<int> split_index;
  ItemStatus status = ItemStatus::Active;
  // Set on a superseded parent: whether its split was a pure partition.
  std::optional<bool> partition;

  bool active() const noexcept { return status == ItemStatus::Active; }
  friend bool operator==(const TextItem&, const TextItem&) = default;
};

void to_json(json& j, const TextItem& item);
void from_json(const json& j, TextItem& item);

/// Splits a document into paragraphs separated by one or more blank lines.
/// Items are numbered 1..n in document order with ids "<chapter>-p<seq>".
/// Throws EmptyDocument when there is no non-blank content.
std::vector<TextItem> ingest(std::string_view document, std::string_view chapter);

/// Ordered, chapter-partitioned collection of text items.
///
/// Superseded parents stay in place and their children follow them, so reading
/// the active items in order always covers the corpus exactly once. After a
/// split the active items of the chapter are renumbered so seq stays dense.
class Corpus {
 public:
  /// Adds a freshly ingested chapter. Throws Duplicate if the chapter exists.
  void add_chapter(std::vector<TextItem> items);

  std::vector<TextItem> split_item(const std::string& item_id, const std::vector<std::string>& parts,
                                   bool partition);

  const TextItem& get(const std::string& item_id) const;
  const TextItem* find(const std::string& item_id) const;

  std::vector<std::string> chapters() const;
  /// Every item of a chapter (superseded included) in corpus order.
  const std::vector<TextItem>& chapter_items(const std::string& chapter) const;
  /// Active items across all chapters, chapters in insertion order.
  std::vector<TextItem> active_items() const;
  std::vector<TextItem> all_items() const;

  json chapter_json(const std::string& chapter) const;
  void load_chapter_json(const json& j);

 private:
  void renumber(std::vector<TextItem>& items);

  std::vector<std::string> chapter_order_;
  std::map<std::string, std::vector<TextItem>> chapters_;
};

}  // namespace kgwb
