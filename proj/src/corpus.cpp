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

#include "kgwb/corpus.hpp"

#include <algorithm>

namespace kgwb {

void to_json(json& j, const TextItem& item) {
  j = json{{"id", item.id},
           {"chapter", item.chapter},
           {"seq", item.seq},
           {"text", item.text},
           {"parent_id", item.parent_id ? json(*item.parent_id) : json(nullptr)},
           {"split_index", item.split_index ? json(*item.split_index) : json(nullptr)},
           {"status", item.active() ? "active" : "superseded"}};
  if (item.partition) j["partition"] = *item.partition;
}

void from_json(const json& j, TextItem& item) {
  item.id = j.at("id").get<std::string>();
  item.chapter = j.at("chapter").get<std::string>();
  item.seq = j.at("seq").get<int>();
  item.text = j.at("text").get<std::string>();
  item.parent_id.reset();
  item.split_index.reset();
  item.partition.reset();
  if (j.contains("parent_id") && !j["parent_id"].is_null()) item.parent_id = j["parent_id"].get<std::string>();
  if (j.contains("split_index") && !j["split_index"].is_null()) item.split_index = j["split_index"].get<int>();
  if (j.contains("partition")) item.partition = j["partition"].get<bool>();
  const auto status = j.at("status").get<std::string>();
  if (status == "active") {
    item.status = ItemStatus::Active;
  } else if (status == "superseded") {
    item.status = ItemStatus::Superseded;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown item status '" + status + "'");
  }
}

std::vector<TextItem> ingest(std::string_view document, std::string_view chapter) {
  if (chapter.empty()) throw Error(ErrorCode::InvalidArgument, "chapter label must not be empty");
  std::vector<TextItem> items;
  std::string paragraph;
  auto flush = [&] {
    std::string text = trim(paragraph);
    paragraph.clear();
    if (text.empty()) return;
    TextItem item;
    item.chapter = std::string(chapter);
    item.seq = static_cast<int>(items.size()) + 1;
    item.id = item.chapter + "-p" + std::to_string(item.seq);
    item.text = std::move(text);
    items.push_back(std::move(item));
  };
  for (const auto& line : split_lines(document)) {
    if (trim(line).empty()) {
      flush();
    } else {
      if (!paragraph.empty()) paragraph.push_back('\n');
      paragraph += line;
    }
  }
  flush();
  if (items.empty()) throw Error(ErrorCode::EmptyDocument, "document has no non-blank content");
  return items;
}

void Corpus::add_chapter(std::vector<TextItem> items) {
  if (items.empty()) throw Error(ErrorCode::EmptyDocument, "no items to add");
  const std::string chapter = items.front().chapter;
  for (const auto& item : items) {
    if (item.chapter != chapter) throw Error(ErrorCode::InvalidArgument, "items span several chapters");
    if (find(item.id) != nullptr) throw Error(ErrorCode::Duplicate, "item '" + item.id + "' already exists");
  }
  if (chapters_.contains(chapter)) throw Error(ErrorCode::Duplicate, "chapter '" + chapter + "' already ingested");
  chapter_order_.push_back(chapter);
  chapters_[chapter] = std::move(items);
}

std::vector<TextItem> Corpus::split_item(const std::string& item_id, const std::vector<std::string>& parts,
                                         bool partition) {
  const TextItem* found = find(item_id);
  if (found == nullptr) throw Error(ErrorCode::NotFound, "item '" + item_id + "'");
  if (!found->active()) throw Error(ErrorCode::AlreadySplit, "item '" + item_id + "' is already superseded");
  if (parts.size() < 2) throw Error(ErrorCode::InvalidArgument, "a split needs at least two parts");
  for (const auto& part : parts) {
    if (trim(part).empty()) throw Error(ErrorCode::InvalidArgument, "split parts must be non-blank");
  }
  if (partition) {
    std::string joined;
    for (const auto& part : parts) joined += part + " ";
    if (normalize_whitespace(joined) != normalize_whitespace(found->text)) {
      throw Error(ErrorCode::PartitionMismatch,
                  "parts of '" + item_id + "' do not concatenate to the parent text");
    }
  }

  auto& items = chapters_.at(found->chapter);
  auto pos = std::find_if(items.begin(), items.end(), [&](const TextItem& i) { return i.id == item_id; });
  pos->status = ItemStatus::Superseded;
  pos->partition = partition;
  const TextItem parent = *pos;

  std::vector<TextItem> children;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    TextItem child;
    child.id = parent.id + "." + std::to_string(k + 1);
    child.chapter = parent.chapter;
    child.text = trim(parts[k]);
    child.parent_id = parent.id;
    child.split_index = static_cast<int>(k) + 1;
    children.push_back(std::move(child));
  }
  const auto offset = pos - items.begin();
  items.insert(items.begin() + offset + 1, children.begin(), children.end());
  renumber(items);

  std::vector<TextItem> out;
  for (const auto& child : children) out.push_back(get(child.id));
  return out;
}

void Corpus::renumber(std::vector<TextItem>& items) {
  int seq = 0;
  for (auto& item : items) {
    if (item.active()) item.seq = ++seq;
  }
}

const TextItem* Corpus::find(const std::string& item_id) const {
  for (const auto& [chapter, items] : chapters_) {
    for (const auto& item : items) {
      if (item.id == item_id) return &item;
    }
  }
  return nullptr;
}

const TextItem& Corpus::get(const std::string& item_id) const {
  const TextItem* item = find(item_id);
  if (item == nullptr) throw Error(ErrorCode::NotFound, "item '" + item_id + "'");
  return *item;
}

std::vector<std::string> Corpus::chapters() const { return chapter_order_; }

const std::vector<TextItem>& Corpus::chapter_items(const std::string& chapter) const {
  auto it = chapters_.find(chapter);
  if (it == chapters_.end()) throw Error(ErrorCode::NotFound, "chapter '" + chapter + "'");
  return it->second;
}

std::vector<TextItem> Corpus::active_items() const {
  std::vector<TextItem> out;
  for (const auto& chapter : chapter_order_) {
    for (const auto& item : chapters_.at(chapter)) {
      if (item.active()) out.push_back(item);
    }
  }
  return out;
}

std::vector<TextItem> Corpus::all_items() const {
  std::vector<TextItem> out;
  for (const auto& chapter : chapter_order_) {
    const auto& items = chapters_.at(chapter);
    out.insert(out.end(), items.begin(), items.end());
  }
  return out;
}

json Corpus::chapter_json(const std::string& chapter) const { return json(chapter_items(chapter)); }

void Corpus::load_chapter_json(const json& j) { add_chapter(j.get<std::vector<TextItem>>()); }

}  // namespace kgwb
