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

#include "kgwb/bf_store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace kgwb {

void to_json(json& j, const BackgroundFact& bf) {
  j = json{{"id", bf.id},
           {"text", bf.text},
           {"key_terms", bf.key_terms},
           {"created_seq", bf.created_seq},
           {"origin_item", bf.origin_item ? json(*bf.origin_item) : json(nullptr)}};
}

void from_json(const json& j, BackgroundFact& bf) {
  bf.id = j.at("id").get<std::string>();
  bf.text = j.at("text").get<std::string>();
  bf.key_terms = j.value("key_terms", std::vector<std::string>{});
  bf.created_seq = j.at("created_seq").get<int>();
  bf.origin_item.reset();
  if (j.contains("origin_item") && !j["origin_item"].is_null()) bf.origin_item = j["origin_item"].get<std::string>();
}

void to_json(json& j, const BfAssignment& a) {
  j = json{{"item_id", a.item_id}, {"bf_ids", a.bf_ids}, {"version", a.version}};
}

void from_json(const json& j, BfAssignment& a) {
  a.item_id = j.at("item_id").get<std::string>();
  a.bf_ids = j.at("bf_ids").get<std::vector<std::string>>();
  a.version = j.at("version").get<int>();
}

void to_json(json& j, const BfWarning& w) {
  j = json{{"kind", w.kind == BfWarning::Kind::TooMany ? "too_many" : "superimposed"},
           {"bf_id", w.bf_id},
           {"message", w.message}};
}

std::string render_bf_block(std::span<const BackgroundFact> bfs) {
  std::string out;
  for (const auto& bf : bfs) {
    if (!out.empty()) out.push_back('\n');
    out += trim(bf.text);
  }
  return out;
}

int count_term(std::string_view text, std::string_view term) {
  const std::string hay = to_lower(text);
  const std::string needle = to_lower(trim(term));
  if (needle.empty()) return 0;
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  int count = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !word(hay[pos - 1]) || !word(needle.front());
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == hay.size() || !word(hay[end]) || !word(needle.back());
    if (left_ok && right_ok) ++count;
  }
  return count;
}

BackgroundFact BfStore::add(const std::string& text, std::vector<std::string> key_terms,
                            std::optional<std::string> origin_item) {
  const std::string normalized = to_lower(normalize_whitespace(text));
  if (normalized.empty()) throw Error(ErrorCode::InvalidArgument, "background fact text must not be empty");
  for (const auto& bf : facts_) {
    if (to_lower(normalize_whitespace(bf.text)) == normalized) {
      throw Error(ErrorCode::Duplicate, "background fact already stored as " + bf.id);
    }
  }
  BackgroundFact bf;
  bf.created_seq = facts_.empty() ? 1 : facts_.back().created_seq + 1;
  char id[32];
  std::snprintf(id, sizeof(id), "bf-%04d", bf.created_seq);
  bf.id = id;
  bf.text = trim(text);
  for (auto& term : key_terms) {
    std::string t = trim(term);
    if (!t.empty()) bf.key_terms.push_back(std::move(t));
  }
  bf.origin_item = std::move(origin_item);
  facts_.push_back(bf);
  return bf;
}

std::vector<Suggestion> BfStore::suggest(const TextItem& item) const {
  std::vector<Suggestion> out;
  for (const auto& bf : facts_) {
    int matches = 0;
    for (const auto& term : bf.key_terms) matches += count_term(item.text, term);
    if (matches > 0) out.push_back({bf, matches});
  }
  std::stable_sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.matches != b.matches) return a.matches > b.matches;
    return a.bf.created_seq < b.bf.created_seq;
  });
  return out;
}

BfAssignment BfStore::assign(const std::string& item_id, const std::vector<std::string>& bf_ids) {
  std::set<std::string> seen;
  for (const auto& id : bf_ids) {
    get(id);
    if (!seen.insert(id).second) throw Error(ErrorCode::InvalidArgument, "BF '" + id + "' listed twice");
  }
  BfAssignment a{item_id, bf_ids, current(item_id).version + 1};
  history_[item_id].push_back(a);
  return a;
}

std::vector<BfWarning> BfStore::warnings(const TextItem& item, const BfAssignment& assignment) const {
  std::vector<BfWarning> out;
  if (assignment.bf_ids.size() > soft_cap_) {
    out.push_back({BfWarning::Kind::TooMany, "",
                   std::to_string(assignment.bf_ids.size()) + " BFs exceed the soft cap of " +
                       std::to_string(soft_cap_)});
  }
  for (const auto& id : assignment.bf_ids) {
    const auto& bf = get(id);
    if (bf.key_terms.size() == 2 && count_term(item.text, bf.key_terms[0]) > 0 &&
        count_term(item.text, bf.key_terms[1]) > 0) {
      out.push_back({BfWarning::Kind::Superimposed, id,
                     "'" + bf.key_terms[0] + "' and '" + bf.key_terms[1] +
                         "' are both in the paragraph; the BF may restate a relation it already gives"});
    }
  }
  return out;
}

const BackgroundFact& BfStore::get(const std::string& bf_id) const {
  for (const auto& bf : facts_) {
    if (bf.id == bf_id) return bf;
  }
  throw Error(ErrorCode::UnknownBf, "no background fact '" + bf_id + "'");
}

BfAssignment BfStore::current(const std::string& item_id) const {
  auto it = history_.find(item_id);
  if (it == history_.end() || it->second.empty()) return BfAssignment{item_id, {}, 0};
  return it->second.back();
}

BfAssignment BfStore::at_version(const std::string& item_id, int version) const {
  if (version == 0) return BfAssignment{item_id, {}, 0};
  auto it = history_.find(item_id);
  if (it != history_.end()) {
    for (const auto& a : it->second) {
      if (a.version == version) return a;
    }
  }
  throw Error(ErrorCode::NotFound, "no BF assignment version " + std::to_string(version) + " for '" + item_id + "'");
}

std::vector<BackgroundFact> BfStore::resolve(const BfAssignment& assignment) const {
  std::vector<BackgroundFact> out;
  for (const auto& id : assignment.bf_ids) out.push_back(get(id));
  return out;
}

std::string BfStore::render(const BfAssignment& assignment) const {
  const auto bfs = resolve(assignment);
  return render_bf_block(bfs);
}

void BfStore::inherit(const std::string& parent_id, const std::vector<std::string>& child_ids) {
  const BfAssignment parent = current(parent_id);
  if (parent.version == 0) return;
  for (const auto& child : child_ids) {
    if (current(child).version == 0) history_[child].push_back(BfAssignment{child, parent.bf_ids, 1});
  }
}

json BfStore::facts_json() const { return json(facts_); }

void BfStore::load_facts_json(const json& j) {
  auto loaded = j.get<std::vector<BackgroundFact>>();
  std::set<std::string> ids;
  std::set<std::string> texts;
  int last_seq = facts_.empty() ? 0 : facts_.back().created_seq;
  for (const auto& bf : facts_) {
    ids.insert(bf.id);
    texts.insert(to_lower(normalize_whitespace(bf.text)));
  }
  for (const auto& bf : loaded) {
    if (bf.created_seq <= last_seq) {
      throw Error(ErrorCode::InvalidArgument, "BF file must be ordered by increasing created_seq");
    }
    if (!ids.insert(bf.id).second) throw Error(ErrorCode::Duplicate, "BF id '" + bf.id + "' repeated");
    if (!texts.insert(to_lower(normalize_whitespace(bf.text))).second) {
      throw Error(ErrorCode::Duplicate, "BF text of '" + bf.id + "' repeated");
    }
    last_seq = bf.created_seq;
  }
  facts_.insert(facts_.end(), loaded.begin(), loaded.end());
}

json BfStore::assignments_json() const {
  json out = json::object();
  for (const auto& [item, versions] : history_) out[item] = versions;
  return out;
}

void BfStore::load_assignments_json(const json& j) {
  history_.clear();
  for (const auto& [item, versions] : j.items()) history_[item] = versions.get<std::vector<BfAssignment>>();
}

}  // namespace kgwb
