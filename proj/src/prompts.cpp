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

#include "kgwb/prompts.hpp"

#include <array>
#include <utility>

namespace kgwb {
namespace resources {
std::string_view prompts_v1();
}  // namespace resources

namespace {

constexpr std::array<std::pair<PromptKind, std::string_view>, 5> kKindNames{{
    {PromptKind::KgcNoBf, "kgc_no_bf"},
    {PromptKind::KgcWithBf, "kgc_with_bf"},
    {PromptKind::FactToSentence, "fact_to_sentence"},
    {PromptKind::EntailmentNoBf, "entailment_no_bf"},
    {PromptKind::EntailmentWithBf, "entailment_with_bf"},
}};

void require_active(const TextItem& item) {
  if (!item.active()) throw Error(ErrorCode::InvalidArgument, "item '" + item.id + "' is superseded");
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PromptKind prompt_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown prompt kind '" + std::string(name) + "'");
}

PromptTemplates PromptTemplates::builtin() {
  static const PromptTemplates kBuiltin = from_json(json::parse(resources::prompts_v1()));
  return kBuiltin;
}

PromptTemplates PromptTemplates::from_json(const json& j) {
  PromptTemplates t;
  if (!j.is_object() || !j.contains("version") || !j["version"].is_string()) {
    throw Error(ErrorCode::TemplateError, "template set needs a string 'version'");
  }
  t.version_ = j["version"].get<std::string>();
  if (t.version_.empty()) throw Error(ErrorCode::TemplateError, "template version must not be empty");
  for (const auto& [kind, name] : kKindNames) {
    if (!j.contains(name) || !j[name].is_string()) {
      throw Error(ErrorCode::TemplateError, "template set '" + t.version_ + "' lacks '" + std::string(name) + "'");
    }
    t.bodies_[kind] = j[name].get<std::string>();
  }
  return t;
}

PromptTemplates PromptTemplates::load(const std::string& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::TemplateError, path + ": " + e.what());
  }
}

const std::string& PromptTemplates::body(PromptKind kind) const { return bodies_.at(kind); }

std::string PromptTemplates::render(PromptKind kind, const std::map<std::string, std::string>& vars) const {
  const std::string& text = body(kind);
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("{{", pos);
    if (open == std::string::npos) break;
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string::npos) {
      throw Error(ErrorCode::TemplateError, "unterminated placeholder in '" + std::string(to_string(kind)) + "'");
    }
    const std::string name = trim(std::string_view(text).substr(open + 2, close - open - 2));
    auto it = vars.find(name);
    if (it == vars.end()) {
      throw Error(ErrorCode::TemplateError,
                  "no value for '{{" + name + "}}' in template '" + std::string(to_string(kind)) + "'");
    }
    out.append(text, pos, open - pos);
    out += it->second;
    pos = close + 2;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

std::string build_kgc_prompt(const PromptTemplates& t, const TextItem& item, std::span<const BackgroundFact> bfs) {
  return build_kgc_prompt(t, bfs.empty() ? PromptKind::KgcNoBf : PromptKind::KgcWithBf, item, bfs);
}

std::string build_kgc_prompt(const PromptTemplates& t, PromptKind kind, const TextItem& item,
                             std::span<const BackgroundFact> bfs) {
  require_active(item);
  switch (kind) {
    case PromptKind::KgcNoBf:
      return t.render(kind, {{"paragraph", item.text}});
    case PromptKind::KgcWithBf:
      if (bfs.empty()) throw Error(ErrorCode::TemplateError, "kgc_with_bf needs at least one background fact");
      return t.render(kind, {{"paragraph", item.text}, {"background_facts", render_bf_block(bfs)}});
    default:
      throw Error(ErrorCode::TemplateError, std::string(to_string(kind)) + " is not a KGC prompt");
  }
}

std::string build_fact_sentence_prompt(const PromptTemplates& t, const rdf::Fact& fact) {
  if (fact.triples.empty()) {
    throw Error(ErrorCode::EmptyFact, "Fact " + std::to_string(fact.ordinal) + " has no triples");
  }
  return t.render(PromptKind::FactToSentence, {{"fact", trim(fact.raw_block)}});
}

std::string build_entailment_prompt(const PromptTemplates& t, const TextItem& item,
                                    std::span<const BackgroundFact> bfs, std::string_view fact_sentence) {
  return build_entailment_prompt(t, bfs.empty() ? PromptKind::EntailmentNoBf : PromptKind::EntailmentWithBf, item,
                                 bfs, fact_sentence);
}

std::string build_entailment_prompt(const PromptTemplates& t, PromptKind kind, const TextItem& item,
                                    std::span<const BackgroundFact> bfs, std::string_view fact_sentence) {
  const std::string sentence = trim(fact_sentence);
  if (sentence.empty()) throw Error(ErrorCode::InvalidArgument, "fact sentence must not be empty");
  switch (kind) {
    case PromptKind::EntailmentNoBf:
      return t.render(kind, {{"paragraph", item.text}, {"sentence", sentence}});
    case PromptKind::EntailmentWithBf:
      if (bfs.empty()) throw Error(ErrorCode::TemplateError, "entailment_with_bf needs at least one background fact");
      return t.render(kind,
                      {{"paragraph", item.text}, {"background_facts", render_bf_block(bfs)}, {"sentence", sentence}});
    default:
      throw Error(ErrorCode::TemplateError, std::string(to_string(kind)) + " is not an entailment prompt");
  }
}

}  // namespace kgwb
