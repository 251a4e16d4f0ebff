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
#include <span>
#include <string>
#include <string_view>

#include "kgwb/bf_store.hpp"
#include "kgwb/common.hpp"
#include "kgwb/corpus.hpp"
#include "kgwb/rdf.hpp"

namespace kgwb {

enum class PromptKind { KgcNoBf, KgcWithBf, FactToSentence, EntailmentNoBf, EntailmentWithBf };

std::string_view to_string(PromptKind kind);
PromptKind prompt_kind_from_string(std::string_view name);

/// A versioned set of prompt templates with `{{name}}` placeholders.
class PromptTemplates {
 public:
  /// The templates compiled into the library.
  static PromptTemplates builtin();
  static PromptTemplates from_json(const json& j);
  static PromptTemplates load(const std::string& path);

  const std::string& version() const noexcept { return version_; }
  const std::string& body(PromptKind kind) const;

  /// Substitutes every placeholder; an unbound placeholder is a TemplateError.
  std::string render(PromptKind kind, const std::map<std::string, std::string>& vars) const;

 private:
  std::string version_;
  std::map<PromptKind, std::string> bodies_;
};

/// Picks KgcWithBf when `bfs` is non-empty, KgcNoBf otherwise.
std::string build_kgc_prompt(const PromptTemplates& t, const TextItem& item, std::span<const BackgroundFact> bfs);
std::string build_kgc_prompt(const PromptTemplates& t, PromptKind kind, const TextItem& item,
                             std::span<const BackgroundFact> bfs);

std::string build_fact_sentence_prompt(const PromptTemplates& t, const rdf::Fact& fact);

std::string build_entailment_prompt(const PromptTemplates& t, const TextItem& item,
                                    std::span<const BackgroundFact> bfs, std::string_view fact_sentence);
std::string build_entailment_prompt(const PromptTemplates& t, PromptKind kind, const TextItem& item,
                                    std::span<const BackgroundFact> bfs, std::string_view fact_sentence);

}  // namespace kgwb
