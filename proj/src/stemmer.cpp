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

#include "kgwb/stemmer.hpp"

#include <array>
#include <utility>

#include "kgwb/common.hpp"

namespace kgwb::analytics {
namespace {

class Porter {
 public:
  explicit Porter(std::string word) : w_(std::move(word)) {}

  std::string run() {
    if (w_.empty()) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  bool consonant(std::size_t i, const std::string& s) const {
    switch (s[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 || !consonant(i - 1, s);
      default: return true;
    }
  }

  // Number of VC sequences in [C](VC)^m[V].
  int measure(const std::string& s) const {
    int m = 0;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n && consonant(i, s)) ++i;
    while (i < n) {
      while (i < n && !consonant(i, s)) ++i;
      if (i >= n) break;
      while (i < n && consonant(i, s)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(const std::string& s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!consonant(i, s)) return true;
    }
    return false;
  }

  bool double_consonant(const std::string& s) const {
    const std::size_t n = s.size();
    return n >= 2 && s[n - 1] == s[n - 2] && consonant(n - 1, s);
  }

  // *o: ends consonant-vowel-consonant, the last not w, x or y.
  bool cvc(const std::string& s) const {
    const std::size_t n = s.size();
    if (n < 3) return false;
    if (!consonant(n - 3, s) || consonant(n - 2, s) || !consonant(n - 1, s)) return false;
    const char c = s[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() && w_.compare(w_.size() - suffix.size(), suffix.size(), suffix) == 0;
  }

  std::string stem_of(std::string_view suffix) const { return w_.substr(0, w_.size() - suffix.size()); }

  void step1a() {
    if (ends_with("sses")) {
      w_.resize(w_.size() - 2);
    } else if (ends_with("ies")) {
      w_.resize(w_.size() - 2);
    } else if (ends_with("ss")) {
      // unchanged
    } else if (ends_with("s")) {
      w_.pop_back();
    }
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_of("eed")) > 0) w_.pop_back();
      return;
    }
    bool stripped = false;
    for (std::string_view suffix : {"ed", "ing"}) {
      if (ends_with(suffix) && has_vowel(stem_of(suffix))) {
        w_ = stem_of(suffix);
        stripped = true;
        break;
      }
    }
    if (!stripped) return;
    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_.push_back('e');
    } else if (double_consonant(w_) && !(ends_with("l") || ends_with("s") || ends_with("z"))) {
      w_.pop_back();
    } else if (measure(w_) == 1 && cvc(w_)) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_of("y"))) w_.back() = 'i';
  }

  // Applies the rule for the longest matching suffix, if its stem has m > min_m.
  template <std::size_t N>
  void apply_rules(const std::array<std::pair<std::string_view, std::string_view>, N>& rules, int min_m) {
    const std::pair<std::string_view, std::string_view>* best = nullptr;
    for (const auto& rule : rules) {
      if (ends_with(rule.first) && (best == nullptr || rule.first.size() > best->first.size())) best = &rule;
    }
    if (best == nullptr) return;
    const std::string stem = stem_of(best->first);
    if (measure(stem) > min_m) w_ = stem + std::string(best->second);
  }

  void step2() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 20> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},  {"izer", "ize"},
        {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},      {"ousli", "ous"},
        {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},   {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
    }};
    apply_rules(kRules, 0);
  }

  void step3() {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kRules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
    }};
    apply_rules(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
    };
    std::string_view best;
    for (std::string_view suffix : kSuffixes) {
      if (ends_with(suffix) && suffix.size() > best.size()) best = suffix;
    }
    if (best.empty()) return;
    const std::string stem = stem_of(best);
    if (measure(stem) <= 1) return;
    if (best == "ion" && !(stem.size() > 0 && (stem.back() == 's' || stem.back() == 't'))) return;
    w_ = stem;
  }

  void step5a() {
    if (!ends_with("e")) return;
    const std::string stem = stem_of("e");
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !cvc(stem))) w_ = stem;
  }

  void step5b() {
    if (measure(w_) > 1 && double_consonant(w_) && ends_with("l")) w_.pop_back();
  }

  std::string w_;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Porter(to_lower(word)).run(); }

}  // namespace kgwb::analytics
