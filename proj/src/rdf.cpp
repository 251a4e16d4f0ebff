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

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_map>

#include "kgwb/rdf.hpp"

namespace kgwb::rdf {

IriName split_iri(std::string_view iri) {
  auto cut = iri.find_last_of("#/");
  if (cut == std::string_view::npos || cut + 1 == iri.size()) {
    const auto colon = iri.find_last_of(':');
    cut = (colon != std::string_view::npos && colon + 1 < iri.size()) ? colon : std::string_view::npos;
  }
  if (cut == std::string_view::npos) return IriName{"", std::string(iri)};
  return IriName{std::string(iri.substr(0, cut + 1)), std::string(iri.substr(cut + 1))};
}

EntityRef entity(std::string_view iri) { return EntityRef{split_iri(iri)}; }
PredicateRef predicate(std::string_view iri) { return PredicateRef{split_iri(iri)}; }

bool operator==(const Triple& a, const Triple& b) {
  return a.subject == b.subject && a.predicate == b.predicate && a.object == b.object;
}

std::vector<Triple> RdfDocument::triples() const {
  std::vector<Triple> out;
  for (const auto& fact : facts) {
    out.insert(out.end(), fact.triples.begin(), fact.triples.end());
    out.insert(out.end(), fact.nested.begin(), fact.nested.end());
  }
  return out;
}

EntityClassification classify(const RdfDocument& doc) {
  EntityClassification out;
  for (const auto& fact : doc.facts) out.subject_entities.insert(fact.subject);

  std::set<EntityRef> in_object_field;
  for (const auto& t : doc.triples()) {
    if (const EntityRef* obj = t.object_entity()) {
      in_object_field.insert(*obj);
      if (!out.subject_entities.contains(*obj)) out.object_entities.insert(*obj);
    }
  }
  for (const auto& s : out.subject_entities) {
    if (!in_object_field.contains(s)) out.rse.insert(s);
  }

  auto role_of = [&](const Triple& t) {
    const EntityRef* obj = t.object_entity();
    const bool relation =
        obj != nullptr && out.subject_entities.contains(t.subject) && out.subject_entities.contains(*obj);
    return relation ? PredicateRole::Relation : PredicateRole::Feature;
  };
  for (const auto& fact : doc.facts) {
    for (std::size_t i = 0; i < fact.triples.size(); ++i) {
      out.occurrences.push_back({fact.ordinal, i, false, fact.triples[i].predicate, role_of(fact.triples[i])});
    }
    for (std::size_t i = 0; i < fact.nested.size(); ++i) {
      out.occurrences.push_back({fact.ordinal, i, true, fact.nested[i].predicate, role_of(fact.nested[i])});
    }
  }
  return out;
}

namespace {

std::string escape_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

std::string xsd_string() { return std::string(kXsdNs) + "string"; }

std::string term_line(const EntityRef& s, const PredicateRef& p, const std::string& o) {
  return to_nt(s) + " " + to_nt(p) + " " + o + " .";
}

}  // namespace

std::string to_nt(const EntityRef& e) {
  if (e.blank()) return "_:" + e.local;
  return "<" + e.iri() + ">";
}

std::string to_nt(const PredicateRef& p) { return "<" + p.iri() + ">"; }

std::string to_nt(const Literal& l) {
  std::string out = "\"" + escape_literal(l.lexical) + "\"";
  if (!l.lang.empty()) {
    out += "@" + l.lang;
  } else if (!l.datatype.empty() && l.datatype != xsd_string()) {
    out += "^^<" + l.datatype + ">";
  }
  return out;
}

std::string to_nt(const ObjectTerm& o) {
  return std::visit([](const auto& v) { return to_nt(v); }, o);
}

std::string to_nt(const Triple& t) { return term_line(t.subject, t.predicate, to_nt(t.object)); }

std::string CanonicalForm::ntriples() const {
  std::string out;
  for (const auto& line : lines) out += line + "\n";
  return out;
}

std::vector<Triple> canonical_triples(const RdfDocument& doc) {
  const std::vector<Triple> triples = doc.triples();

  // Blank nodes in order of first occurrence.
  std::vector<std::string> blanks;
  std::unordered_map<std::string, std::size_t> blank_index;
  auto note_blank = [&](const EntityRef& e) {
    if (e.blank() && !blank_index.contains(e.local)) {
      blank_index.emplace(e.local, blanks.size());
      blanks.push_back(e.local);
    }
  };
  for (const auto& t : triples) {
    note_blank(t.subject);
    if (const EntityRef* o = t.object_entity()) note_blank(*o);
  }

  // Colour refinement over incident triples makes labels independent of
  // statement order wherever blank nodes are distinguishable; the remaining
  // ties fall back to first occurrence.
  std::vector<std::string> colour(blanks.size());
  std::size_t distinct = blanks.empty() ? 0 : 1;
  for (std::size_t round = 0; round < blanks.size(); ++round) {
    std::vector<std::vector<std::string>> sigs(blanks.size());
    auto render = [&](const EntityRef& e, std::size_t self) -> std::string {
      if (!e.blank()) return to_nt(e);
      const std::size_t idx = blank_index.at(e.local);
      return idx == self ? std::string("_:self") : "_:" + colour[idx];
    };
    for (const auto& t : triples) {
      const EntityRef* o = t.object_entity();
      for (std::size_t b = 0; b < blanks.size(); ++b) {
        const bool touches_s = t.subject.blank() && blank_index.at(t.subject.local) == b;
        const bool touches_o = o != nullptr && o->blank() && blank_index.at(o->local) == b;
        if (!touches_s && !touches_o) continue;
        const std::string obj = o != nullptr ? render(*o, b) : to_nt(t.object);
        sigs[b].push_back(render(t.subject, b) + " " + to_nt(t.predicate) + " " + obj);
      }
    }
    std::vector<std::string> next(blanks.size());
    for (std::size_t b = 0; b < blanks.size(); ++b) {
      std::sort(sigs[b].begin(), sigs[b].end());
      std::string joined = colour[b] + "|";
      for (const auto& s : sigs[b]) joined += s + "\n";
      next[b] = sha256_hex(joined).substr(0, 16);
    }
    colour = std::move(next);
    const std::size_t now = std::set<std::string>(colour.begin(), colour.end()).size();
    if (now == distinct && round > 0) break;
    distinct = now;
  }
  std::vector<std::size_t> order(blanks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return colour[a] < colour[b]; });
  std::unordered_map<std::string, std::string> label;
  for (std::size_t rank = 0; rank < order.size(); ++rank) label[blanks[order[rank]]] = "c" + std::to_string(rank);

  auto relabel = [&](const EntityRef& e) {
    if (!e.blank()) return e;
    return EntityRef{{std::string(kBlankNs), label.at(e.local)}};
  };

  std::map<std::string, Triple> unique;
  for (const auto& t : triples) {
    Triple c{relabel(t.subject), t.predicate, t.object};
    if (const EntityRef* o = t.object_entity()) {
      c.object = relabel(*o);
    } else if (std::get<Literal>(c.object).datatype == xsd_string()) {
      std::get<Literal>(c.object).datatype.clear();
    }
    unique.emplace(to_nt(c), std::move(c));
  }
  std::vector<Triple> out;
  out.reserve(unique.size());
  for (auto& [line, t] : unique) out.push_back(std::move(t));
  return out;
}

CanonicalForm canonicalize(const RdfDocument& doc) {
  CanonicalForm form;
  for (const auto& t : canonical_triples(doc)) form.lines.push_back(to_nt(t));
  form.digest = sha256_hex(form.ntriples());
  return form;
}

std::string equality_digest(const RdfDocument& doc, EqualityMode mode) {
  if (mode == EqualityMode::StrictText) return sha256_hex(doc.source);
  return canonicalize(doc).digest;
}

FactCounts fact_counts(const RdfDocument& doc) {
  const EntityClassification cls = classify(doc);
  FactCounts counts;
  counts.entity_count_named = cls.subject_entities.size() + cls.object_entities.size();
  std::set<std::string> literals;
  const auto triples = doc.triples();
  for (const auto& t : triples) {
    if (const Literal* lit = t.object_literal()) literals.insert(to_nt(*lit));
  }
  counts.entity_count_with_literals = counts.entity_count_named + literals.size();
  counts.triple_count = triples.size();
  return counts;
}

bool is_plain_local_name(std::string_view local) {
  if (local.empty()) return false;
  auto name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           static_cast<unsigned char>(c) >= 0x80;
  };
  const char first = local.front();
  if (!(std::isalnum(static_cast<unsigned char>(first)) || first == '_' || static_cast<unsigned char>(first) >= 0x80)) {
    return false;
  }
  for (std::size_t i = 1; i < local.size(); ++i) {
    const char c = local[i];
    if (name_char(c)) continue;
    if (c == '.' && i + 1 < local.size()) continue;
    return false;
  }
  return true;
}

namespace {

class TurtleWriter {
 public:
  explicit TurtleWriter(const std::map<std::string, std::string>& prefixes) : prefixes_(prefixes) {}

  std::string iri(const std::string& full) const {
    const std::string* best_prefix = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, ns] : prefixes_) {
      if (ns.size() > best_len && full.size() > ns.size() && full.compare(0, ns.size(), ns) == 0 &&
          is_plain_local_name(std::string_view(full).substr(ns.size()))) {
        best_prefix = &prefix;
        best_len = ns.size();
      }
    }
    if (best_prefix != nullptr) return *best_prefix + ":" + full.substr(best_len);
    return "<" + full + ">";
  }

  std::string predicate(const std::string& full) const {
    if (full.size() == kRdfNs.size() + 4 && full.compare(0, kRdfNs.size(), kRdfNs) == 0 &&
        full.compare(kRdfNs.size(), 4, "type") == 0) {
      return "a";
    }
    return iri(full);
  }

  std::string entity(const EntityRef& e) {
    if (!e.blank()) return iri(e.iri());
    auto [it, inserted] = blank_labels_.try_emplace(e.local, "b" + std::to_string(blank_labels_.size()));
    return "_:" + it->second;
  }

  std::string object(const ObjectTerm& o) {
    if (const auto* e = std::get_if<EntityRef>(&o)) return entity(*e);
    const Literal& lit = std::get<Literal>(o);
    std::string out = "\"" + escape_literal(lit.lexical) + "\"";
    if (!lit.lang.empty()) {
      out += "@" + lit.lang;
    } else if (!lit.datatype.empty() && lit.datatype != xsd_string()) {
      out += "^^" + iri(lit.datatype);
    }
    return out;
  }

  void write_group(std::string& out, const std::vector<Triple>& triples) {
    std::size_t i = 0;
    while (i < triples.size()) {
      std::size_t j = i;
      while (j < triples.size() && triples[j].subject == triples[i].subject) ++j;
      std::vector<const Triple*> order;
      for (std::size_t k = i; k < j; ++k) order.push_back(&triples[k]);
      std::stable_partition(order.begin(), order.end(),
                            [](const Triple* t) { return t->predicate.iri() == std::string(kRdfNs) + "type"; });
      out += entity(triples[i].subject);
      for (std::size_t k = 0; k < order.size(); ++k) {
        out += k == 0 ? " " : " ;\n    ";
        out += predicate(order[k]->predicate.iri()) + " " + object(order[k]->object);
      }
      out += " .\n";
      i = j;
    }
  }

  std::string prefix_block() const {
    std::string out;
    for (const auto& [prefix, ns] : prefixes_) out += "@prefix " + prefix + ": <" + ns + "> .\n";
    return out;
  }

 private:
  const std::map<std::string, std::string>& prefixes_;
  std::unordered_map<std::string, std::string> blank_labels_;
};

}  // namespace

std::string to_turtle(const RdfDocument& doc) {
  TurtleWriter writer(doc.prefixes);
  std::string out = writer.prefix_block();
  for (const auto& fact : doc.facts) {
    out += "\n";
    writer.write_group(out, fact.triples);
    writer.write_group(out, fact.nested);
  }
  return out;
}

std::string to_turtle(const std::vector<Triple>& triples, const std::map<std::string, std::string>& prefixes) {
  TurtleWriter writer(prefixes);
  std::string out = writer.prefix_block();
  if (!triples.empty()) out += "\n";
  writer.write_group(out, triples);
  return out;
}

}  // namespace kgwb::rdf
