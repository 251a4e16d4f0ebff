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

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kgwb/common.hpp"

namespace kgwb::rdf {

inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kXsdNs = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kBlankNs = "_:";

/// An IRI split into its namespace and local name. Identity is the expanded IRI.
struct IriName {
  std::string ns;
  std::string local;

  std::string iri() const { return ns + local; }
  bool blank() const noexcept { return ns == kBlankNs; }
};

inline bool operator==(const IriName& a, const IriName& b) { return a.iri() == b.iri(); }
inline std::strong_ordering operator<=>(const IriName& a, const IriName& b) { return a.iri() <=> b.iri(); }

struct EntityRef : IriName {};
struct PredicateRef : IriName {};

/// Splits a full IRI at the last '#' or '/' (falling back to ':').
IriName split_iri(std::string_view iri);
EntityRef entity(std::string_view iri);
PredicateRef predicate(std::string_view iri);

struct Literal {
  std::string lexical;
  std::string datatype;  // expanded IRI; empty for a plain or language-tagged string
  std::string lang;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using ObjectTerm = std::variant<EntityRef, Literal>;

struct Triple {
  EntityRef subject;
  PredicateRef predicate;
  ObjectTerm object;

  const EntityRef* object_entity() const { return std::get_if<EntityRef>(&object); }
  const Literal* object_literal() const { return std::get_if<Literal>(&object); }
};

bool operator==(const Triple& a, const Triple& b);

/// One rdf block: a subject with the triples stated about it.
struct Fact {
  int ordinal = 0;
  EntityRef subject;
  std::vector<Triple> triples;
  // Triples about blank nodes or collections introduced inside this block.
  std::vector<Triple> nested;
  std::string raw_block;
  std::size_t line = 0;
};

struct RdfDocument {
  std::map<std::string, std::string> prefixes;
  std::string base;
  std::vector<Fact> facts;
  std::string source;

  /// Every triple in document order, nested triples following their block.
  std::vector<Triple> triples() const;
};

/// Parses Turtle into Facts. Consecutive statements about the same subject form
/// one Fact. Throws SyntaxError carrying the offending line and column.
RdfDocument parse_ttl(std::string_view raw);

enum class PredicateRole { Relation, Feature };

struct PredicateOccurrence {
  int fact_ordinal = 0;
  std::size_t index = 0;  // position inside Fact::triples, or Fact::nested when nested
  bool nested = false;
  PredicateRef predicate;
  PredicateRole role = PredicateRole::Feature;
};

struct EntityClassification {
  std::set<EntityRef> subject_entities;
  std::set<EntityRef> object_entities;
  std::set<EntityRef> rse;
  std::vector<PredicateOccurrence> occurrences;
};

/// Subject entities head a Fact; object entities appear as an object and are
/// not subject entities; root subject entities never appear in an object
/// field. A predicate occurrence is a relation when both its subject and its
/// object are subject entities, otherwise a feature.
EntityClassification classify(const RdfDocument& doc);

struct CanonicalForm {
  std::vector<std::string> lines;  // sorted, unique N-Triples lines
  std::string digest;

  std::string ntriples() const;
};

/// Prefix-expanded, blank-node-relabelled, sorted triple set with a SHA-256 digest.
/// Distinct triples with blank nodes relabelled `c0, c1, ...` and xsd:string dropped,
/// ordered by their N-Triples line.
std::vector<Triple> canonical_triples(const RdfDocument& doc);
CanonicalForm canonicalize(const RdfDocument& doc);

enum class EqualityMode { Canonical, StrictText };

/// Digest used for equality grouping: canonical triple set, or the raw text bytes.
std::string equality_digest(const RdfDocument& doc, EqualityMode mode);

struct FactCounts {
  std::size_t entity_count_named = 0;
  std::size_t entity_count_with_literals = 0;
  std::size_t triple_count = 0;

  friend bool operator==(const FactCounts&, const FactCounts&) = default;
};

FactCounts fact_counts(const RdfDocument& doc);

std::string to_nt(const EntityRef& e);
std::string to_nt(const PredicateRef& p);
std::string to_nt(const Literal& l);
std::string to_nt(const ObjectTerm& o);
std::string to_nt(const Triple& t);

/// Serializes as Turtle, compacting IRIs with the document's prefixes where the
/// local name allows it.
std::string to_turtle(const RdfDocument& doc);
std::string to_turtle(const std::vector<Triple>& triples, const std::map<std::string, std::string>& prefixes);

/// True when `local` can be written as the local part of a prefixed name without escapes.
bool is_plain_local_name(std::string_view local);

}  // namespace kgwb::rdf
