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

// Recursive-descent Turtle 1.1 reader. Bytes >= 0x80 are accepted wherever the
// grammar allows non-ASCII name characters.

#include <cctype>
#include <cstdint>
#include <optional>

#include "kgwb/rdf.hpp"

namespace kgwb::rdf {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }
bool is_pn_chars_base(char c) { return is_alpha(c) || is_high(c); }
bool is_pn_chars_u(char c) { return is_pn_chars_base(c) || c == '_'; }
bool is_pn_chars(char c) { return is_pn_chars_u(c) || c == '-' || is_digit(c); }
bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_local_escape(char c) {
  static constexpr std::string_view kEscapable = "_~.-!$&'()*+,;=/?#@%";
  return kEscapable.find(c) != std::string_view::npos;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string resolve_iri(const std::string& base, const std::string& ref) {
  if (base.empty()) return ref;
  // Absolute when a scheme precedes the first '/', '?' or '#'.
  const auto colon = ref.find(':');
  if (colon != std::string::npos && ref.find_first_of("/?#") > colon && colon > 0) return ref;
  if (ref.empty()) return base.substr(0, base.find('#'));
  if (ref[0] == '#') return base.substr(0, base.find('#')) + ref;
  if (ref.rfind("//", 0) == 0) return base.substr(0, base.find(':') + 1) + ref;
  if (ref[0] == '/') {
    const auto scheme_end = base.find("://");
    if (scheme_end == std::string::npos) return ref;
    const auto path_start = base.find('/', scheme_end + 3);
    return base.substr(0, path_start) + ref;
  }
  const auto slash = base.rfind('/');
  if (slash == std::string::npos) return ref;
  return base.substr(0, slash + 1) + ref;
}

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view src) : src_(src) { doc_.source = std::string(src); }

  RdfDocument run() {
    skip_ws();
    if (eof()) fail("document contains no statements");
    bool previous_was_triples = false;
    while (true) {
      skip_ws();
      if (eof()) break;
      if (peek() == '@') {
        at_directive();
        previous_was_triples = false;
      } else if (at_keyword("PREFIX") || at_keyword("BASE")) {
        sparql_directive();
        previous_was_triples = false;
      } else {
        triples_statement(previous_was_triples);
        previous_was_triples = true;
      }
    }
    return std::move(doc_);
  }

 private:
  // ---- cursor -------------------------------------------------------------

  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char get() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(line_, col_, message); }
  [[noreturn]] void fail_at(std::size_t line, std::size_t col, const std::string& message) const {
    throw SyntaxError(line, col, message);
  }

  void skip_ws() {
    while (!eof()) {
      const char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (eof()) fail(std::string("unexpected end of input, expected ") + what);
    if (peek() != c) fail(std::string("expected ") + what + ", found '" + peek() + "'");
    get();
  }

  bool at_keyword(std::string_view kw) const {
    if (pos_ + kw.size() > src_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(src_[pos_ + i])) != kw[i]) return false;
    }
    const char next = peek(kw.size());
    return next == '\0' || std::isspace(static_cast<unsigned char>(next)) || next == '<';
  }

  // ---- directives ---------------------------------------------------------

  void at_directive() {
    get();  // '@'
    std::string word;
    while (!eof() && is_alpha(peek())) word.push_back(get());
    if (word == "prefix") {
      prefix_body();
    } else if (word == "base") {
      skip_ws();
      doc_.base = resolve_iri(doc_.base, iriref());
    } else {
      fail("unknown directive '@" + word + "'");
    }
    expect('.', "'.' after directive");
  }

  void sparql_directive() {
    if (at_keyword("PREFIX")) {
      for (int i = 0; i < 6; ++i) get();
      prefix_body();
    } else {
      for (int i = 0; i < 4; ++i) get();
      skip_ws();
      doc_.base = resolve_iri(doc_.base, iriref());
    }
  }

  void prefix_body() {
    skip_ws();
    std::string prefix;
    if (peek() != ':') prefix = pn_prefix();
    if (peek() != ':') fail("expected ':' in prefix declaration");
    get();
    skip_ws();
    if (peek() != '<') fail("expected IRI in prefix declaration");
    doc_.prefixes[prefix] = resolve_iri(doc_.base, iriref());
  }

  // ---- statements ---------------------------------------------------------

  void triples_statement(bool may_merge) {
    const std::size_t start = pos_;
    const std::size_t start_line = line_;
    std::vector<Triple> head;
    std::vector<Triple> nested;
    head_sink_ = &head;
    nested_sink_ = &nested;

    EntityRef subject;
    bool needs_predicates = true;
    if (peek() == '[') {
      subject = blank_property_list(/*top_level=*/true);
      skip_ws();
      // "[] ." states nothing; an anonymous subject needs predicates.
      needs_predicates = head.empty() || peek() != '.';
    } else {
      subject = subject_term();
    }
    if (needs_predicates) predicate_object_list(subject, /*in_head=*/true);
    expect('.', "'.' at end of statement");

    const std::string block(src_.substr(start, pos_ - start));
    if (may_merge && !doc_.facts.empty() && doc_.facts.back().subject == subject) {
      Fact& last = doc_.facts.back();
      last.triples.insert(last.triples.end(), head.begin(), head.end());
      last.nested.insert(last.nested.end(), nested.begin(), nested.end());
      last.raw_block += "\n" + block;
      return;
    }
    Fact fact;
    fact.ordinal = static_cast<int>(doc_.facts.size()) + 1;
    fact.subject = subject;
    fact.triples = std::move(head);
    fact.nested = std::move(nested);
    fact.raw_block = block;
    fact.line = start_line;
    doc_.facts.push_back(std::move(fact));
  }

  EntityRef subject_term() {
    skip_ws();
    const char c = peek();
    if (c == '<' || c == ':' || is_pn_chars_base(c)) {
      if (is_keyword_literal()) fail("a literal cannot be a subject");
      return EntityRef{iri_term()};
    }
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '(') return collection();
    if (c == '"' || c == '\'' || is_digit(c) || c == '+' || c == '-' || c == '.') {
      fail("a literal cannot be a subject");
    }
    fail(std::string("unexpected character '") + c + "' at start of statement");
  }

  bool is_keyword_literal() const {
    for (std::string_view kw : {"true", "false"}) {
      if (src_.substr(pos_, kw.size()) == kw) {
        const char next = peek(kw.size());
        if (!(is_pn_chars(next) || next == ':' || next == '.')) return true;
        if (next == '.' && !is_pn_chars(peek(kw.size() + 1))) return true;
      }
    }
    return false;
  }

  void predicate_object_list(const EntityRef& subject, bool in_head) {
    while (true) {
      const PredicateRef verb = verb_term();
      object_list(subject, verb, in_head);
      skip_ws();
      if (peek() != ';') return;
      while (peek() == ';') {
        get();
        skip_ws();
      }
      // A trailing ';' may be followed directly by the terminator.
      const char c = peek();
      if (c == '.' || c == ']' || eof()) return;
    }
  }

  void object_list(const EntityRef& subject, const PredicateRef& verb, bool in_head) {
    while (true) {
      ObjectTerm obj = object_term();
      Triple t{subject, verb, std::move(obj)};
      (in_head ? head_sink_ : nested_sink_)->push_back(std::move(t));
      skip_ws();
      if (peek() != ',') return;
      get();
    }
  }

  PredicateRef verb_term() {
    skip_ws();
    if (eof()) fail("unexpected end of input, expected a predicate");
    if (peek() == 'a') {
      const char next = peek(1);
      if (!(is_pn_chars(next) || next == ':' || next == '.')) {
        get();
        return PredicateRef{{std::string(kRdfNs), "type"}};
      }
    }
    const char c = peek();
    if (c == '<' || c == ':' || is_pn_chars_base(c)) return PredicateRef{iri_term()};
    if (c == '.' || c == ';' || c == ',') fail(std::string("expected a predicate, found '") + c + "'");
    fail(std::string("unexpected character '") + c + "' where a predicate was expected");
  }

  ObjectTerm object_term() {
    skip_ws();
    if (eof()) fail("unexpected end of input, expected an object");
    const char c = peek();
    if (c == '"' || c == '\'') return rdf_literal();
    if (is_digit(c) || ((c == '+' || c == '-') && (is_digit(peek(1)) || peek(1) == '.')) ||
        (c == '.' && is_digit(peek(1)))) {
      return numeric_literal();
    }
    if (c == '[') return blank_property_list(false);
    if (c == '(') return collection();
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '<' || c == ':' || is_pn_chars_base(c)) {
      if (is_keyword_literal()) {
        const bool value = peek() == 't';
        for (int i = 0; i < (value ? 4 : 5); ++i) get();
        return Literal{value ? "true" : "false", std::string(kXsdNs) + "boolean", ""};
      }
      return EntityRef{iri_term()};
    }
    fail(std::string("unexpected character '") + c + "' where an object was expected");
  }

  EntityRef fresh_blank() { return EntityRef{{std::string(kBlankNs), "!g" + std::to_string(++anon_)}}; }

  EntityRef blank_property_list(bool top_level) {
    get();  // '['
    const EntityRef node = fresh_blank();
    skip_ws();
    if (peek() == ']') {
      get();
      return node;
    }
    // Properties of a subject-position blank node are the block's own triples.
    predicate_object_list(node, /*in_head=*/top_level);
    expect(']', "']' closing blank node property list");
    return node;
  }

  EntityRef collection() {
    get();  // '('
    std::vector<ObjectTerm> items;
    while (true) {
      skip_ws();
      if (eof()) fail("unterminated collection");
      if (peek() == ')') {
        get();
        break;
      }
      items.push_back(object_term());
    }
    const PredicateRef first{{std::string(kRdfNs), "first"}};
    const PredicateRef rest{{std::string(kRdfNs), "rest"}};
    const EntityRef nil{{std::string(kRdfNs), "nil"}};
    if (items.empty()) return nil;
    std::vector<EntityRef> cells;
    for (std::size_t i = 0; i < items.size(); ++i) cells.push_back(fresh_blank());
    for (std::size_t i = 0; i < items.size(); ++i) {
      nested_sink_->push_back(Triple{cells[i], first, items[i]});
      nested_sink_->push_back(Triple{cells[i], rest, i + 1 < cells.size() ? ObjectTerm{cells[i + 1]} : ObjectTerm{nil}});
    }
    return cells.front();
  }

  EntityRef blank_label() {
    get();
    get();  // "_:"
    std::string label;
    const char c = peek();
    if (!(is_pn_chars_u(c) || is_digit(c))) fail("invalid blank node label");
    label.push_back(get());
    while (!eof() && (is_pn_chars(peek()) || peek() == '.')) label.push_back(get());
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
      --col_;
    }
    return EntityRef{{std::string(kBlankNs), label}};
  }

  // ---- IRIs ---------------------------------------------------------------

  IriName iri_term() {
    if (peek() == '<') return split_iri(resolve_iri(doc_.base, iriref()));
    return prefixed_name();
  }

  std::string iriref() {
    if (peek() != '<') fail("expected '<'");
    get();
    std::string out;
    while (true) {
      if (eof()) fail("unterminated IRI");
      const char c = peek();
      if (c == '>') {
        get();
        return out;
      }
      if (c == '\\') {
        get();
        const char kind = eof() ? '\0' : get();
        if (kind != 'u' && kind != 'U') fail("invalid escape in IRI");
        append_utf8(out, hex_codepoint(kind == 'u' ? 4 : 8));
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`') {
        fail(std::string("invalid character in IRI"));
      }
      out.push_back(get());
    }
  }

  std::uint32_t hex_codepoint(int digits) {
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (eof() || !is_hex(peek())) fail("invalid unicode escape");
      const char h = get();
      cp = cp * 16 + static_cast<std::uint32_t>(is_digit(h) ? h - '0' : std::tolower(h) - 'a' + 10);
    }
    return cp;
  }

  std::string pn_prefix() {
    std::string out;
    if (!is_pn_chars_base(peek())) fail("invalid prefix name");
    out.push_back(get());
    while (!eof() && (is_pn_chars(peek()) || peek() == '.')) out.push_back(get());
    while (!out.empty() && out.back() == '.') {
      out.pop_back();
      --pos_;
      --col_;
    }
    return out;
  }

  IriName prefixed_name() {
    const std::size_t line = line_, col = col_;
    std::string prefix;
    if (peek() != ':') prefix = pn_prefix();
    if (peek() != ':') fail_at(line, col, "expected prefixed name, found bare word '" + prefix + "'");
    get();
    auto it = doc_.prefixes.find(prefix);
    if (it == doc_.prefixes.end()) fail_at(line, col, "undeclared prefix '" + prefix + ":'");

    std::string local;
    std::size_t trailing_dots = 0;
    auto accept_first = [&](char c) { return is_pn_chars_u(c) || c == ':' || is_digit(c) || c == '%' || c == '\\'; };
    if (!eof() && accept_first(peek())) {
      while (!eof()) {
        const char c = peek();
        if (c == '\\') {
          get();
          if (eof() || !is_local_escape(peek())) fail("invalid escape in local name");
          local.push_back(get());
          trailing_dots = 0;
        } else if (c == '%') {
          get();
          if (!is_hex(peek()) || !is_hex(peek(1))) fail("invalid percent escape in local name");
          local.push_back('%');
          local.push_back(get());
          local.push_back(get());
          trailing_dots = 0;
        } else if (is_pn_chars(c) || c == ':') {
          local.push_back(get());
          trailing_dots = 0;
        } else if (c == '.') {
          local.push_back(get());
          ++trailing_dots;
        } else {
          break;
        }
      }
      // A local name never ends with '.'; give those back to the statement.
      for (; trailing_dots > 0; --trailing_dots) {
        local.pop_back();
        --pos_;
        --col_;
      }
    }
    return IriName{it->second, local};
  }

  // ---- literals -----------------------------------------------------------

  Literal rdf_literal() {
    Literal lit;
    lit.lexical = string_body();
    if (peek() == '@') {
      get();
      std::string tag;
      while (!eof() && (is_alpha(peek()) || (!tag.empty() && (peek() == '-' || is_digit(peek()))))) {
        tag.push_back(get());
      }
      if (tag.empty()) fail("empty language tag");
      lit.lang = to_lower(tag);
    } else if (peek() == '^' && peek(1) == '^') {
      get();
      get();
      lit.datatype = iri_term().iri();
    }
    return lit;
  }

  std::string string_body() {
    const char quote = get();
    const bool is_long = peek() == quote && peek(1) == quote;
    if (is_long) {
      get();
      get();
    } else if (peek() == quote) {
      get();
      return {};
    }
    std::string out;
    while (true) {
      if (eof()) fail("unterminated string literal");
      const char c = peek();
      if (is_long) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          get();
          get();
          get();
          // Up to two further quotes belong to the content ("""a""""").
          while (peek() == quote) {
            out.push_back(quote);
            get();
          }
          return out;
        }
      } else {
        if (c == quote) {
          get();
          return out;
        }
        if (c == '\n' || c == '\r') fail("newline in short string literal");
      }
      if (c == '\\') {
        get();
        if (eof()) fail("unterminated escape");
        const char e = get();
        switch (e) {
          case 't': out.push_back('\t'); break;
          case 'b': out.push_back('\b'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 'f': out.push_back('\f'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          case '\\': out.push_back('\\'); break;
          case 'u': append_utf8(out, hex_codepoint(4)); break;
          case 'U': append_utf8(out, hex_codepoint(8)); break;
          default: fail(std::string("invalid escape '\\") + e + "' in string");
        }
        continue;
      }
      out.push_back(get());
    }
  }

  Literal numeric_literal() {
    std::string text;
    if (peek() == '+' || peek() == '-') text.push_back(get());
    while (is_digit(peek())) text.push_back(get());
    bool decimal = false;
    if (peek() == '.' && is_digit(peek(1))) {
      decimal = true;
      text.push_back(get());
      while (is_digit(peek())) text.push_back(get());
    }
    bool dbl = false;
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t save = pos_, save_col = col_;
      std::string exp(1, get());
      if (peek() == '+' || peek() == '-') exp.push_back(get());
      if (is_digit(peek())) {
        while (is_digit(peek())) exp.push_back(get());
        text += exp;
        dbl = true;
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    const bool has_digits = text.find_first_of("0123456789") != std::string::npos;
    if (!has_digits) fail("malformed number");
    const char* type = dbl ? "double" : decimal ? "decimal" : "integer";
    return Literal{text, std::string(kXsdNs) + type, ""};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  int anon_ = 0;
  RdfDocument doc_;
  std::vector<Triple>* head_sink_ = nullptr;
  std::vector<Triple>* nested_sink_ = nullptr;
};

}  // namespace

RdfDocument parse_ttl(std::string_view raw) { return TurtleParser(raw).run(); }

}  // namespace kgwb::rdf
