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

#include "kgwb/graph_export.hpp"

#include <sstream>

namespace kgwb::analytics {
namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

GraphFormat graph_format_from_string(std::string_view s) {
  const std::string f = to_lower(s);
  if (f == "json") return GraphFormat::Json;
  if (f == "dot" || f == "gv") return GraphFormat::Dot;
  if (f == "graphml") return GraphFormat::GraphMl;
  throw Error(ErrorCode::InvalidArgument, "graph format must be json, dot or graphml, not '" + std::string(s) + "'");
}

std::string_view content_type(GraphFormat f) {
  switch (f) {
    case GraphFormat::Json: return "application/json";
    case GraphFormat::Dot: return "text/vnd.graphviz";
    case GraphFormat::GraphMl: return "application/graphml+xml";
  }
  return "application/octet-stream";
}

std::string to_dot(const BipartiteGraph& g) {
  std::ostringstream out;
  out << "graph concepts {\n";
  out << "  // " << g.concepts.size() << " concepts, " << g.paragraphs.size() << " paragraphs, " << g.edges.size()
      << " edges, min_paragraphs=" << g.min_paragraphs << "\n";
  out << "  node [shape=box];\n";
  for (const auto& c : g.concepts) {
    out << "  " << dot_quote("c:" + c.stem) << " [label=" << dot_quote(c.label + " (" + std::to_string(c.occurrence_count) + ")")
        << ", kind=concept];\n";
  }
  for (const auto& p : g.paragraphs) {
    out << "  " << dot_quote("p:" + p) << " [label=" << dot_quote(p) << ", shape=ellipse, kind=paragraph];\n";
  }
  for (const auto& [c, p] : g.edges) out << "  " << dot_quote("c:" + c) << " -- " << dot_quote("p:" + p) << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_graphml(const BipartiteGraph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"count\" for=\"node\" attr.name=\"count\" attr.type=\"int\"/>\n"
      << "  <graph id=\"concepts\" edgedefault=\"undirected\">\n";
  for (const auto& c : g.concepts) {
    out << "    <node id=\"" << xml_escape("c:" + c.stem) << "\">"
        << "<data key=\"kind\">concept</data>"
        << "<data key=\"label\">" << xml_escape(c.label) << "</data>"
        << "<data key=\"count\">" << c.occurrence_count << "</data></node>\n";
  }
  for (const auto& p : g.paragraphs) {
    out << "    <node id=\"" << xml_escape("p:" + p) << "\">"
        << "<data key=\"kind\">paragraph</data>"
        << "<data key=\"label\">" << xml_escape(p) << "</data></node>\n";
  }
  std::size_t n = 0;
  for (const auto& [c, p] : g.edges) {
    out << "    <edge id=\"e" << n++ << "\" source=\"" << xml_escape("c:" + c) << "\" target=\"" << xml_escape("p:" + p)
        << "\"/>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string render(const BipartiteGraph& g, GraphFormat f) {
  switch (f) {
    case GraphFormat::Json: return to_json(g).dump(2) + "\n";
    case GraphFormat::Dot: return to_dot(g);
    case GraphFormat::GraphMl: return to_graphml(g);
  }
  return {};
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string to_csv(const std::vector<ConceptRow>& rows) {
  std::string out = "label,stem,count,members\n";
  for (const auto& r : rows) {
    std::string members;
    for (const auto& m : r.members) {
      if (!members.empty()) members.push_back(';');
      members += m;
    }
    out += csv_field(r.label) + "," + csv_field(r.stem) + "," + std::to_string(r.count) + "," + csv_field(members) + "\n";
  }
  return out;
}

}  // namespace kgwb::analytics
