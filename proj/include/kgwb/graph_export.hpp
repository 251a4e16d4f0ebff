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

#include <string>
#include <vector>

#include "kgwb/analytics.hpp"

namespace kgwb::analytics {

enum class GraphFormat { Json, Dot, GraphMl };

GraphFormat graph_format_from_string(std::string_view s);
std::string_view content_type(GraphFormat f);

std::string to_dot(const BipartiteGraph& g);
std::string to_graphml(const BipartiteGraph& g);
std::string render(const BipartiteGraph& g, GraphFormat f);

/// label,stem,count,members with members joined by ';'.
std::string to_csv(const std::vector<ConceptRow>& rows);

/// RFC 4180 quoting of a single field.
std::string csv_field(std::string_view s);

}  // namespace kgwb::analytics
