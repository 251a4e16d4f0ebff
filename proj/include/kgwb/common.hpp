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
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace kgwb {

using json = nlohmann::json;

enum class ErrorCode {
  InvalidArgument,
  EmptyDocument,
  NotFound,
  AlreadySplit,
  PartitionMismatch,
  SyntaxError,
  EmptyFact,
  TemplateError,
  TransportError,
  ReplayMiss,
  RateLimited,
  OracleUnavailable,
  NotSystematic,
  InvalidTransition,
  Duplicate,
  UnknownBf,
  EmptyUnion,
  NoBaseRse,
  NotEligible,
  Busy,
  StaleVersion,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure surfaced by the workbench.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Turtle parse failure. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Exact non-negative-denominator rational, always stored in lowest terms.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend bool operator==(const Ratio& a, const Ratio& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

void to_json(json& j, const Ratio& r);
void from_json(const json& j, Ratio& r);

/// Wall clock returning ISO-8601 UTC timestamps; injectable so runs can be made reproducible.
using Clock = std::function<std::string()>;
Clock system_clock();
Clock fixed_clock(std::string timestamp);

std::string sha256_hex(std::string_view data);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
/// Collapses every whitespace run to one space and trims the ends.
std::string normalize_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);

std::string read_file(const std::string& path);
/// Writes through a temporary file and renames, so readers never see a partial document.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace kgwb
