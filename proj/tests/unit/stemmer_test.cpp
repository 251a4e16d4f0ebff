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


#include <gtest/gtest.h>

#include "kgwb/stemmer.hpp"
#include "test_util.hpp"

namespace kgwb::analytics {
namespace {

// Vectors generated with NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode by
// tests/oracles/porter_vectors.py.
TEST(Porter, MatchesReferenceVectors) {
  const auto lines = split_lines(testing::read_data("porter_vectors.txt"));
  std::size_t checked = 0;
  for (const auto& line : lines) {
    if (line.empty() || line[0] == '#') continue;
    const auto space = line.find(' ');
    ASSERT_NE(space, std::string::npos) << line;
    const std::string word = line.substr(0, space);
    EXPECT_EQ(porter_stem(word), line.substr(space + 1)) << word;
    ++checked;
  }
  EXPECT_GT(checked, 500u);
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("generalizations"), "gener");
  EXPECT_EQ(porter_stem("Instructions"), "instruct");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Porter, SharedStems) {
  EXPECT_EQ(porter_stem("encodings"), porter_stem("encodes"));
  EXPECT_EQ(porter_stem("Harts"), porter_stem("Hart"));
  EXPECT_EQ(porter_stem("Extensions"), porter_stem("extension"));
  EXPECT_NE(porter_stem("format"), porter_stem("register"));
}

}  // namespace
}  // namespace kgwb::analytics
