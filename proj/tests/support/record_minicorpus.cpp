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


// Regenerates tests/data/minicorpus/fixtures from script.json.
//
//   record_minicorpus <scratch-workdir>

#include <filesystem>
#include <iostream>

#include "kgwb/oracle.hpp"
#include "kgwb/workbench.hpp"
#include "minicorpus_scenario.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  if (argc != 2) {
    std::cerr << "usage: record_minicorpus <scratch-workdir>\n";
    return 2;
  }
  using namespace kgwb;
  const std::string dir = testing::minicorpus_dir();
  const std::string fixtures = dir + "/fixtures";
  fs::remove_all(argv[1]);
  fs::remove_all(fixtures);
  fs::create_directories(fixtures);
  auto script = ScriptedTransport::from_json(json::parse(read_file(dir + "/script.json")));
  auto recorder = std::make_shared<RecordingTransport>(std::make_shared<ScriptedTransport>(script), fixtures);
  try {
    Workbench wb(testing::minicorpus_config(argv[1], recorder));
    const auto result = testing::run_minicorpus_scenario(wb);
    for (const auto& [label, id] : result.runs) std::cout << label << " " << id << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(fixtures)) ++n;
  std::cout << n << " fixtures written to " << fixtures << "\n";
  return 0;
}
