// Copyright 2026 The Femto Container Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "support/fixtures.h"

#include "femto/assembler.h"
#include "femto/corpus.h"
#include "femto/package.h"
#include "support/oracles.h"

namespace femto::testing {

std::vector<std::uint8_t> fletcher_input_360() {
  const std::string line = "The quick brown fox jumps over the lazy dog. ";
  std::vector<std::uint8_t> out;
  for (int k = 0; k < 8; ++k) out.insert(out.end(), line.begin(), line.end());
  return out;
}

std::map<std::string, std::vector<std::uint8_t>> render_fixtures() {
  std::map<std::string, std::vector<std::uint8_t>> files;
  auto text = [&files](const std::string& name, const std::string& body) {
    files[name] = std::vector<std::uint8_t>(body.begin(), body.end());
  };
  for (std::string_view name : corpus::names()) {
    files[std::string(name) + ".pkg"] = serialize_package(assemble_package(corpus::source(name)));
  }
  text("fletcher32.expected", std::to_string(oracle::fletcher32(fletcher_input_360())) + "\n");

  const oracle::ScenarioExpectation e = oracle::expect_scenario(
      kFixtureSeed, kFixtureThreadSwitches, kFixtureTimerFirings);
  std::string counter, sensor;
  for (const auto& [k, v] : e.counter_local) counter += std::to_string(k) + " " + std::to_string(v) + "\n";
  for (const auto& [k, v] : e.sensor_local) sensor += std::to_string(k) + " " + std::to_string(v) + "\n";
  sensor += "tenant 1 " + std::to_string(e.average) + "\n";
  text("thread_counter.expected", counter);
  text("sensor_reader.expected", sensor);
  text("formatter.expected", e.formatter_output + "\n");
  text("demo.expected", e.dump);
  return files;
}

}  // namespace femto::testing
