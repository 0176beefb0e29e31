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


// Committed corpus artifacts: assembled packages and expected outputs
// derived from the reference oracles.

#ifndef FEMTO_TESTS_SUPPORT_FIXTURES_H_
#define FEMTO_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace femto::testing {

// The fixed 360-byte fletcher32 input, built independently of the corpus.
std::vector<std::uint8_t> fletcher_input_360();

// Scenario parameters the committed fixtures are produced with.
inline constexpr std::uint64_t kFixtureSeed = 42;
inline constexpr int kFixtureThreadSwitches = 12;
inline constexpr int kFixtureTimerFirings = 10;

// file name -> contents.
std::map<std::string, std::vector<std::uint8_t>> render_fixtures();

}  // namespace femto::testing

#endif  // FEMTO_TESTS_SUPPORT_FIXTURES_H_
