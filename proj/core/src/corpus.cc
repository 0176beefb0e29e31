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

#include "femto/corpus.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "femto/assembler.h"
#include "femto/bytes.h"

namespace femto::corpus {

// Generated from corpus/*.s at configure time.
extern const std::pair<std::string_view, std::string_view> kSources[];
extern const std::size_t kSourceCount;

std::vector<std::string_view> names() {
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < kSourceCount; ++i) out.push_back(kSources[i].first);
  return out;
}

std::string_view source(std::string_view name) {
  for (std::size_t i = 0; i < kSourceCount; ++i) {
    if (kSources[i].first == name) return kSources[i].second;
  }
  throw std::out_of_range("no corpus program named " + std::string(name));
}

ContainerPackage package(std::string_view name) {
  return assemble_package(source(name));
}

std::vector<std::uint8_t> fletcher_input() {
  ContainerPackage pkg = package(kFletcher32);
  std::span<const std::uint8_t> ro = pkg.rodata;
  std::uint32_t len = load_le<std::uint32_t>(ro);
  return {ro.begin() + 4, ro.begin() + 4 + len};
}

std::vector<std::uint8_t> fletcher_rodata(std::span<const std::uint8_t> input) {
  std::vector<std::uint8_t> out;
  out.reserve(input.size() + 4);
  append_le<std::uint32_t>(out, static_cast<std::uint32_t>(input.size()));
  out.insert(out.end(), input.begin(), input.end());
  return out;
}

std::uint32_t fletcher32(std::span<const std::uint8_t> input) {
  std::uint32_t sum1 = 0xffff;
  std::uint32_t sum2 = 0xffff;
  std::size_t words = input.size() / 2;
  std::size_t i = 0;
  while (words > 0) {
    std::size_t block = std::min<std::size_t>(words, 359);
    words -= block;
    for (; block > 0; --block, i += 2) {
      sum1 += static_cast<std::uint32_t>(input[i] | (input[i + 1] << 8));
      sum2 += sum1;
    }
    sum1 = (sum1 & 0xffff) + (sum1 >> 16);
    sum2 = (sum2 & 0xffff) + (sum2 >> 16);
  }
  if (input.size() % 2 != 0) {
    sum1 += input.back();
    sum2 += sum1;
  }
  for (int k = 0; k < 2; ++k) {
    sum1 = (sum1 & 0xffff) + (sum1 >> 16);
    sum2 = (sum2 & 0xffff) + (sum2 >> 16);
  }
  return sum2 << 16 | sum1;
}

}  // namespace femto::corpus
