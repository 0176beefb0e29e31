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

// The example programs shipped with the runtime (corpus/*.s), compiled into
// the library so tools and tests don't depend on the working directory.

#ifndef FEMTO_CORPUS_H_
#define FEMTO_CORPUS_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "femto/package.h"

namespace femto::corpus {

inline constexpr std::string_view kFletcher32 = "fletcher32";
inline constexpr std::string_view kThreadCounter = "thread_counter";
inline constexpr std::string_view kSensorReader = "sensor_reader";
inline constexpr std::string_view kFormatter = "formatter";

std::vector<std::string_view> names();

// Assembly source. Throws std::out_of_range for an unknown name.
std::string_view source(std::string_view name);

// Assembled package.
ContainerPackage package(std::string_view name);

// The fixed 360-byte input of the fletcher32 example.
std::vector<std::uint8_t> fletcher_input();

// rodata image the fletcher32 program expects: u32 length, then the bytes.
std::vector<std::uint8_t> fletcher_rodata(std::span<const std::uint8_t> input);

// Native Fletcher-32 with the same conventions as the example program.
std::uint32_t fletcher32(std::span<const std::uint8_t> input);

}  // namespace femto::corpus

#endif  // FEMTO_CORPUS_H_
