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

#ifndef FEMTO_IDS_H_
#define FEMTO_IDS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace femto {

enum class TenantId : std::uint32_t {};
enum class ContainerId : std::uint64_t {};

constexpr std::uint32_t to_underlying(TenantId id) {
  return static_cast<std::uint32_t>(id);
}
constexpr std::uint64_t to_underlying(ContainerId id) {
  return static_cast<std::uint64_t>(id);
}

// 128-bit identifier, printed in the usual 8-4-4-4-12 hex form.
struct Uuid {
  std::array<std::uint8_t, 16> bytes{};

  std::string to_string() const;
  static std::optional<Uuid> parse(std::string_view text);

  friend auto operator<=>(const Uuid&, const Uuid&) = default;
};

}  // namespace femto

#endif  // FEMTO_IDS_H_
