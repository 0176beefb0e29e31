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

// Container package file: bytecode plus its sections and declared
// requirements. Byte layout is documented in docs/format.md.

#ifndef FEMTO_PACKAGE_H_
#define FEMTO_PACKAGE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "femto/isa.h"

namespace femto {

inline constexpr std::uint8_t kPackageMagic[4] = {'F', 'C', 'N', 'T'};
inline constexpr std::uint8_t kPackageVersion = 1;
inline constexpr std::size_t kPackageHeaderSize = 44;

// Bits of the header's region-requirement byte.
inline constexpr std::uint8_t kRequireContextRead = 0x01;
inline constexpr std::uint8_t kRequireContextWrite = 0x02;

struct ContainerPackage {
  std::uint8_t version = kPackageVersion;
  RawProgram text;
  std::vector<std::uint8_t> rodata;
  std::vector<std::uint8_t> data;
  std::vector<std::uint32_t> required_syscalls;
  std::uint8_t required_regions = 0;

  bool needs_context_read() const {
    return (required_regions & (kRequireContextRead | kRequireContextWrite)) != 0;
  }
  bool needs_context_write() const {
    return (required_regions & kRequireContextWrite) != 0;
  }

  friend bool operator==(const ContainerPackage&,
                         const ContainerPackage&) = default;
};

enum class PackageErrorKind {
  kTruncated,
  kBadMagic,
  kUnsupportedVersion,
  kReservedBits,
  kSectionOutOfBounds,
  kSectionOverlap,
  kBadTextSection,
};

const char* to_string(PackageErrorKind kind);

class PackageError : public std::runtime_error {
 public:
  explicit PackageError(PackageErrorKind kind);
  PackageErrorKind kind() const { return kind_; }

 private:
  PackageErrorKind kind_;
};

std::vector<std::uint8_t> serialize_package(const ContainerPackage& pkg);
ContainerPackage parse_package(std::span<const std::uint8_t> bytes);

}  // namespace femto

#endif  // FEMTO_PACKAGE_H_
