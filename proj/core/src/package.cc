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

#include "femto/package.h"

#include <algorithm>
#include <array>
#include <string>

#include "femto/bytes.h"

namespace femto {

const char* to_string(PackageErrorKind kind) {
  switch (kind) {
    case PackageErrorKind::kTruncated: return "Truncated";
    case PackageErrorKind::kBadMagic: return "BadMagic";
    case PackageErrorKind::kUnsupportedVersion: return "UnsupportedVersion";
    case PackageErrorKind::kReservedBits: return "ReservedBits";
    case PackageErrorKind::kSectionOutOfBounds: return "SectionOutOfBounds";
    case PackageErrorKind::kSectionOverlap: return "SectionOverlap";
    case PackageErrorKind::kBadTextSection: return "BadTextSection";
  }
  return "?";
}

PackageError::PackageError(PackageErrorKind kind)
    : std::runtime_error(std::string("invalid package: ") + to_string(kind)),
      kind_(kind) {}

namespace {

struct Section {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
};

// Header field offsets.
constexpr std::size_t kVersionAt = 4;
constexpr std::size_t kRegionsAt = 5;
constexpr std::size_t kReservedAt = 6;
constexpr std::size_t kEntryAt = 8;
constexpr std::size_t kTextAt = 12;
constexpr std::size_t kRodataAt = 20;
constexpr std::size_t kDataAt = 28;
constexpr std::size_t kSyscallsAt = 36;

Section read_section(std::span<const std::uint8_t> h, std::size_t at) {
  return {load_le<std::uint32_t>(h.subspan(at)),
          load_le<std::uint32_t>(h.subspan(at + 4))};
}

}  // namespace

std::vector<std::uint8_t> serialize_package(const ContainerPackage& pkg) {
  const auto text_len = static_cast<std::uint32_t>(pkg.text.bytes.size());
  const auto rodata_len = static_cast<std::uint32_t>(pkg.rodata.size());
  const auto data_len = static_cast<std::uint32_t>(pkg.data.size());
  const auto syscall_count =
      static_cast<std::uint32_t>(pkg.required_syscalls.size());

  const std::uint32_t text_off = kPackageHeaderSize;
  const std::uint32_t rodata_off = text_off + text_len;
  const std::uint32_t data_off = rodata_off + rodata_len;
  const std::uint32_t syscalls_off = data_off + data_len;

  std::vector<std::uint8_t> out(std::begin(kPackageMagic), std::end(kPackageMagic));
  out.reserve(syscalls_off + 4 * syscall_count);
  out.push_back(pkg.version);
  out.push_back(pkg.required_regions);
  append_le<std::uint16_t>(out, 0);
  append_le<std::uint32_t>(out, static_cast<std::uint32_t>(pkg.text.entry));
  append_le(out, text_off);
  append_le(out, text_len);
  append_le(out, rodata_off);
  append_le(out, rodata_len);
  append_le(out, data_off);
  append_le(out, data_len);
  append_le(out, syscalls_off);
  append_le(out, syscall_count);
  out.insert(out.end(), pkg.text.bytes.begin(), pkg.text.bytes.end());
  out.insert(out.end(), pkg.rodata.begin(), pkg.rodata.end());
  out.insert(out.end(), pkg.data.begin(), pkg.data.end());
  for (std::uint32_t id : pkg.required_syscalls) append_le(out, id);
  return out;
}

ContainerPackage parse_package(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPackageHeaderSize) {
    throw PackageError(PackageErrorKind::kTruncated);
  }
  if (!std::equal(std::begin(kPackageMagic), std::end(kPackageMagic),
                  bytes.begin())) {
    throw PackageError(PackageErrorKind::kBadMagic);
  }
  ContainerPackage pkg;
  pkg.version = bytes[kVersionAt];
  if (pkg.version != kPackageVersion) {
    throw PackageError(PackageErrorKind::kUnsupportedVersion);
  }
  pkg.required_regions = bytes[kRegionsAt];
  if ((pkg.required_regions &
       ~(kRequireContextRead | kRequireContextWrite)) != 0 ||
      load_le<std::uint16_t>(bytes.subspan(kReservedAt)) != 0) {
    throw PackageError(PackageErrorKind::kReservedBits);
  }

  Section text = read_section(bytes, kTextAt);
  Section rodata = read_section(bytes, kRodataAt);
  Section data = read_section(bytes, kDataAt);
  Section syscalls = read_section(bytes, kSyscallsAt);
  if (syscalls.length > (bytes.size() / 4)) {
    throw PackageError(PackageErrorKind::kSectionOutOfBounds);
  }
  Section syscall_bytes{syscalls.offset, syscalls.length * 4};

  std::array<Section, 4> sections{text, rodata, data, syscall_bytes};
  for (const Section& s : sections) {
    std::uint64_t end = std::uint64_t{s.offset} + s.length;
    if (s.length != 0 && (s.offset < kPackageHeaderSize || end > bytes.size())) {
      throw PackageError(PackageErrorKind::kSectionOutOfBounds);
    }
  }
  for (std::size_t i = 0; i < sections.size(); ++i) {
    for (std::size_t j = i + 1; j < sections.size(); ++j) {
      const Section& a = sections[i];
      const Section& b = sections[j];
      if (a.length == 0 || b.length == 0) continue;
      if (std::uint64_t{a.offset} < std::uint64_t{b.offset} + b.length &&
          std::uint64_t{b.offset} < std::uint64_t{a.offset} + a.length) {
        throw PackageError(PackageErrorKind::kSectionOverlap);
      }
    }
  }
  if (text.length == 0 || text.length % kSlotSize != 0) {
    throw PackageError(PackageErrorKind::kBadTextSection);
  }

  auto slice = [&](Section s) {
    auto view = bytes.subspan(s.offset, s.length);
    return std::vector<std::uint8_t>(view.begin(), view.end());
  };
  pkg.text.bytes = slice(text);
  pkg.text.entry = load_le<std::uint32_t>(bytes.subspan(kEntryAt));
  pkg.rodata = slice(rodata);
  pkg.data = slice(data);
  pkg.required_syscalls.reserve(syscalls.length);
  for (std::uint32_t i = 0; i < syscalls.length; ++i) {
    pkg.required_syscalls.push_back(
        load_le<std::uint32_t>(bytes.subspan(syscalls.offset + 4 * i)));
  }
  return pkg;
}

}  // namespace femto
