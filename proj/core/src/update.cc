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

#include "femto/update.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "femto/bytes.h"
#include "femto/package.h"

namespace femto {

namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

// Offsets within the 140-byte manifest.
constexpr std::size_t kOffVersion = 4;
constexpr std::size_t kOffSlot = 8;
constexpr std::size_t kOffSequence = 24;
constexpr std::size_t kOffLength = 32;
constexpr std::size_t kOffDigest = 40;
constexpr std::size_t kOffKeyId = 72;
constexpr std::size_t kOffSignature = 76;

}  // namespace

const char* to_string(ManifestErrorKind kind) {
  switch (kind) {
    case ManifestErrorKind::kTruncated: return "TruncatedManifest";
    case ManifestErrorKind::kBadMagic: return "BadMagic";
    case ManifestErrorKind::kTrailingData: return "TrailingData";
  }
  return "?";
}

ManifestError::ManifestError(ManifestErrorKind kind)
    : std::runtime_error(to_string(kind)), kind_(kind) {}

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kUnknownKey: return "UnknownKey";
    case RejectReason::kBadSignature: return "BadSignature";
    case RejectReason::kDigestMismatch: return "DigestMismatch";
    case RejectReason::kLengthMismatch: return "LengthMismatch";
    case RejectReason::kStaleSequence: return "StaleSequence";
  }
  return "?";
}

UpdateRejected::UpdateRejected(RejectReason reason)
    : std::runtime_error(to_string(reason)), reason_(reason) {}

std::vector<std::uint8_t> encode_manifest(const Manifest& m) {
  std::vector<std::uint8_t> out(kManifestSize, 0);
  std::memcpy(out.data(), kManifestMagic, 4);
  out[kOffVersion] = kManifestVersion;
  std::copy(m.slot.bytes.begin(), m.slot.bytes.end(), out.begin() + kOffSlot);
  store_le<std::uint64_t>(std::span(out).subspan(kOffSequence), m.sequence);
  store_le<std::uint64_t>(std::span(out).subspan(kOffLength), m.payload_length);
  std::copy(m.payload_digest.begin(), m.payload_digest.end(), out.begin() + kOffDigest);
  store_le<std::uint32_t>(std::span(out).subspan(kOffKeyId), m.key_id);
  std::copy(m.signature.begin(), m.signature.end(), out.begin() + kOffSignature);
  return out;
}

Manifest parse_manifest(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kManifestMagic, 4) != 0) {
    throw ManifestError(ManifestErrorKind::kBadMagic);
  }
  if (bytes.size() < kManifestSize) throw ManifestError(ManifestErrorKind::kTruncated);
  if (bytes.size() > kManifestSize) throw ManifestError(ManifestErrorKind::kTrailingData);
  if (bytes[kOffVersion] != kManifestVersion || bytes[5] != 0 || bytes[6] != 0 ||
      bytes[7] != 0) {
    throw ManifestError(ManifestErrorKind::kBadMagic);
  }
  Manifest m;
  std::copy_n(bytes.begin() + kOffSlot, 16, m.slot.bytes.begin());
  m.sequence = load_le<std::uint64_t>(bytes.subspan(kOffSequence));
  m.payload_length = load_le<std::uint64_t>(bytes.subspan(kOffLength));
  std::copy_n(bytes.begin() + kOffDigest, 32, m.payload_digest.begin());
  m.key_id = load_le<std::uint32_t>(bytes.subspan(kOffKeyId));
  std::copy_n(bytes.begin() + kOffSignature, 64, m.signature.begin());
  return m;
}

KeyPair generate_keypair() {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_ed25519_keypair(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

Sha256Digest sha256(std::span<const std::uint8_t> bytes) {
  ensure_sodium();
  Sha256Digest d;
  crypto_hash_sha256(d.data(), bytes.data(), bytes.size());
  return d;
}

std::uint32_t key_id_of(const PublicKey& key) {
  Sha256Digest d = sha256(key);
  return load_le<std::uint32_t>(d);
}

void sign_manifest(Manifest& m, const KeyPair& key) {
  ensure_sodium();
  m.key_id = key_id_of(key.public_key);
  std::vector<std::uint8_t> bytes = encode_manifest(m);
  crypto_sign_ed25519_detached(m.signature.data(), nullptr, bytes.data(),
                               kManifestSignedSize, key.secret_key.data());
}

Manifest make_manifest(const Uuid& slot, std::uint64_t sequence,
                       std::span<const std::uint8_t> payload, const KeyPair& key) {
  Manifest m;
  m.slot = slot;
  m.sequence = sequence;
  m.payload_length = payload.size();
  m.payload_digest = sha256(payload);
  sign_manifest(m, key);
  return m;
}

std::optional<RejectReason> verify_manifest(const Manifest& m,
                                            std::span<const std::uint8_t> payload,
                                            const TrustedKeys& trusted, const Slot& slot) {
  ensure_sodium();
  auto key = trusted.find(m.key_id);
  if (key == trusted.end() || m.key_id != slot.key_id) return RejectReason::kUnknownKey;
  std::vector<std::uint8_t> bytes = encode_manifest(m);
  if (crypto_sign_ed25519_verify_detached(m.signature.data(), bytes.data(),
                                          kManifestSignedSize, key->second.data()) != 0) {
    return RejectReason::kBadSignature;
  }
  if (m.payload_length != payload.size()) return RejectReason::kLengthMismatch;
  if (sha256(payload) != m.payload_digest) return RejectReason::kDigestMismatch;
  if (m.sequence <= slot.current_sequence) return RejectReason::kStaleSequence;
  return std::nullopt;
}

ContainerId install_update(Engine& engine, const Manifest& m,
                           std::span<const std::uint8_t> payload,
                           const TrustedKeys& trusted, const ExecutionLimits& limits) {
  // A payload that does not parse is only reported once the manifest has
  // been accepted, so tampering always surfaces as a rejection.
  ContainerPackage package;
  std::optional<PackageError> parse_error;
  try {
    package = parse_package(payload);
  } catch (const PackageError& e) {
    parse_error = e;
  }
  return engine.replace_slot_container(
      m.slot, m.sequence, package, limits, [&](const Slot& slot) {
        if (auto reason = verify_manifest(m, payload, trusted, slot)) {
          throw UpdateRejected(*reason);
        }
        if (parse_error) {
          throw InstallError(InstallErrorKind::kBadPackage, parse_error->what());
        }
      });
}

}  // namespace femto
