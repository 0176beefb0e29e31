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

// Signed, hashed, sequence-numbered update manifests targeting hook slots.
// Byte layout: docs/manifest.md. Ed25519 signatures, SHA-256 digests.

#ifndef FEMTO_UPDATE_H_
#define FEMTO_UPDATE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "femto/host.h"
#include "femto/ids.h"

namespace femto {

inline constexpr std::uint8_t kManifestMagic[4] = {'F', 'C', 'M', 'F'};
inline constexpr std::uint8_t kManifestVersion = 1;
inline constexpr std::size_t kManifestSize = 140;
// Everything before the signature is covered by it.
inline constexpr std::size_t kManifestSignedSize = 76;

using Sha256Digest = std::array<std::uint8_t, 32>;
using PublicKey = std::array<std::uint8_t, 32>;
using SecretKey = std::array<std::uint8_t, 64>;
using Signature = std::array<std::uint8_t, 64>;

struct Manifest {
  Uuid slot;
  std::uint64_t sequence = 0;
  std::uint64_t payload_length = 0;
  Sha256Digest payload_digest{};
  std::uint32_t key_id = 0;
  Signature signature{};

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

enum class ManifestErrorKind { kTruncated, kBadMagic, kTrailingData };

const char* to_string(ManifestErrorKind kind);

class ManifestError : public std::runtime_error {
 public:
  explicit ManifestError(ManifestErrorKind kind);
  ManifestErrorKind kind() const { return kind_; }

 private:
  ManifestErrorKind kind_;
};

std::vector<std::uint8_t> encode_manifest(const Manifest& m);
// Throws ManifestError.
Manifest parse_manifest(std::span<const std::uint8_t> bytes);

struct KeyPair {
  PublicKey public_key{};
  SecretKey secret_key{};
};

// Throws std::runtime_error if the crypto library cannot initialise.
KeyPair generate_keypair();
Sha256Digest sha256(std::span<const std::uint8_t> bytes);
// First four digest bytes of the public key, little-endian.
std::uint32_t key_id_of(const PublicKey& key);

// Fills key_id, digest and length from `payload` and signs.
Manifest make_manifest(const Uuid& slot, std::uint64_t sequence,
                       std::span<const std::uint8_t> payload, const KeyPair& key);
// Re-signs `m` in place with `key` (key_id is taken from the key).
void sign_manifest(Manifest& m, const KeyPair& key);

using TrustedKeys = std::map<std::uint32_t, PublicKey>;

enum class RejectReason {
  kUnknownKey,
  kBadSignature,
  kDigestMismatch,
  kLengthMismatch,
  kStaleSequence,
};

const char* to_string(RejectReason reason);

// nullopt means accept. The key must be trusted and be the key the slot is
// bound to.
std::optional<RejectReason> verify_manifest(const Manifest& m,
                                            std::span<const std::uint8_t> payload,
                                            const TrustedKeys& trusted, const Slot& slot);

class UpdateRejected : public std::runtime_error {
 public:
  explicit UpdateRejected(RejectReason reason);
  RejectReason reason() const { return reason_; }

 private:
  RejectReason reason_;
};

// Verifies and swaps the slot's container in one exclusive critical section.
// Throws UpdateRejected, InstallError or EngineError(kUnknownSlot); on any
// throw the engine is unchanged.
ContainerId install_update(Engine& engine, const Manifest& m,
                           std::span<const std::uint8_t> payload,
                           const TrustedKeys& trusted, const ExecutionLimits& limits);

}  // namespace femto

#endif  // FEMTO_UPDATE_H_
