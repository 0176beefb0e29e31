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

// Key-value stores at three scopes: per container ("local"), per tenant and
// global. They replace a file system and carry values between containers.

#ifndef FEMTO_STORE_H_
#define FEMTO_STORE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "femto/ids.h"

namespace femto {

using KvKey = std::uint32_t;
using KvValue = std::int64_t;
using KvSnapshot = std::map<KvKey, KvValue>;

// Syscall ids of the store interface (docs/syscalls.md).
namespace syscall_id {
inline constexpr std::uint32_t kKvGetLocal = 2;
inline constexpr std::uint32_t kKvPutLocal = 3;
inline constexpr std::uint32_t kKvGetGlobal = 4;
inline constexpr std::uint32_t kKvPutGlobal = 5;
inline constexpr std::uint32_t kKvGetTenant = 6;
inline constexpr std::uint32_t kKvPutTenant = 7;
inline constexpr std::uint32_t kSensorRead = 10;
}  // namespace syscall_id

// One map, safe for concurrent callers. Absent keys read as 0.
class KvStore {
 public:
  KvValue get(KvKey key) const;
  // Returns the previous value (0 if absent).
  KvValue put(KvKey key, KvValue value);
  KvSnapshot snapshot() const;
  void reset();
  void load(const KvSnapshot& entries);

 private:
  mutable std::mutex mu_;
  KvSnapshot entries_;
};

struct GlobalScope {
  friend bool operator==(const GlobalScope&, const GlobalScope&) = default;
};
struct TenantScope {
  TenantId tenant;
  friend bool operator==(const TenantScope&, const TenantScope&) = default;
};
struct LocalScope {
  ContainerId container;
  friend bool operator==(const LocalScope&, const LocalScope&) = default;
};
using StoreScope = std::variant<GlobalScope, TenantScope, LocalScope>;

// "global", "tenant:<id>", "local:<id>".
std::string format_scope(const StoreScope& scope);
std::optional<StoreScope> parse_scope(std::string_view text);

class ScopeUnavailable : public std::runtime_error {
 public:
  explicit ScopeUnavailable(const StoreScope& scope)
      : std::runtime_error("store scope unavailable: " + format_scope(scope)) {}
};

// Owns every store of an engine. Scope creation and removal may race with
// reads and writes; individual operations are atomic per call.
class StoreRegistry {
 public:
  void create(const StoreScope& scope);
  void drop(const StoreScope& scope);
  bool exists(const StoreScope& scope) const;

  // Throw ScopeUnavailable when the scope was never created.
  KvValue get(const StoreScope& scope, KvKey key) const;
  KvValue put(const StoreScope& scope, KvKey key, KvValue value);
  KvSnapshot snapshot(const StoreScope& scope) const;
  void reset(const StoreScope& scope);

  // Every scope with at least one entry, for dumps.
  std::map<std::string, KvSnapshot> dump() const;

  std::shared_ptr<KvStore> find(const StoreScope& scope) const;

 private:
  std::shared_ptr<KvStore> require(const StoreScope& scope) const;

  mutable std::shared_mutex mu_;
  std::shared_ptr<KvStore> global_ = std::make_shared<KvStore>();
  std::map<TenantId, std::shared_ptr<KvStore>> tenants_;
  std::map<ContainerId, std::shared_ptr<KvStore>> locals_;
};

// Free-function forms.
KvValue kv_get(const StoreRegistry& stores, const StoreScope& scope, KvKey key);
KvValue kv_put(StoreRegistry& stores, const StoreScope& scope, KvKey key,
               KvValue value);

}  // namespace femto

#endif  // FEMTO_STORE_H_
