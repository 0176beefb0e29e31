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

#include "femto/store.h"

#include <charconv>
#include <cstdint>

namespace femto {

KvValue KvStore::get(KvKey key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second;
}

KvValue KvStore::put(KvKey key, KvValue value) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.try_emplace(key, value);
  if (inserted) return 0;
  KvValue previous = it->second;
  it->second = value;
  return previous;
}

KvSnapshot KvStore::snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

void KvStore::reset() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

void KvStore::load(const KvSnapshot& entries) {
  std::lock_guard lock(mu_);
  entries_ = entries;
}

std::string format_scope(const StoreScope& scope) {
  if (std::holds_alternative<GlobalScope>(scope)) return "global";
  if (const auto* t = std::get_if<TenantScope>(&scope)) {
    return "tenant:" + std::to_string(to_underlying(t->tenant));
  }
  return "local:" + std::to_string(to_underlying(std::get<LocalScope>(scope).container));
}

std::optional<StoreScope> parse_scope(std::string_view text) {
  if (text == "global") return GlobalScope{};
  auto parse_id = [](std::string_view digits) -> std::optional<std::uint64_t> {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
      return std::nullopt;
    }
    return v;
  };
  if (text.starts_with("tenant:")) {
    auto id = parse_id(text.substr(7));
    if (!id || *id > UINT32_MAX) return std::nullopt;
    return TenantScope{TenantId{static_cast<std::uint32_t>(*id)}};
  }
  if (text.starts_with("local:")) {
    auto id = parse_id(text.substr(6));
    if (!id) return std::nullopt;
    return LocalScope{ContainerId{*id}};
  }
  return std::nullopt;
}

void StoreRegistry::create(const StoreScope& scope) {
  std::unique_lock lock(mu_);
  if (const auto* t = std::get_if<TenantScope>(&scope)) {
    tenants_.try_emplace(t->tenant, std::make_shared<KvStore>());
  } else if (const auto* l = std::get_if<LocalScope>(&scope)) {
    locals_.try_emplace(l->container, std::make_shared<KvStore>());
  }
}

void StoreRegistry::drop(const StoreScope& scope) {
  std::unique_lock lock(mu_);
  if (const auto* t = std::get_if<TenantScope>(&scope)) {
    tenants_.erase(t->tenant);
  } else if (const auto* l = std::get_if<LocalScope>(&scope)) {
    locals_.erase(l->container);
  }
}

bool StoreRegistry::exists(const StoreScope& scope) const {
  return find(scope) != nullptr;
}

std::shared_ptr<KvStore> StoreRegistry::find(const StoreScope& scope) const {
  std::shared_lock lock(mu_);
  if (std::holds_alternative<GlobalScope>(scope)) return global_;
  if (const auto* t = std::get_if<TenantScope>(&scope)) {
    auto it = tenants_.find(t->tenant);
    return it == tenants_.end() ? nullptr : it->second;
  }
  auto it = locals_.find(std::get<LocalScope>(scope).container);
  return it == locals_.end() ? nullptr : it->second;
}

std::shared_ptr<KvStore> StoreRegistry::require(const StoreScope& scope) const {
  auto store = find(scope);
  if (!store) throw ScopeUnavailable(scope);
  return store;
}

KvValue StoreRegistry::get(const StoreScope& scope, KvKey key) const {
  return require(scope)->get(key);
}

KvValue StoreRegistry::put(const StoreScope& scope, KvKey key, KvValue value) {
  return require(scope)->put(key, value);
}

KvSnapshot StoreRegistry::snapshot(const StoreScope& scope) const {
  return require(scope)->snapshot();
}

void StoreRegistry::reset(const StoreScope& scope) { require(scope)->reset(); }

std::map<std::string, KvSnapshot> StoreRegistry::dump() const {
  std::shared_lock lock(mu_);
  std::map<std::string, KvSnapshot> out;
  auto add = [&](const StoreScope& scope, const KvStore& store) {
    KvSnapshot snap = store.snapshot();
    if (!snap.empty()) out.emplace(format_scope(scope), std::move(snap));
  };
  add(GlobalScope{}, *global_);
  for (const auto& [id, store] : tenants_) add(TenantScope{id}, *store);
  for (const auto& [id, store] : locals_) add(LocalScope{id}, *store);
  return out;
}

KvValue kv_get(const StoreRegistry& stores, const StoreScope& scope, KvKey key) {
  return stores.get(scope, key);
}

KvValue kv_put(StoreRegistry& stores, const StoreScope& scope, KvKey key,
               KvValue value) {
  return stores.put(scope, key, value);
}

}  // namespace femto
