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

// The hosting engine: tenants, hooks (launch pads), containers attached to
// hooks under intersected privileges, and event-driven firing.
//
// Locking: install/detach/register take the engine lock exclusively; firing
// takes it shared, so distinct hooks fire concurrently. Each hook serializes
// its own firings, which makes the per-container instance state (stack,
// working data, context copy) single-threaded.

#ifndef FEMTO_HOST_H_
#define FEMTO_HOST_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "femto/ids.h"
#include "femto/package.h"
#include "femto/store.h"
#include "femto/verifier.h"
#include "femto/vm.h"

namespace femto {

struct Tenant {
  TenantId id{};
  // Identifier of the tenant's update-signing key.
  std::uint32_t key_id = 0;
};

// How a hook folds the return values of the containers that ran cleanly.
enum class ResultPolicy {
  kCollectAll,    // wrapping sum
  kFirstNonZero,  // first nonzero value, else 0
  kBitwiseAnd,    // AND of all values, 0 if none
};

const char* to_string(ResultPolicy policy);

struct HookSpec {
  Uuid uuid;
  std::string name;
  std::size_t context_size = 0;
  bool context_writable = false;
  std::set<std::uint32_t> allowed_syscalls;
  ResultPolicy policy = ResultPolicy::kCollectAll;
};

struct HookHandle {
  Uuid uuid;
};

struct HookInfo {
  HookSpec spec;
  std::vector<ContainerId> attached;
};

struct ContainerInfo {
  ContainerId id{};
  TenantId tenant{};
  Uuid hook;
  std::set<std::uint32_t> granted_syscalls;
  ExecutionLimits limits{1, 1};
  std::size_t package_size = 0;  // serialized bytes, bytecode included
  std::size_t branch_count = 0;
};

struct FireEntry {
  ContainerId container{};
  ExecOutcome outcome;
  // The container's context block after it ran (writable hooks only).
  std::vector<std::uint8_t> context;

  bool ok() const { return std::holds_alternative<ExecutionResult>(outcome); }
};

struct FireReport {
  std::vector<FireEntry> entries;
  std::uint64_t policy_value = 0;
  bool empty_hook = true;
};

// A hook treated as an update target: bound to the owning tenant's signing
// key, with a monotonically increasing sequence number.
struct Slot {
  Uuid uuid;
  TenantId owner{};
  std::uint32_t key_id = 0;
  std::uint64_t current_sequence = 0;
  std::optional<ContainerId> container;
};

enum class InstallErrorKind {
  kVerifyFailed,
  kUnknownHook,
  kUnknownTenant,
  kRequirementNotGrantable,
  kBadPackage,
};

const char* to_string(InstallErrorKind kind);

class InstallError : public std::runtime_error {
 public:
  InstallError(InstallErrorKind kind, std::string detail,
               std::vector<VerifyError> verify_errors = {});

  InstallErrorKind kind() const { return kind_; }
  const std::vector<VerifyError>& verify_errors() const { return verify_errors_; }

 private:
  InstallErrorKind kind_;
  std::vector<VerifyError> verify_errors_;
};

enum class EngineErrorKind {
  kDuplicateHookUuid,
  kUnknownHook,
  kContextLengthMismatch,
  kDuplicateTenant,
  kUnknownTenant,
  kUnknownContainer,
  kUnknownSlot,
};

const char* to_string(EngineErrorKind kind);

class EngineError : public std::runtime_error {
 public:
  explicit EngineError(EngineErrorKind kind, const std::string& detail = "");
  EngineErrorKind kind() const { return kind_; }

 private:
  EngineErrorKind kind_;
};

struct EngineOptions {
  // Seed of the synthetic sensor behind syscall 10.
  std::uint64_t sensor_seed = 42;
};

class Engine {
 public:
  explicit Engine(EngineOptions options = {});
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void add_tenant(const Tenant& tenant);
  std::optional<Tenant> tenant(TenantId id) const;

  // Throws EngineError(kDuplicateHookUuid).
  HookHandle register_hook(const HookSpec& spec);

  // Verifies the bytecode, grants required ∩ allowed syscalls, builds the
  // allow-list and attaches the container at the tail of the hook.
  // Throws InstallError.
  ContainerId install_container(TenantId tenant, const ContainerPackage& package,
                                const Uuid& hook, const ExecutionLimits& limits);

  // Removes the container and drops its local store. False if unknown.
  bool detach_container(ContainerId id);

  // Runs every attached container, in attach order, on its own copy of
  // `context`. With `audit`, every outcome carries its memory-access log.
  // Throws EngineError(kUnknownHook | kContextLengthMismatch).
  FireReport fire_hook(const Uuid& hook, std::span<const std::uint8_t> context,
                       bool audit = false);

  // Stack + register file + interpreter bookkeeping of one instance, in
  // bytes. Bytecode is not included. Throws EngineError(kUnknownContainer).
  std::size_t instance_footprint(ContainerId id) const;

  std::vector<HookInfo> hooks() const;
  std::optional<ContainerInfo> container(ContainerId id) const;

  StoreRegistry& stores() { return stores_; }
  const StoreRegistry& stores() const { return stores_; }

  // Adds a host function to the table every container dispatches through.
  // Throws DuplicateSyscallId.
  void register_syscall(std::uint32_t id, SyscallFn fn);

  // Update slots. bind_slot requires a registered hook and a known tenant.
  void bind_slot(const Uuid& slot, TenantId owner, std::uint64_t current_sequence = 0);
  std::optional<Slot> slot(const Uuid& uuid) const;

  // Under the exclusive lock: `check` may throw to abort; then the package
  // is installed at the slot's hook (throwing InstallError leaves everything
  // untouched), the previous slot container is detached and the slot's
  // sequence becomes `sequence`.
  ContainerId replace_slot_container(const Uuid& slot, std::uint64_t sequence,
                                     const ContainerPackage& package,
                                     const ExecutionLimits& limits,
                                     const std::function<void(const Slot&)>& check);

 private:
  struct HookRecord;
  struct ContainerRecord;

  std::unique_ptr<ContainerRecord> prepare(TenantId tenant, const ContainerPackage& package,
                                           const Uuid& hook, const ExecutionLimits& limits) const;
  ContainerId attach(std::unique_ptr<ContainerRecord> record);
  bool detach_locked(ContainerId id);
  ContainerRecord* find_container(std::uint64_t caller) const;
  void install_builtin_syscalls();

  mutable std::shared_mutex mu_;
  std::map<TenantId, Tenant> tenants_;
  std::map<Uuid, std::unique_ptr<HookRecord>> hooks_;
  std::map<ContainerId, std::unique_ptr<ContainerRecord>> containers_;
  std::map<Uuid, Slot> slots_;
  std::uint64_t next_container_ = 1;
  SyscallTable syscalls_;
  StoreRegistry stores_;

  std::mutex sensor_mu_;
  std::mt19937_64 sensor_;
};

// Folds successful results per `policy`.
std::uint64_t apply_policy(ResultPolicy policy, std::span<const FireEntry> entries);

}  // namespace femto

#endif  // FEMTO_HOST_H_
