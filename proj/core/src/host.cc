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

#include "femto/host.h"

#include <algorithm>
#include <array>
#include <cstring>
#include <utility>

namespace femto {

namespace {

// Interpreter state that lives next to the register file for the duration of
// an execution: pc, executed-instruction and taken-branch counters.
constexpr std::size_t kInterpreterCounters = 3 * sizeof(std::uint64_t);

}  // namespace

const char* to_string(ResultPolicy policy) {
  switch (policy) {
    case ResultPolicy::kCollectAll: return "CollectAll";
    case ResultPolicy::kFirstNonZero: return "FirstNonZero";
    case ResultPolicy::kBitwiseAnd: return "BitwiseAnd";
  }
  return "?";
}

const char* to_string(InstallErrorKind kind) {
  switch (kind) {
    case InstallErrorKind::kVerifyFailed: return "VerifyFailed";
    case InstallErrorKind::kUnknownHook: return "UnknownHook";
    case InstallErrorKind::kUnknownTenant: return "UnknownTenant";
    case InstallErrorKind::kRequirementNotGrantable: return "RequirementNotGrantable";
    case InstallErrorKind::kBadPackage: return "BadPackage";
  }
  return "?";
}

const char* to_string(EngineErrorKind kind) {
  switch (kind) {
    case EngineErrorKind::kDuplicateHookUuid: return "DuplicateHookUuid";
    case EngineErrorKind::kUnknownHook: return "UnknownHook";
    case EngineErrorKind::kContextLengthMismatch: return "ContextLengthMismatch";
    case EngineErrorKind::kDuplicateTenant: return "DuplicateTenant";
    case EngineErrorKind::kUnknownTenant: return "UnknownTenant";
    case EngineErrorKind::kUnknownContainer: return "UnknownContainer";
    case EngineErrorKind::kUnknownSlot: return "UnknownSlot";
  }
  return "?";
}

InstallError::InstallError(InstallErrorKind kind, std::string detail,
                           std::vector<VerifyError> verify_errors)
    : std::runtime_error(std::string(to_string(kind)) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      verify_errors_(std::move(verify_errors)) {}

EngineError::EngineError(EngineErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) +
                         (detail.empty() ? "" : ": " + detail)),
      kind_(kind) {}

struct Engine::HookRecord {
  HookSpec spec;
  std::vector<ContainerId> attached;
  std::mutex fire_mu;  // one firing of this hook at a time
};

// Everything one instance needs to run, allocated at install so that firing
// never allocates. Not movable: the allow-list points into the buffers.
struct Engine::ContainerRecord {
  ContainerRecord(VerifiedProgram p, ExecutionLimits l)
      : program(std::move(p)), limits(l), allow(stack) {}
  ContainerRecord(const ContainerRecord&) = delete;
  ContainerRecord& operator=(const ContainerRecord&) = delete;

  ContainerId id{};
  TenantId tenant{};
  Uuid hook;
  VerifiedProgram program;
  ExecutionLimits limits;
  std::set<std::uint32_t> granted;
  std::size_t package_size = 0;

  std::vector<std::uint8_t> rodata;
  std::vector<std::uint8_t> data_initial;
  std::vector<std::uint8_t> data;
  std::vector<std::uint8_t> context;
  bool context_mapped = false;
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  AllowList allow;
  SyscallTable syscalls;
};

Engine::Engine(EngineOptions options) : sensor_(options.sensor_seed) {
  install_builtin_syscalls();
}

Engine::~Engine() = default;

void Engine::install_builtin_syscalls() {
  auto local = [](std::uint64_t caller) -> StoreScope {
    return LocalScope{ContainerId{caller}};
  };
  auto tenant = [this](std::uint64_t caller) -> StoreScope {
    const ContainerRecord* rec = find_container(caller);
    if (rec == nullptr) throw ScopeUnavailable(LocalScope{ContainerId{caller}});
    return TenantScope{rec->tenant};
  };
  auto global = [](std::uint64_t) -> StoreScope { return GlobalScope{}; };

  auto add_pair = [this](std::uint32_t get_id, std::uint32_t put_id, auto scope_of) {
    syscalls_ = femto::register_syscall(
        syscalls_, get_id, [this, scope_of](CallContext& cc, const SyscallArgs& a) {
          return static_cast<std::uint64_t>(
              stores_.get(scope_of(cc.caller), static_cast<KvKey>(a[0])));
        });
    syscalls_ = femto::register_syscall(
        syscalls_, put_id, [this, scope_of](CallContext& cc, const SyscallArgs& a) {
          return static_cast<std::uint64_t>(stores_.put(scope_of(cc.caller),
                                                        static_cast<KvKey>(a[0]),
                                                        static_cast<KvValue>(a[1])));
        });
  };
  add_pair(syscall_id::kKvGetLocal, syscall_id::kKvPutLocal, local);
  add_pair(syscall_id::kKvGetGlobal, syscall_id::kKvPutGlobal, global);
  add_pair(syscall_id::kKvGetTenant, syscall_id::kKvPutTenant, tenant);

  syscalls_ = femto::register_syscall(
      syscalls_, syscall_id::kSensorRead, [this](CallContext&, const SyscallArgs&) {
        std::lock_guard lock(sensor_mu_);
        return sensor_() % 1000;
      });
}

void Engine::add_tenant(const Tenant& tenant) {
  std::unique_lock lock(mu_);
  if (!tenants_.emplace(tenant.id, tenant).second) {
    throw EngineError(EngineErrorKind::kDuplicateTenant,
                      std::to_string(to_underlying(tenant.id)));
  }
  stores_.create(TenantScope{tenant.id});
}

std::optional<Tenant> Engine::tenant(TenantId id) const {
  std::shared_lock lock(mu_);
  auto it = tenants_.find(id);
  if (it == tenants_.end()) return std::nullopt;
  return it->second;
}

HookHandle Engine::register_hook(const HookSpec& spec) {
  std::unique_lock lock(mu_);
  if (hooks_.contains(spec.uuid)) {
    throw EngineError(EngineErrorKind::kDuplicateHookUuid, spec.uuid.to_string());
  }
  auto record = std::make_unique<HookRecord>();
  record->spec = spec;
  hooks_.emplace(spec.uuid, std::move(record));
  return HookHandle{spec.uuid};
}

std::unique_ptr<Engine::ContainerRecord> Engine::prepare(
    TenantId tenant, const ContainerPackage& package, const Uuid& hook,
    const ExecutionLimits& limits) const {
  if (!tenants_.contains(tenant)) {
    throw InstallError(InstallErrorKind::kUnknownTenant,
                       std::to_string(to_underlying(tenant)));
  }
  auto hook_it = hooks_.find(hook);
  if (hook_it == hooks_.end()) {
    throw InstallError(InstallErrorKind::kUnknownHook, hook.to_string());
  }
  const HookSpec& spec = hook_it->second->spec;
  if (package.needs_context_write() && !spec.context_writable) {
    throw InstallError(InstallErrorKind::kRequirementNotGrantable,
                       "context write on read-only hook " + spec.name);
  }

  VerifyResult verified = verify(package.text, limits);
  if (!verified.ok()) {
    throw InstallError(InstallErrorKind::kVerifyFailed,
                       std::to_string(verified.errors.size()) + " error(s)",
                       std::move(verified.errors));
  }

  auto rec = std::make_unique<ContainerRecord>(std::move(*verified.program), limits);
  rec->tenant = tenant;
  rec->hook = hook;
  rec->package_size = serialize_package(package).size();
  for (std::uint32_t id : package.required_syscalls) {
    if (spec.allowed_syscalls.contains(id)) rec->granted.insert(id);
  }
  rec->syscalls = syscalls_.with_granted(rec->granted);

  rec->rodata = package.rodata;
  rec->data_initial = package.data;
  rec->data = package.data;
  rec->context.assign(spec.context_size, 0);
  try {
    if (!rec->context.empty()) {
      rec->allow.add(MemoryRegion{vaddr::kContext, rec->context, true,
                                  package.needs_context_write()});
      rec->context_mapped = true;
    }
    if (!rec->rodata.empty()) {
      rec->allow.add(MemoryRegion{vaddr::kRodata, rec->rodata, true, false});
    }
    if (!rec->data.empty()) {
      rec->allow.add(MemoryRegion{vaddr::kData, rec->data, true, true});
    }
  } catch (const std::invalid_argument& e) {
    throw InstallError(InstallErrorKind::kBadPackage, e.what());
  }
  return rec;
}

ContainerId Engine::attach(std::unique_ptr<ContainerRecord> record) {
  ContainerId id{next_container_++};
  record->id = id;
  stores_.create(LocalScope{id});
  hooks_.at(record->hook)->attached.push_back(id);
  containers_.emplace(id, std::move(record));
  return id;
}

ContainerId Engine::install_container(TenantId tenant, const ContainerPackage& package,
                                      const Uuid& hook, const ExecutionLimits& limits) {
  std::unique_lock lock(mu_);
  return attach(prepare(tenant, package, hook, limits));
}

bool Engine::detach_locked(ContainerId id) {
  auto it = containers_.find(id);
  if (it == containers_.end()) return false;
  auto& attached = hooks_.at(it->second->hook)->attached;
  attached.erase(std::remove(attached.begin(), attached.end(), id), attached.end());
  for (auto& [uuid, slot] : slots_) {
    if (slot.container == id) slot.container.reset();
  }
  containers_.erase(it);
  stores_.drop(LocalScope{id});
  return true;
}

bool Engine::detach_container(ContainerId id) {
  std::unique_lock lock(mu_);
  return detach_locked(id);
}

Engine::ContainerRecord* Engine::find_container(std::uint64_t caller) const {
  auto it = containers_.find(ContainerId{caller});
  return it == containers_.end() ? nullptr : it->second.get();
}

std::uint64_t apply_policy(ResultPolicy policy, std::span<const FireEntry> entries) {
  std::uint64_t acc = 0;
  bool any = false;
  for (const FireEntry& e : entries) {
    const auto* r = std::get_if<ExecutionResult>(&e.outcome);
    if (r == nullptr) continue;
    switch (policy) {
      case ResultPolicy::kCollectAll:
        acc += r->return_value;
        break;
      case ResultPolicy::kFirstNonZero:
        if (r->return_value != 0) return r->return_value;
        break;
      case ResultPolicy::kBitwiseAnd:
        acc = any ? (acc & r->return_value) : r->return_value;
        break;
    }
    any = true;
  }
  return acc;
}

FireReport Engine::fire_hook(const Uuid& hook, std::span<const std::uint8_t> context,
                             bool audit) {
  std::shared_lock lock(mu_);
  auto hook_it = hooks_.find(hook);
  if (hook_it == hooks_.end()) {
    throw EngineError(EngineErrorKind::kUnknownHook, hook.to_string());
  }
  HookRecord& h = *hook_it->second;
  if (context.size() != h.spec.context_size) {
    throw EngineError(EngineErrorKind::kContextLengthMismatch,
                      std::to_string(context.size()) + " != " +
                          std::to_string(h.spec.context_size));
  }

  std::lock_guard fire_lock(h.fire_mu);
  FireReport report;
  report.empty_hook = h.attached.empty();
  report.entries.reserve(h.attached.size());
  for (ContainerId id : h.attached) {
    ContainerRecord& rec = *containers_.at(id);
    if (!context.empty()) std::memcpy(rec.context.data(), context.data(), context.size());
    if (!rec.data.empty()) {
      std::memcpy(rec.data.data(), rec.data_initial.data(), rec.data.size());
    }
    std::uint64_t ctx_addr = rec.context_mapped ? vaddr::kContext : 0;
    FireEntry entry{id, exec(rec.program, rec.allow, rec.syscalls, ctx_addr,
                             ExecOptions{audit, to_underlying(id)}),
                    {}};
    if (h.spec.context_writable) entry.context = rec.context;
    report.entries.push_back(std::move(entry));
  }
  report.policy_value = apply_policy(h.spec.policy, report.entries);
  return report;
}

std::size_t Engine::instance_footprint(ContainerId id) const {
  std::shared_lock lock(mu_);
  const ContainerRecord* rec = find_container(to_underlying(id));
  if (rec == nullptr) {
    throw EngineError(EngineErrorKind::kUnknownContainer,
                      std::to_string(to_underlying(id)));
  }
  return rec->stack.size() + sizeof(RegisterFile) + kInterpreterCounters +
         rec->allow.regions().size() * sizeof(MemoryRegion);
}

std::vector<HookInfo> Engine::hooks() const {
  std::shared_lock lock(mu_);
  std::vector<HookInfo> out;
  for (const auto& [uuid, h] : hooks_) out.push_back(HookInfo{h->spec, h->attached});
  return out;
}

std::optional<ContainerInfo> Engine::container(ContainerId id) const {
  std::shared_lock lock(mu_);
  const ContainerRecord* rec = find_container(to_underlying(id));
  if (rec == nullptr) return std::nullopt;
  return ContainerInfo{rec->id,      rec->tenant,       rec->hook,
                       rec->granted, rec->limits,       rec->package_size,
                       rec->program.branch_count()};
}

void Engine::register_syscall(std::uint32_t id, SyscallFn fn) {
  std::unique_lock lock(mu_);
  syscalls_ = femto::register_syscall(syscalls_, id, std::move(fn));
  for (auto& [cid, rec] : containers_) rec->syscalls = syscalls_.with_granted(rec->granted);
}

void Engine::bind_slot(const Uuid& slot, TenantId owner, std::uint64_t current_sequence) {
  std::unique_lock lock(mu_);
  if (!hooks_.contains(slot)) throw EngineError(EngineErrorKind::kUnknownHook, slot.to_string());
  auto t = tenants_.find(owner);
  if (t == tenants_.end()) {
    throw EngineError(EngineErrorKind::kUnknownTenant,
                      std::to_string(to_underlying(owner)));
  }
  slots_[slot] = Slot{slot, owner, t->second.key_id, current_sequence, std::nullopt};
}

std::optional<Slot> Engine::slot(const Uuid& uuid) const {
  std::shared_lock lock(mu_);
  auto it = slots_.find(uuid);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

ContainerId Engine::replace_slot_container(
    const Uuid& slot, std::uint64_t sequence, const ContainerPackage& package,
    const ExecutionLimits& limits, const std::function<void(const Slot&)>& check) {
  std::unique_lock lock(mu_);
  auto it = slots_.find(slot);
  if (it == slots_.end()) throw EngineError(EngineErrorKind::kUnknownSlot, slot.to_string());
  if (check) check(it->second);
  // Everything that can fail happens before the first mutation.
  auto record = prepare(it->second.owner, package, slot, limits);
  std::optional<ContainerId> previous = it->second.container;
  ContainerId id = attach(std::move(record));
  if (previous) detach_locked(*previous);
  it->second.container = id;
  it->second.current_sequence = sequence;
  return id;
}

}  // namespace femto
