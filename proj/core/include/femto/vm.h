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

// Register-machine interpreter with allow-list memory checks, syscall
// dispatch and fuel accounting.

#ifndef FEMTO_VM_H_
#define FEMTO_VM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "femto/verifier.h"

namespace femto {

inline constexpr std::size_t kStackSize = 512;

// Fixed virtual bases for the regions a container can see.
namespace vaddr {
inline constexpr std::uint64_t kStack = 0x1000'0000;
inline constexpr std::uint64_t kContext = 0x2000'0000;
inline constexpr std::uint64_t kRodata = 0x3000'0000;
inline constexpr std::uint64_t kData = 0x4000'0000;
inline constexpr std::uint64_t kShared = 0x5000'0000;
// r10 points one past the highest stack byte; programs address the stack
// with negative offsets.
inline constexpr std::uint64_t kStackTop = kStack + kStackSize;
}  // namespace vaddr

enum class Access : std::uint8_t { kRead, kWrite };

using RegisterFile = std::array<std::uint64_t, kNumRegisters>;

// A virtual address range mapped onto host memory owned by someone else.
struct MemoryRegion {
  std::uint64_t base = 0;
  std::span<std::uint8_t> backing;
  bool readable = false;
  bool writable = false;

  std::uint64_t length() const { return backing.size(); }
  bool contains(std::uint64_t addr, std::uint64_t size) const {
    return addr >= base && size <= length() && addr - base <= length() - size;
  }
  bool permits(Access access) const {
    return access == Access::kRead ? readable : writable;
  }
};

// The regions an execution may touch. The stack is always region 0.
class AllowList {
 public:
  explicit AllowList(std::span<std::uint8_t, kStackSize> stack);

  // Throws std::invalid_argument for empty, wrapping or overlapping regions.
  void add(const MemoryRegion& region);

  const std::vector<MemoryRegion>& regions() const { return regions_; }
  const MemoryRegion& stack() const { return regions_.front(); }

  // Host pointer for [addr, addr + size) if one region holds the whole span
  // and grants `access`; nullptr otherwise.
  std::uint8_t* translate(std::uint64_t addr, std::uint64_t size,
                          Access access) const {
    for (const MemoryRegion& r : regions_) {
      if (r.contains(addr, size)) {
        return r.permits(access) ? r.backing.data() + (addr - r.base) : nullptr;
      }
    }
    return nullptr;
  }

  bool maps(std::uint64_t addr) const;

 private:
  std::vector<MemoryRegion> regions_;
};

// True iff a single region contains [addr, addr + size) and allows `access`.
bool mem_check(const AllowList& allow, std::uint64_t addr, unsigned size,
               Access access);

// Handed to host functions: the executing container's view of memory and an
// opaque caller id chosen by whoever started the execution.
struct CallContext {
  AllowList& memory;
  std::uint64_t caller = 0;
};

using SyscallArgs = std::array<std::uint64_t, 5>;
using SyscallFn =
    std::function<std::uint64_t(CallContext&, const SyscallArgs&)>;

class DuplicateSyscallId : public std::invalid_argument {
 public:
  explicit DuplicateSyscallId(std::uint32_t id)
      : std::invalid_argument("duplicate syscall id " + std::to_string(id)),
        id_(id) {}
  std::uint32_t id() const { return id_; }

 private:
  std::uint32_t id_;
};

// Host functions by id plus the subset a container may invoke. Copies share
// the (immutable) entry map.
class SyscallTable {
 public:
  SyscallTable();

  const SyscallFn* find(std::uint32_t id) const {
    auto it = entries_->find(id);
    return it == entries_->end() ? nullptr : &it->second;
  }
  bool is_granted(std::uint32_t id) const { return granted_.contains(id); }

  const std::set<std::uint32_t>& granted() const { return granted_; }
  std::set<std::uint32_t> ids() const;

  SyscallTable with_granted(std::set<std::uint32_t> granted) const;

 private:
  friend SyscallTable register_syscall(const SyscallTable&, std::uint32_t,
                                       SyscallFn);
  std::shared_ptr<const std::map<std::uint32_t, SyscallFn>> entries_;
  std::set<std::uint32_t> granted_;
};

// Returns a table with `id` added; the granted set is unchanged. Throws
// DuplicateSyscallId.
SyscallTable register_syscall(const SyscallTable& table, std::uint32_t id,
                              SyscallFn fn);

enum class FaultKind {
  kMemoryAccessDenied,
  kDivideByZero,
  kFuelExceeded,
  kSyscallDenied,
  kUnknownSyscall,
  kUnreachable,
};

const char* to_string(FaultKind kind);

struct AccessRecord {
  std::uint64_t address = 0;
  unsigned size = 0;
  Access access = Access::kRead;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

struct Fault {
  FaultKind kind;
  std::size_t pc = 0;
  // Memory faults: the rejected access. Syscall faults: address = id.
  std::uint64_t address = 0;
  unsigned size = 0;
  Access access = Access::kRead;
  std::uint64_t instr_executed = 0;
  RegisterFile registers{};
  std::optional<std::vector<AccessRecord>> access_audit;
};

std::string to_string(const Fault& fault);

struct ExecutionResult {
  std::uint64_t return_value = 0;
  std::uint64_t instr_executed = 0;
  std::uint64_t branches_taken = 0;
  RegisterFile registers{};
  std::optional<std::vector<AccessRecord>> access_audit;
};

struct ExecOptions {
  bool audit = false;
  std::uint64_t caller = 0;
};

using ExecOutcome = std::variant<ExecutionResult, Fault>;

// Runs a verified program. Registers start at zero except r1 = ctx_addr and
// r10 = stack top; the stack is zeroed first. Throws std::invalid_argument if
// ctx_addr is neither 0 nor mapped by `allow`.
ExecOutcome exec(const VerifiedProgram& program, AllowList& allow,
                 const SyscallTable& syscalls, std::uint64_t ctx_addr,
                 const ExecOptions& options = {});

}  // namespace femto

#endif  // FEMTO_VM_H_
