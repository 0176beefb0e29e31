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

#include "femto/vm.h"

#include <algorithm>
#include <sstream>

#include "femto/bytes.h"

namespace femto {

AllowList::AllowList(std::span<std::uint8_t, kStackSize> stack) {
  regions_.push_back({vaddr::kStack, stack, true, true});
}

void AllowList::add(const MemoryRegion& region) {
  if (region.length() == 0) {
    throw std::invalid_argument("memory region must not be empty");
  }
  if (region.base > UINT64_MAX - region.length()) {
    throw std::invalid_argument("memory region wraps the address space");
  }
  for (const MemoryRegion& r : regions_) {
    if (region.base < r.base + r.length() && r.base < region.base + region.length()) {
      throw std::invalid_argument("memory region overlaps an existing region");
    }
  }
  regions_.push_back(region);
}

bool AllowList::maps(std::uint64_t addr) const {
  return std::any_of(regions_.begin(), regions_.end(),
                     [&](const MemoryRegion& r) { return r.contains(addr, 1); });
}

bool mem_check(const AllowList& allow, std::uint64_t addr, unsigned size,
               Access access) {
  return allow.translate(addr, size, access) != nullptr;
}

SyscallTable::SyscallTable()
    : entries_(std::make_shared<const std::map<std::uint32_t, SyscallFn>>()) {}

std::set<std::uint32_t> SyscallTable::ids() const {
  std::set<std::uint32_t> out;
  for (const auto& [id, fn] : *entries_) out.insert(id);
  return out;
}

SyscallTable SyscallTable::with_granted(std::set<std::uint32_t> granted) const {
  SyscallTable copy = *this;
  copy.granted_ = std::move(granted);
  return copy;
}

SyscallTable register_syscall(const SyscallTable& table, std::uint32_t id,
                              SyscallFn fn) {
  if (table.entries_->contains(id)) throw DuplicateSyscallId(id);
  auto entries = std::make_shared<std::map<std::uint32_t, SyscallFn>>(*table.entries_);
  entries->emplace(id, std::move(fn));
  SyscallTable out = table;
  out.entries_ = std::move(entries);
  return out;
}

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kMemoryAccessDenied: return "MemoryAccessDenied";
    case FaultKind::kDivideByZero: return "DivideByZero";
    case FaultKind::kFuelExceeded: return "FuelExceeded";
    case FaultKind::kSyscallDenied: return "SyscallDenied";
    case FaultKind::kUnknownSyscall: return "UnknownSyscall";
    case FaultKind::kUnreachable: return "Unreachable";
  }
  return "?";
}

std::string to_string(const Fault& fault) {
  std::ostringstream os;
  os << to_string(fault.kind) << " pc=" << fault.pc;
  if (fault.kind == FaultKind::kMemoryAccessDenied) {
    os << " " << (fault.access == Access::kRead ? "R" : "W") << " 0x" << std::hex
       << fault.address << std::dec << " size=" << fault.size;
  } else if (fault.kind == FaultKind::kSyscallDenied ||
             fault.kind == FaultKind::kUnknownSyscall) {
    os << " id=" << fault.address;
  }
  return os.str();
}

namespace {

inline std::uint64_t sext(std::int32_t imm) {
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(imm));
}

inline std::uint64_t load(const std::uint8_t* p, unsigned size) {
  switch (size) {
    case 1: return p[0];
    case 2: return load_le<std::uint16_t>({p, 2});
    case 4: return load_le<std::uint32_t>({p, 4});
    default: return load_le<std::uint64_t>({p, 8});
  }
}

inline void store(std::uint8_t* p, unsigned size, std::uint64_t v) {
  switch (size) {
    case 1: p[0] = static_cast<std::uint8_t>(v); break;
    case 2: store_le<std::uint16_t>({p, 2}, static_cast<std::uint16_t>(v)); break;
    case 4: store_le<std::uint32_t>({p, 4}, static_cast<std::uint32_t>(v)); break;
    default: store_le<std::uint64_t>({p, 8}, v); break;
  }
}

// 64-bit ALU result for the non-faulting operations.
inline std::uint64_t alu64(std::uint8_t operation, std::uint64_t d, std::uint64_t s) {
  switch (operation) {
    case op::kAdd: return d + s;
    case op::kSub: return d - s;
    case op::kMul: return d * s;
    case op::kOr: return d | s;
    case op::kAnd: return d & s;
    case op::kLsh: return d << (s & 63);
    case op::kRsh: return d >> (s & 63);
    case op::kXor: return d ^ s;
    case op::kMov: return s;
    case op::kArsh:
      return static_cast<std::uint64_t>(static_cast<std::int64_t>(d) >> (s & 63));
    default: return d;
  }
}

inline std::uint32_t alu32(std::uint8_t operation, std::uint32_t d, std::uint32_t s) {
  switch (operation) {
    case op::kAdd: return d + s;
    case op::kSub: return d - s;
    case op::kMul: return d * s;
    case op::kOr: return d | s;
    case op::kAnd: return d & s;
    case op::kLsh: return d << (s & 31);
    case op::kRsh: return d >> (s & 31);
    case op::kXor: return d ^ s;
    case op::kMov: return s;
    case op::kArsh:
      return static_cast<std::uint32_t>(static_cast<std::int32_t>(d) >> (s & 31));
    default: return d;
  }
}

template <typename U, typename S>
inline bool condition(std::uint8_t operation, U a, U b) {
  switch (operation) {
    case op::kJeq: return a == b;
    case op::kJgt: return a > b;
    case op::kJge: return a >= b;
    case op::kJset: return (a & b) != 0;
    case op::kJne: return a != b;
    case op::kJsgt: return static_cast<S>(a) > static_cast<S>(b);
    case op::kJsge: return static_cast<S>(a) >= static_cast<S>(b);
    case op::kJlt: return a < b;
    case op::kJle: return a <= b;
    case op::kJslt: return static_cast<S>(a) < static_cast<S>(b);
    case op::kJsle: return static_cast<S>(a) <= static_cast<S>(b);
    default: return false;
  }
}

inline std::uint64_t byte_swap(std::uint8_t opcode, std::int32_t width, std::uint64_t v) {
  const bool big = opcode == op::kBeOp;
  switch (width) {
    case 16: {
      auto x = static_cast<std::uint16_t>(v);
      return big ? __builtin_bswap16(x) : x;
    }
    case 32: {
      auto x = static_cast<std::uint32_t>(v);
      return big ? __builtin_bswap32(x) : x;
    }
    default:
      return big ? __builtin_bswap64(v) : v;
  }
}

// Opcode groups dispatched as a unit; see the switch in exec().
#define FEMTO_ALU_CASES(CLASS, SRC)                                      \
  case CLASS | op::kAdd | SRC: case CLASS | op::kSub | SRC:             \
  case CLASS | op::kMul | SRC: case CLASS | op::kOr | SRC:              \
  case CLASS | op::kAnd | SRC: case CLASS | op::kLsh | SRC:             \
  case CLASS | op::kRsh | SRC: case CLASS | op::kXor | SRC:             \
  case CLASS | op::kMov | SRC: case CLASS | op::kArsh | SRC

#define FEMTO_JUMP_CASES(CLASS, SRC)                                     \
  case CLASS | op::kJeq | SRC: case CLASS | op::kJgt | SRC:             \
  case CLASS | op::kJge | SRC: case CLASS | op::kJset | SRC:            \
  case CLASS | op::kJne | SRC: case CLASS | op::kJsgt | SRC:            \
  case CLASS | op::kJsge | SRC: case CLASS | op::kJlt | SRC:            \
  case CLASS | op::kJle | SRC: case CLASS | op::kJslt | SRC:            \
  case CLASS | op::kJsle | SRC

#define FEMTO_MEM_CASES(CLASS)                                           \
  case CLASS | op::kModeMem | op::kSizeB:                                \
  case CLASS | op::kModeMem | op::kSizeH:                                \
  case CLASS | op::kModeMem | op::kSizeW:                                \
  case CLASS | op::kModeMem | op::kSizeDw

}  // namespace

ExecOutcome exec(const VerifiedProgram& program, AllowList& allow,
                 const SyscallTable& syscalls, std::uint64_t ctx_addr,
                 const ExecOptions& options) {
  if (ctx_addr != 0 && !allow.maps(ctx_addr)) {
    throw std::invalid_argument("context address is not mapped");
  }
  const MemoryRegion& stack = allow.stack();
  std::fill(stack.backing.begin(), stack.backing.end(), 0);

  const Instruction* const code = program.slots().data();
  const std::size_t code_size = program.slots().size();
  const std::uint64_t fuel = fuel_bound(program.limits());

  RegisterFile reg{};
  reg[1] = ctx_addr;
  reg[kFramePointer] = vaddr::kStackTop;
  std::size_t pc = program.entry();
  std::uint64_t executed = 0;
  std::uint64_t taken = 0;
  std::optional<std::vector<AccessRecord>> audit;
  if (options.audit) audit.emplace();

  auto fault = [&](FaultKind kind) {
    Fault f{};
    f.kind = kind;
    f.pc = pc;
    f.instr_executed = executed;
    f.registers = reg;
    f.access_audit = std::move(audit);
    return f;
  };
  auto memory_fault = [&](std::uint64_t addr, unsigned size, Access access) {
    Fault f = fault(FaultKind::kMemoryAccessDenied);
    f.address = addr;
    f.size = size;
    f.access = access;
    return f;
  };

  for (;;) {
    if (pc >= code_size) return fault(FaultKind::kUnreachable);
    if (executed == fuel) return fault(FaultKind::kFuelExceeded);
    ++executed;
    const Instruction& i = code[pc];

    switch (i.opcode) {
      FEMTO_ALU_CASES(op::kClassAlu64, op::kSrcImm):
        reg[i.dst] = alu64(op::operation(i.opcode), reg[i.dst], sext(i.imm));
        break;
      FEMTO_ALU_CASES(op::kClassAlu64, op::kSrcReg):
        reg[i.dst] = alu64(op::operation(i.opcode), reg[i.dst], reg[i.src]);
        break;
      FEMTO_ALU_CASES(op::kClassAlu, op::kSrcImm):
        reg[i.dst] = alu32(op::operation(i.opcode), static_cast<std::uint32_t>(reg[i.dst]),
                           static_cast<std::uint32_t>(i.imm));
        break;
      FEMTO_ALU_CASES(op::kClassAlu, op::kSrcReg):
        reg[i.dst] = alu32(op::operation(i.opcode), static_cast<std::uint32_t>(reg[i.dst]),
                           static_cast<std::uint32_t>(reg[i.src]));
        break;

      case op::kClassAlu64 | op::kDiv | op::kSrcImm:
      case op::kClassAlu64 | op::kDiv | op::kSrcReg:
      case op::kClassAlu64 | op::kMod | op::kSrcImm:
      case op::kClassAlu64 | op::kMod | op::kSrcReg: {
        const std::uint64_t s =
            op::uses_register_source(i.opcode) ? reg[i.src] : sext(i.imm);
        if (s == 0) return fault(FaultKind::kDivideByZero);
        reg[i.dst] = op::operation(i.opcode) == op::kDiv ? reg[i.dst] / s : reg[i.dst] % s;
        break;
      }
      case op::kClassAlu | op::kDiv | op::kSrcImm:
      case op::kClassAlu | op::kDiv | op::kSrcReg:
      case op::kClassAlu | op::kMod | op::kSrcImm:
      case op::kClassAlu | op::kMod | op::kSrcReg: {
        const auto s = static_cast<std::uint32_t>(
            op::uses_register_source(i.opcode) ? reg[i.src] : sext(i.imm));
        if (s == 0) return fault(FaultKind::kDivideByZero);
        const auto d = static_cast<std::uint32_t>(reg[i.dst]);
        reg[i.dst] = op::operation(i.opcode) == op::kDiv ? d / s : d % s;
        break;
      }
      case op::kClassAlu64 | op::kNeg:
        reg[i.dst] = 0 - reg[i.dst];
        break;
      case op::kClassAlu | op::kNeg:
        reg[i.dst] = static_cast<std::uint32_t>(0u - static_cast<std::uint32_t>(reg[i.dst]));
        break;
      case op::kLeOp:
      case op::kBeOp:
        reg[i.dst] = byte_swap(i.opcode, i.imm, reg[i.dst]);
        break;

      case op::kLddw:
        reg[i.dst] = static_cast<std::uint32_t>(i.imm) |
                     (static_cast<std::uint64_t>(static_cast<std::uint32_t>(code[pc + 1].imm)) << 32);
        ++pc;
        break;

      FEMTO_MEM_CASES(op::kClassLdx): {
        const unsigned size = op::access_size(i.opcode);
        const std::uint64_t addr = reg[i.src] + sext(i.offset);
        const std::uint8_t* p = allow.translate(addr, size, Access::kRead);
        if (p == nullptr) return memory_fault(addr, size, Access::kRead);
        if (audit) audit->push_back({addr, size, Access::kRead});
        reg[i.dst] = load(p, size);
        break;
      }
      FEMTO_MEM_CASES(op::kClassSt):
      FEMTO_MEM_CASES(op::kClassStx): {
        const unsigned size = op::access_size(i.opcode);
        const std::uint64_t addr = reg[i.dst] + sext(i.offset);
        std::uint8_t* p = allow.translate(addr, size, Access::kWrite);
        if (p == nullptr) return memory_fault(addr, size, Access::kWrite);
        if (audit) audit->push_back({addr, size, Access::kWrite});
        const bool from_reg = op::instruction_class(i.opcode) == op::kClassStx;
        store(p, size, from_reg ? reg[i.src] : sext(i.imm));
        break;
      }

      case op::kJaOp:
        pc = static_cast<std::size_t>(static_cast<std::int64_t>(pc) + i.offset);
        ++taken;
        break;
      FEMTO_JUMP_CASES(op::kClassJmp, op::kSrcImm):
      FEMTO_JUMP_CASES(op::kClassJmp, op::kSrcReg): {
        const std::uint64_t s =
            op::uses_register_source(i.opcode) ? reg[i.src] : sext(i.imm);
        if (condition<std::uint64_t, std::int64_t>(op::operation(i.opcode), reg[i.dst], s)) {
          pc = static_cast<std::size_t>(static_cast<std::int64_t>(pc) + i.offset);
          ++taken;
        }
        break;
      }
      FEMTO_JUMP_CASES(op::kClassJmp32, op::kSrcImm):
      FEMTO_JUMP_CASES(op::kClassJmp32, op::kSrcReg): {
        const auto s = static_cast<std::uint32_t>(
            op::uses_register_source(i.opcode) ? reg[i.src] : sext(i.imm));
        if (condition<std::uint32_t, std::int32_t>(
                op::operation(i.opcode), static_cast<std::uint32_t>(reg[i.dst]), s)) {
          pc = static_cast<std::size_t>(static_cast<std::int64_t>(pc) + i.offset);
          ++taken;
        }
        break;
      }

      case op::kCallOp: {
        const auto id = static_cast<std::uint32_t>(i.imm);
        const SyscallFn* fn = syscalls.find(id);
        if (fn == nullptr || !syscalls.is_granted(id)) {
          Fault f = fault(fn == nullptr ? FaultKind::kUnknownSyscall
                                        : FaultKind::kSyscallDenied);
          f.address = id;
          return f;
        }
        CallContext ctx{allow, options.caller};
        reg[0] = (*fn)(ctx, SyscallArgs{reg[1], reg[2], reg[3], reg[4], reg[5]});
        break;
      }
      case op::kExitOp: {
        ExecutionResult r;
        r.return_value = reg[0];
        r.instr_executed = executed;
        r.branches_taken = taken;
        r.registers = reg;
        r.access_audit = std::move(audit);
        return r;
      }
      default:
        // Unreachable for verified programs.
        return fault(FaultKind::kUnreachable);
    }
    ++pc;
  }
}

}  // namespace femto
