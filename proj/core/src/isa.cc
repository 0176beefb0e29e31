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

#include "femto/isa.h"

#include <array>
#include <string>
#include <utility>

#include "femto/bytes.h"

namespace femto {

const char* to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::kEmptyProgram: return "EmptyProgram";
    case DecodeErrorKind::kMisalignedLength: return "MisalignedLength";
    case DecodeErrorKind::kTruncatedWideInstruction:
      return "TruncatedWideInstruction";
    case DecodeErrorKind::kNonZeroContinuationSlot:
      return "NonZeroContinuationSlot";
  }
  return "?";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t slot)
    : std::runtime_error(std::string(to_string(kind)) + " at slot " +
                         std::to_string(slot)),
      kind_(kind),
      slot_(slot) {}

namespace {

using OpcodeTable = std::array<OpcodeInfo, 256>;

OpcodeTable build_opcode_table() {
  OpcodeTable t{};
  for (auto& e : t) e = {nullptr, Form::kExit};

  struct Named {
    std::uint8_t op;
    const char* name;
  };
  constexpr Named kAluOps[] = {
      {op::kAdd, "add"}, {op::kSub, "sub"}, {op::kMul, "mul"},
      {op::kDiv, "div"}, {op::kOr, "or"},   {op::kAnd, "and"},
      {op::kLsh, "lsh"}, {op::kRsh, "rsh"}, {op::kMod, "mod"},
      {op::kXor, "xor"}, {op::kMov, "mov"}, {op::kArsh, "arsh"},
  };
  constexpr Named kAlu32Ops[] = {
      {op::kAdd, "add32"}, {op::kSub, "sub32"}, {op::kMul, "mul32"},
      {op::kDiv, "div32"}, {op::kOr, "or32"},   {op::kAnd, "and32"},
      {op::kLsh, "lsh32"}, {op::kRsh, "rsh32"}, {op::kMod, "mod32"},
      {op::kXor, "xor32"}, {op::kMov, "mov32"}, {op::kArsh, "arsh32"},
  };
  for (const auto& [code, name] : kAluOps) {
    t[op::kClassAlu64 | code | op::kSrcImm] = {name, Form::kAluImm};
    t[op::kClassAlu64 | code | op::kSrcReg] = {name, Form::kAluReg};
  }
  for (const auto& [code, name] : kAlu32Ops) {
    t[op::kClassAlu | code | op::kSrcImm] = {name, Form::kAluImm};
    t[op::kClassAlu | code | op::kSrcReg] = {name, Form::kAluReg};
  }
  t[op::kClassAlu64 | op::kNeg] = {"neg", Form::kNeg};
  t[op::kClassAlu | op::kNeg] = {"neg32", Form::kNeg};
  t[op::kLeOp] = {"le", Form::kEndian};
  t[op::kBeOp] = {"be", Form::kEndian};

  constexpr Named kJumps[] = {
      {op::kJeq, "jeq"},   {op::kJgt, "jgt"},   {op::kJge, "jge"},
      {op::kJset, "jset"}, {op::kJne, "jne"},   {op::kJsgt, "jsgt"},
      {op::kJsge, "jsge"}, {op::kJlt, "jlt"},   {op::kJle, "jle"},
      {op::kJslt, "jslt"}, {op::kJsle, "jsle"},
  };
  constexpr Named kJumps32[] = {
      {op::kJeq, "jeq32"},   {op::kJgt, "jgt32"},   {op::kJge, "jge32"},
      {op::kJset, "jset32"}, {op::kJne, "jne32"},   {op::kJsgt, "jsgt32"},
      {op::kJsge, "jsge32"}, {op::kJlt, "jlt32"},   {op::kJle, "jle32"},
      {op::kJslt, "jslt32"}, {op::kJsle, "jsle32"},
  };
  for (const auto& [code, name] : kJumps) {
    t[op::kClassJmp | code | op::kSrcImm] = {name, Form::kJumpImm};
    t[op::kClassJmp | code | op::kSrcReg] = {name, Form::kJumpReg};
  }
  for (const auto& [code, name] : kJumps32) {
    t[op::kClassJmp32 | code | op::kSrcImm] = {name, Form::kJumpImm};
    t[op::kClassJmp32 | code | op::kSrcReg] = {name, Form::kJumpReg};
  }
  t[op::kJaOp] = {"ja", Form::kJa};
  t[op::kCallOp] = {"call", Form::kCall};
  t[op::kExitOp] = {"exit", Form::kExit};
  t[op::kLddw] = {"lddw", Form::kLoadWide};

  struct MemoryOps {
    std::uint8_t size;
    const char* load;
    const char* store_imm;
    const char* store_reg;
  };
  constexpr MemoryOps kMemory[] = {
      {op::kSizeB, "ldxb", "stb", "stxb"},
      {op::kSizeH, "ldxh", "sth", "stxh"},
      {op::kSizeW, "ldxw", "stw", "stxw"},
      {op::kSizeDw, "ldxdw", "stdw", "stxdw"},
  };
  for (const auto& m : kMemory) {
    t[op::kClassLdx | op::kModeMem | m.size] = {m.load, Form::kLoad};
    t[op::kClassSt | op::kModeMem | m.size] = {m.store_imm, Form::kStoreImm};
    t[op::kClassStx | op::kModeMem | m.size] = {m.store_reg, Form::kStoreReg};
  }
  return t;
}

const OpcodeTable& opcode_table() {
  static const OpcodeTable table = build_opcode_table();
  return table;
}

}  // namespace

const OpcodeInfo* lookup_opcode(std::uint8_t opcode) {
  const OpcodeInfo& info = opcode_table()[opcode];
  return info.mnemonic == nullptr ? nullptr : &info;
}

bool reserved_fields_clear(const Instruction& i, Form form) {
  switch (form) {
    case Form::kAluImm: return i.src == 0 && i.offset == 0;
    case Form::kAluReg: return i.imm == 0 && i.offset == 0;
    case Form::kNeg: return i.src == 0 && i.offset == 0 && i.imm == 0;
    case Form::kEndian:
      return i.src == 0 && i.offset == 0 &&
             (i.imm == 16 || i.imm == 32 || i.imm == 64);
    case Form::kLoadWide: return i.src == 0 && i.offset == 0;
    case Form::kLoad: return i.imm == 0;
    case Form::kStoreImm: return i.src == 0;
    case Form::kStoreReg: return i.imm == 0;
    case Form::kJa: return i.dst == 0 && i.src == 0 && i.imm == 0;
    case Form::kJumpImm: return i.src == 0;
    case Form::kJumpReg: return i.imm == 0;
    case Form::kCall: return i.dst == 0 && i.src == 0 && i.offset == 0;
    case Form::kExit:
      return i.dst == 0 && i.src == 0 && i.offset == 0 && i.imm == 0;
  }
  return false;
}

Instruction decode_slot(std::span<const std::uint8_t, kSlotSize> bytes) {
  Instruction insn;
  insn.opcode = bytes[0];
  insn.dst = bytes[1] & 0x0f;
  insn.src = bytes[1] >> 4;
  insn.offset = static_cast<std::int16_t>(load_le<std::uint16_t>(bytes.subspan<2, 2>()));
  insn.imm = static_cast<std::int32_t>(load_le<std::uint32_t>(bytes.subspan<4, 4>()));
  return insn;
}

void encode_slot(const Instruction& insn,
                 std::span<std::uint8_t, kSlotSize> out) {
  out[0] = insn.opcode;
  out[1] = static_cast<std::uint8_t>((insn.dst & 0x0f) | (insn.src << 4));
  store_le(out.subspan<2, 2>(), static_cast<std::uint16_t>(insn.offset));
  store_le(out.subspan<4, 4>(), static_cast<std::uint32_t>(insn.imm));
}

SlotScan scan_slots(std::span<const std::uint8_t> bytes) {
  SlotScan scan;
  if (bytes.empty()) {
    scan.problems.emplace_back(DecodeErrorKind::kEmptyProgram, 0);
    return scan;
  }
  const std::size_t n = bytes.size() / kSlotSize;
  if (bytes.size() % kSlotSize != 0) {
    scan.problems.emplace_back(DecodeErrorKind::kMisalignedLength, n);
  }
  scan.slots.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scan.slots.push_back(
        decode_slot(bytes.subspan(i * kSlotSize).first<kSlotSize>()));
  }
  scan.is_continuation.assign(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    DecodedInstruction d{i, scan.slots[i], 0};
    if (d.is_wide()) {
      if (i + 1 >= n) {
        scan.problems.emplace_back(DecodeErrorKind::kTruncatedWideInstruction, i);
      } else {
        const Instruction& next = scan.slots[i + 1];
        if (next.opcode != 0 || next.dst != 0 || next.src != 0 ||
            next.offset != 0) {
          scan.problems.emplace_back(DecodeErrorKind::kNonZeroContinuationSlot,
                                     i + 1);
        }
        d.imm_high = next.imm;
        scan.is_continuation[i + 1] = true;
        scan.instructions.push_back(d);
        ++i;
        continue;
      }
    }
    scan.instructions.push_back(d);
  }
  return scan;
}

std::vector<DecodedInstruction> decode_program(
    std::span<const std::uint8_t> bytes) {
  SlotScan scan = scan_slots(bytes);
  if (!scan.problems.empty()) throw scan.problems.front();
  return std::move(scan.instructions);
}

RawProgram encode_program(std::span<const DecodedInstruction> instrs) {
  std::vector<Instruction> slots;
  slots.reserve(instrs.size() + 4);
  for (const auto& d : instrs) {
    slots.push_back(d.insn);
    if (d.is_wide()) slots.push_back(Instruction{0, 0, 0, 0, d.imm_high});
  }
  return encode_program(std::span<const Instruction>(slots));
}

RawProgram encode_program(std::span<const Instruction> slots) {
  RawProgram raw;
  raw.bytes.resize(slots.size() * kSlotSize);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    encode_slot(slots[i],
                std::span(raw.bytes).subspan(i * kSlotSize).first<kSlotSize>());
  }
  return raw;
}

}  // namespace femto
