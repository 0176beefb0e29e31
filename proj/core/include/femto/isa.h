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

#ifndef FEMTO_ISA_H_
#define FEMTO_ISA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace femto {

// eBPF-subset instruction encoding. Every instruction occupies one 8-byte
// slot: opcode, (dst | src << 4), offset (LE 16), imm (LE 32). The 64-bit
// immediate load occupies two slots.
namespace op {

// Instruction classes (low three bits of the opcode).
inline constexpr std::uint8_t kClassLd = 0x00;
inline constexpr std::uint8_t kClassLdx = 0x01;
inline constexpr std::uint8_t kClassSt = 0x02;
inline constexpr std::uint8_t kClassStx = 0x03;
inline constexpr std::uint8_t kClassAlu = 0x04;
inline constexpr std::uint8_t kClassJmp = 0x05;
inline constexpr std::uint8_t kClassJmp32 = 0x06;
inline constexpr std::uint8_t kClassAlu64 = 0x07;

// Source flag for ALU and jump classes.
inline constexpr std::uint8_t kSrcImm = 0x00;
inline constexpr std::uint8_t kSrcReg = 0x08;

// ALU operations (high nibble).
inline constexpr std::uint8_t kAdd = 0x00;
inline constexpr std::uint8_t kSub = 0x10;
inline constexpr std::uint8_t kMul = 0x20;
inline constexpr std::uint8_t kDiv = 0x30;
inline constexpr std::uint8_t kOr = 0x40;
inline constexpr std::uint8_t kAnd = 0x50;
inline constexpr std::uint8_t kLsh = 0x60;
inline constexpr std::uint8_t kRsh = 0x70;
inline constexpr std::uint8_t kNeg = 0x80;
inline constexpr std::uint8_t kMod = 0x90;
inline constexpr std::uint8_t kXor = 0xa0;
inline constexpr std::uint8_t kMov = 0xb0;
inline constexpr std::uint8_t kArsh = 0xc0;
inline constexpr std::uint8_t kEnd = 0xd0;

// Jump operations (high nibble).
inline constexpr std::uint8_t kJa = 0x00;
inline constexpr std::uint8_t kJeq = 0x10;
inline constexpr std::uint8_t kJgt = 0x20;
inline constexpr std::uint8_t kJge = 0x30;
inline constexpr std::uint8_t kJset = 0x40;
inline constexpr std::uint8_t kJne = 0x50;
inline constexpr std::uint8_t kJsgt = 0x60;
inline constexpr std::uint8_t kJsge = 0x70;
inline constexpr std::uint8_t kCall = 0x80;
inline constexpr std::uint8_t kExit = 0x90;
inline constexpr std::uint8_t kJlt = 0xa0;
inline constexpr std::uint8_t kJle = 0xb0;
inline constexpr std::uint8_t kJslt = 0xc0;
inline constexpr std::uint8_t kJsle = 0xd0;

// Memory access sizes and mode.
inline constexpr std::uint8_t kSizeW = 0x00;
inline constexpr std::uint8_t kSizeH = 0x08;
inline constexpr std::uint8_t kSizeB = 0x10;
inline constexpr std::uint8_t kSizeDw = 0x18;
inline constexpr std::uint8_t kModeImm = 0x00;
inline constexpr std::uint8_t kModeMem = 0x60;

// Frequently used full opcodes.
inline constexpr std::uint8_t kLddw = kClassLd | kModeImm | kSizeDw;  // 0x18
inline constexpr std::uint8_t kJaOp = kClassJmp | kJa;                // 0x05
inline constexpr std::uint8_t kCallOp = kClassJmp | kCall;            // 0x85
inline constexpr std::uint8_t kExitOp = kClassJmp | kExit;            // 0x95
inline constexpr std::uint8_t kLeOp = kClassAlu | kEnd | kSrcImm;     // 0xd4
inline constexpr std::uint8_t kBeOp = kClassAlu | kEnd | kSrcReg;     // 0xdc

constexpr std::uint8_t instruction_class(std::uint8_t opcode) {
  return opcode & 0x07;
}
constexpr std::uint8_t operation(std::uint8_t opcode) { return opcode & 0xf0; }
constexpr bool uses_register_source(std::uint8_t opcode) {
  return (opcode & kSrcReg) != 0;
}

// Number of bytes moved by a load/store opcode (1, 2, 4 or 8).
constexpr unsigned access_size(std::uint8_t opcode) {
  switch (opcode & 0x18) {
    case kSizeB: return 1;
    case kSizeH: return 2;
    case kSizeW: return 4;
    default: return 8;
  }
}

}  // namespace op

inline constexpr std::size_t kSlotSize = 8;
inline constexpr std::uint8_t kNumRegisters = 11;
inline constexpr std::uint8_t kFramePointer = 10;

// One decoded 8-byte slot. Register fields hold the raw 4-bit nibbles; values
// above 10 survive decoding and are rejected by the verifier.
struct Instruction {
  std::uint8_t opcode = 0;
  std::uint8_t dst = 0;
  std::uint8_t src = 0;
  std::int16_t offset = 0;
  std::int32_t imm = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// The two-slot 64-bit immediate load.
struct WideInstruction {
  Instruction first;
  std::int32_t imm_high = 0;

  std::uint64_t value() const {
    return static_cast<std::uint32_t>(first.imm) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(imm_high))
            << 32);
  }
  friend bool operator==(const WideInstruction&,
                         const WideInstruction&) = default;
};

// A decoded instruction together with the slot it was read from. For wide
// loads, `imm_high` carries the upper half read from slot + 1.
struct DecodedInstruction {
  std::size_t slot = 0;
  Instruction insn;
  std::int32_t imm_high = 0;

  bool is_wide() const { return insn.opcode == op::kLddw; }
  std::size_t width() const { return is_wide() ? 2 : 1; }
  WideInstruction wide() const { return {insn, imm_high}; }

  friend bool operator==(const DecodedInstruction&,
                         const DecodedInstruction&) = default;
};

// Raw little-endian bytecode: a whole number of 8-byte slots.
struct RawProgram {
  std::vector<std::uint8_t> bytes;
  std::size_t entry = 0;

  std::size_t slot_count() const { return bytes.size() / kSlotSize; }
  friend bool operator==(const RawProgram&, const RawProgram&) = default;
};

enum class DecodeErrorKind {
  kEmptyProgram,
  kMisalignedLength,
  kTruncatedWideInstruction,
  kNonZeroContinuationSlot,
};

const char* to_string(DecodeErrorKind kind);

class DecodeError : public std::runtime_error {
 public:
  DecodeError(DecodeErrorKind kind, std::size_t slot);

  DecodeErrorKind kind() const { return kind_; }
  std::size_t slot() const { return slot_; }

 private:
  DecodeErrorKind kind_;
  std::size_t slot_;
};

// Reads one slot without interpretation.
Instruction decode_slot(std::span<const std::uint8_t, kSlotSize> bytes);
void encode_slot(const Instruction& insn, std::span<std::uint8_t, kSlotSize> out);

// Splits bytecode into instructions, joining wide loads. Throws DecodeError.
std::vector<DecodedInstruction> decode_program(std::span<const std::uint8_t> bytes);
inline std::vector<DecodedInstruction> decode_program(const RawProgram& raw) {
  return decode_program(raw.bytes);
}

// Inverse of decode_program. Slot indices in the input are ignored; wide
// instructions emit their continuation slot.
RawProgram encode_program(std::span<const DecodedInstruction> instrs);
RawProgram encode_program(std::span<const Instruction> slots);

// Operand shape of a supported opcode.
enum class Form : std::uint8_t {
  kAluImm,    // dst op= imm
  kAluReg,    // dst op= src
  kNeg,       // dst = -dst
  kEndian,    // byte swap, imm = 16 | 32 | 64
  kLoadWide,  // two-slot 64-bit immediate load
  kLoad,      // dst = *(src + off)
  kStoreImm,  // *(dst + off) = imm
  kStoreReg,  // *(dst + off) = src
  kJa,
  kJumpImm,   // if (dst op imm) goto pc + 1 + off
  kJumpReg,   // if (dst op src) goto pc + 1 + off
  kCall,
  kExit,
};

struct OpcodeInfo {
  const char* mnemonic;  // nullptr for unsupported opcodes
  Form form;
};

// Returns nullptr when the opcode is outside the supported subset.
const OpcodeInfo* lookup_opcode(std::uint8_t opcode);

// True when every field the form leaves unused is zero (and, for byte swaps,
// the width is 16, 32 or 64). Register ranges are not checked here.
bool reserved_fields_clear(const Instruction& insn, Form form);

inline bool writes_destination(Form form) {
  switch (form) {
    case Form::kAluImm:
    case Form::kAluReg:
    case Form::kNeg:
    case Form::kEndian:
    case Form::kLoadWide:
    case Form::kLoad:
      return true;
    default:
      return false;
  }
}

inline bool is_branch(Form form) {
  return form == Form::kJa || form == Form::kJumpImm || form == Form::kJumpReg;
}

// Result of a lenient scan: every slot is decoded, structural problems are
// collected instead of thrown. The verifier builds on this.
struct SlotScan {
  std::vector<Instruction> slots;
  std::vector<DecodedInstruction> instructions;
  std::vector<bool> is_continuation;
  std::vector<DecodeError> problems;
};
SlotScan scan_slots(std::span<const std::uint8_t> bytes);

}  // namespace femto

#endif  // FEMTO_ISA_H_
