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

#include "femto/verifier.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace femto {

ExecutionLimits::ExecutionLimits(std::uint64_t max_instructions,
                                 std::uint64_t max_branches)
    : max_instructions_(max_instructions), max_branches_(max_branches) {
  if (max_instructions == 0 || max_branches == 0) {
    throw std::invalid_argument("execution limits must be >= 1");
  }
  if (max_instructions > std::numeric_limits<std::uint64_t>::max() / max_branches) {
    throw std::invalid_argument("instruction budget overflows 64 bits");
  }
}

std::uint64_t fuel_bound(const ExecutionLimits& limits) {
  return limits.max_instructions() * limits.max_branches();
}

const char* to_string(VerifyErrorKind kind) {
  switch (kind) {
    case VerifyErrorKind::kRegisterOutOfBounds: return "RegisterOutOfBounds";
    case VerifyErrorKind::kWriteToReadOnlyR10: return "WriteToReadOnlyR10";
    case VerifyErrorKind::kJumpOutOfBounds: return "JumpOutOfBounds";
    case VerifyErrorKind::kJumpIntoWideImmediate: return "JumpIntoWideImmediate";
    case VerifyErrorKind::kUnknownOpcode: return "UnknownOpcode";
    case VerifyErrorKind::kProgramTooLong: return "ProgramTooLong";
    case VerifyErrorKind::kTooManyBranches: return "TooManyBranches";
    case VerifyErrorKind::kMissingExit: return "MissingExit";
    case VerifyErrorKind::kTruncatedProgram: return "TruncatedProgram";
  }
  return "?";
}

std::string to_string(const VerifyError& error) {
  return "slot:" + std::to_string(error.slot) + " " + to_string(error.kind);
}

namespace {

VerifyErrorKind wrap(DecodeErrorKind kind) {
  return kind == DecodeErrorKind::kNonZeroContinuationSlot
             ? VerifyErrorKind::kUnknownOpcode
             : VerifyErrorKind::kTruncatedProgram;
}

}  // namespace

VerifyResult verify(const RawProgram& raw, const ExecutionLimits& limits) {
  VerifyResult result;
  SlotScan scan = scan_slots(raw.bytes);
  const std::size_t n = scan.slots.size();

  std::vector<VerifyError> per_slot;
  bool truncated_tail = false;
  for (const DecodeError& problem : scan.problems) {
    per_slot.push_back({wrap(problem.kind()), problem.slot()});
    if (problem.kind() == DecodeErrorKind::kTruncatedWideInstruction) {
      truncated_tail = true;
    }
  }

  // Jump targets must land on an instruction boundary inside the program.
  auto check_target = [&](std::int64_t target, std::size_t at) {
    if (target < 0 || static_cast<std::uint64_t>(target) >= n) {
      per_slot.push_back({VerifyErrorKind::kJumpOutOfBounds, at});
    } else if (scan.is_continuation[static_cast<std::size_t>(target)]) {
      per_slot.push_back({VerifyErrorKind::kJumpIntoWideImmediate, at});
    }
  };
  if (n > 0) check_target(static_cast<std::int64_t>(raw.entry), raw.entry < n ? raw.entry : 0);

  std::size_t branches = 0;
  std::optional<std::size_t> first_excess_branch;
  bool has_exit = false;
  std::set<std::uint32_t> syscalls;

  for (const DecodedInstruction& d : scan.instructions) {
    Instruction insn = d.insn;
    if (insn.dst >= kNumRegisters) {
      per_slot.push_back({VerifyErrorKind::kRegisterOutOfBounds, d.slot});
      insn.dst = 0;
    }
    if (insn.src >= kNumRegisters) {
      per_slot.push_back({VerifyErrorKind::kRegisterOutOfBounds, d.slot});
      insn.src = 0;
    }
    const OpcodeInfo* info = lookup_opcode(insn.opcode);
    if (info == nullptr || !reserved_fields_clear(insn, info->form)) {
      per_slot.push_back({VerifyErrorKind::kUnknownOpcode, d.slot});
      continue;
    }
    if (writes_destination(info->form) && insn.dst == kFramePointer) {
      per_slot.push_back({VerifyErrorKind::kWriteToReadOnlyR10, d.slot});
    }
    if (is_branch(info->form)) {
      ++branches;
      if (branches > limits.max_branches() && !first_excess_branch) {
        first_excess_branch = d.slot;
      }
      check_target(static_cast<std::int64_t>(d.slot) + 1 + insn.offset, d.slot);
    }
    if (info->form == Form::kExit) has_exit = true;
    if (info->form == Form::kCall) {
      syscalls.insert(static_cast<std::uint32_t>(insn.imm));
    }
  }
  std::stable_sort(per_slot.begin(), per_slot.end(),
                   [](const VerifyError& a, const VerifyError& b) {
                     return a.slot < b.slot;
                   });
  result.errors = std::move(per_slot);

  if (n > limits.max_instructions()) {
    result.errors.push_back({VerifyErrorKind::kProgramTooLong,
                             static_cast<std::size_t>(limits.max_instructions())});
  }
  if (first_excess_branch) {
    result.errors.push_back({VerifyErrorKind::kTooManyBranches, *first_excess_branch});
  }
  if (n > 0 && !scan.instructions.empty()) {
    // The last instruction must not fall through past the end.
    const Instruction& last = scan.instructions.back().insn;
    const bool terminal = last.opcode == op::kExitOp || last.opcode == op::kJaOp;
    if (!has_exit || (!terminal && !truncated_tail)) {
      result.errors.push_back({VerifyErrorKind::kMissingExit, n - 1});
    }
  }
  if (!result.errors.empty()) return result;

  VerifiedProgram program(limits);
  program.slots_ = std::move(scan.slots);
  program.instructions_ = std::move(scan.instructions);
  program.entry_ = raw.entry;
  program.branch_count_ = branches;
  program.syscalls_used_ = std::move(syscalls);
  result.program = std::move(program);
  return result;
}

}  // namespace femto
