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

// Pre-flight checker. A program is verified once, before its first execution;
// the resulting VerifiedProgram is the only input the interpreter accepts.

#ifndef FEMTO_VERIFIER_H_
#define FEMTO_VERIFIER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "femto/isa.h"

namespace femto {

// Static limits: N_i (program length in slots) and N_b (branch instructions).
// Their product is the runtime instruction budget.
class ExecutionLimits {
 public:
  // Throws std::invalid_argument unless both are >= 1 and the product fits in
  // 64 bits.
  ExecutionLimits(std::uint64_t max_instructions, std::uint64_t max_branches);

  std::uint64_t max_instructions() const { return max_instructions_; }
  std::uint64_t max_branches() const { return max_branches_; }

  friend bool operator==(const ExecutionLimits&,
                         const ExecutionLimits&) = default;

 private:
  std::uint64_t max_instructions_;
  std::uint64_t max_branches_;
};

// N_i * N_b.
std::uint64_t fuel_bound(const ExecutionLimits& limits);

enum class VerifyErrorKind {
  kRegisterOutOfBounds,
  kWriteToReadOnlyR10,
  kJumpOutOfBounds,
  kJumpIntoWideImmediate,
  kUnknownOpcode,
  kProgramTooLong,
  kTooManyBranches,
  kMissingExit,
  kTruncatedProgram,
};

const char* to_string(VerifyErrorKind kind);

struct VerifyError {
  VerifyErrorKind kind;
  std::size_t slot;

  friend bool operator==(const VerifyError&, const VerifyError&) = default;
};

std::string to_string(const VerifyError& error);

class VerifiedProgram;
struct VerifyResult;

VerifyResult verify(const RawProgram& raw, const ExecutionLimits& limits);

// Bytecode that passed every pre-flight check. Only verify() constructs one.
class VerifiedProgram {
 public:
  const std::vector<Instruction>& slots() const { return slots_; }
  const std::vector<DecodedInstruction>& instructions() const {
    return instructions_;
  }
  const ExecutionLimits& limits() const { return limits_; }
  std::size_t entry() const { return entry_; }
  std::size_t branch_count() const { return branch_count_; }
  const std::set<std::uint32_t>& syscalls_used() const { return syscalls_used_; }

 private:
  friend VerifyResult verify(const RawProgram&, const ExecutionLimits&);
  explicit VerifiedProgram(ExecutionLimits limits) : limits_(limits) {}

  std::vector<Instruction> slots_;
  std::vector<DecodedInstruction> instructions_;
  ExecutionLimits limits_;
  std::size_t entry_ = 0;
  std::size_t branch_count_ = 0;
  std::set<std::uint32_t> syscalls_used_;
};

// Either a program or every error found, in slot order followed by the
// whole-program checks.
struct VerifyResult {
  std::optional<VerifiedProgram> program;
  std::vector<VerifyError> errors;

  bool ok() const { return program.has_value(); }
};

}  // namespace femto

#endif  // FEMTO_VERIFIER_H_
