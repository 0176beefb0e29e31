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


#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>

#include "femto/assembler.h"
#include "femto/corpus.h"
#include "femto/verifier.h"
#include "femto/vm.h"
#include "support/program_gen.h"
#include "support/sandbox.h"

namespace femto {
namespace {

using ::testing::ElementsAre;

const ExecutionLimits kLimits(128, 64);

std::vector<VerifyError> errors_of(const RawProgram& raw, ExecutionLimits limits = kLimits) {
  return verify(raw, limits).errors;
}

RawProgram slots(std::vector<Instruction> s) {
  return encode_program(std::span<const Instruction>(s));
}

constexpr Instruction kExit{op::kExitOp, 0, 0, 0, 0};
constexpr Instruction kMovR0{0xb7, 0, 0, 0, 0};

TEST(Verifier, RegisterNibbleOutOfBounds) {
  EXPECT_THAT(errors_of(slots({{0xb7, 11, 0, 0, 1}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kRegisterOutOfBounds, 0}));
  EXPECT_THAT(errors_of(slots({kMovR0, {0xbf, 0, 15, 0, 0}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kRegisterOutOfBounds, 1}));
}

TEST(Verifier, WriteToR10) {
  EXPECT_THAT(errors_of(assemble("add r10, 8\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kWriteToReadOnlyR10, 0}));
  EXPECT_THAT(errors_of(assemble("ldxdw r10, [r1+0]\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kWriteToReadOnlyR10, 0}));
  // Reading r10 and storing through it are fine.
  EXPECT_TRUE(verify(assemble("mov r1, r10\nstxdw [r10-8], r1\nexit"), kLimits).ok());
}

TEST(Verifier, JumpPastEnd) {
  EXPECT_THAT(errors_of(assemble("ja +100\nmov r0, 0\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kJumpOutOfBounds, 0}));
  EXPECT_THAT(errors_of(assemble("mov r0, 0\njeq r0, 0, -3\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kJumpOutOfBounds, 1}));
  // One past the last slot is still outside.
  EXPECT_THAT(errors_of(assemble("ja +1\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kJumpOutOfBounds, 0}));
}

TEST(Verifier, JumpIntoWideImmediate) {
  EXPECT_THAT(errors_of(assemble("ja +1\nlddw r0, 5\nexit")),
              ElementsAre(VerifyError{VerifyErrorKind::kJumpIntoWideImmediate, 0}));
}

TEST(Verifier, EntryOnContinuationSlot) {
  RawProgram raw = assemble("lddw r0, 5\nexit");
  raw.entry = 1;
  EXPECT_THAT(errors_of(raw), ElementsAre(VerifyError{VerifyErrorKind::kJumpIntoWideImmediate, 1}));
  raw.entry = 3;
  EXPECT_THAT(errors_of(raw), ElementsAre(VerifyError{VerifyErrorKind::kJumpOutOfBounds, 0}));
}

TEST(Verifier, UnknownOpcode) {
  EXPECT_THAT(errors_of(slots({{0xff, 0, 0, 0, 0}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kUnknownOpcode, 0}));
  // A known opcode with garbage in a reserved field is not a real instruction.
  EXPECT_THAT(errors_of(slots({kMovR0, {op::kExitOp, 0, 0, 0, 1}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kUnknownOpcode, 1}));
  EXPECT_THAT(errors_of(slots({{op::kLeOp, 1, 0, 0, 8}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kUnknownOpcode, 0}));
}

TEST(Verifier, TruncatedWideLoad) {
  EXPECT_THAT(errors_of(slots({kMovR0, kExit, {op::kLddw, 1, 0, 0, 7}})),
              ElementsAre(VerifyError{VerifyErrorKind::kTruncatedProgram, 2}));
}

TEST(Verifier, DirtyContinuationSlot) {
  EXPECT_THAT(errors_of(slots({{op::kLddw, 1, 0, 0, 7}, {0, 1, 0, 0, 0}, kExit})),
              ElementsAre(VerifyError{VerifyErrorKind::kUnknownOpcode, 1}));
}

TEST(Verifier, EmptyProgram) {
  EXPECT_THAT(errors_of(RawProgram{}), ElementsAre(VerifyError{VerifyErrorKind::kTruncatedProgram, 0}));
}

TEST(Verifier, MissingExit) {
  EXPECT_THAT(errors_of(assemble("mov r0, 0\nmov r1, 1")),
              ElementsAre(VerifyError{VerifyErrorKind::kMissingExit, 1}));
  // An exit exists but the last slot falls off the end.
  EXPECT_THAT(errors_of(assemble("exit\nmov r0, 0")),
              ElementsAre(VerifyError{VerifyErrorKind::kMissingExit, 1}));
  // A trailing backward jump is a legal terminator.
  EXPECT_TRUE(verify(assemble("l: jeq r1, 0, e\nja l\ne: exit\nja l"), kLimits).ok());
}

TEST(Verifier, ProgramTooLong) {
  std::string src;
  for (int i = 0; i < 16; ++i) src += "mov r0, 0\n";
  src += "exit";
  auto errs = errors_of(assemble(src), ExecutionLimits(16, 4));
  EXPECT_THAT(errs, ElementsAre(VerifyError{VerifyErrorKind::kProgramTooLong, 16}));
  EXPECT_TRUE(verify(assemble(src), ExecutionLimits(17, 4)).ok());
}

TEST(Verifier, TooManyBranches) {
  std::string src;
  for (int i = 0; i < 5; ++i) src += "ja +0\n";
  src += "exit";
  EXPECT_THAT(errors_of(assemble(src), ExecutionLimits(16, 4)),
              ElementsAre(VerifyError{VerifyErrorKind::kTooManyBranches, 4}));
  auto ok = verify(assemble(src), ExecutionLimits(16, 5));
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(ok.program->branch_count(), 5u);
}

TEST(Verifier, CallAndExitAreNotBranches) {
  auto r = verify(assemble("call 2\ncall 99\nexit"), ExecutionLimits(16, 1));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.program->branch_count(), 0u);
  EXPECT_EQ(r.program->syscalls_used(), (std::set<std::uint32_t>{2, 99}));
}

TEST(Verifier, MinimalAccept) {
  auto r = verify(assemble("mov r0, 0\nexit"), ExecutionLimits(16, 4));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.program->branch_count(), 0u);
  EXPECT_EQ(r.program->limits(), ExecutionLimits(16, 4));
}

TEST(Verifier, AccumulatesIndependentDefects) {
  // Four defects on four different slots.
  RawProgram raw = slots({
      {0xb7, 12, 0, 0, 0},  // register nibble
      {0x07, 10, 0, 0, 1},  // add r10, 1
      {0xee, 0, 0, 0, 0},   // unknown
      {op::kJaOp, 0, 0, 50, 0},
      kExit,
  });
  EXPECT_THAT(errors_of(raw), ElementsAre(VerifyError{VerifyErrorKind::kRegisterOutOfBounds, 0},
                                          VerifyError{VerifyErrorKind::kWriteToReadOnlyR10, 1},
                                          VerifyError{VerifyErrorKind::kUnknownOpcode, 2},
                                          VerifyError{VerifyErrorKind::kJumpOutOfBounds, 3}));
}

TEST(Verifier, DefectCountMatchesInjectedDefects) {
  // Random clean programs with k single-slot defects spliced in.
  std::mt19937_64 rng(31);
  const std::vector<Instruction> defects = {
      {0xb7, 13, 0, 0, 0}, {0xbf, 10, 1, 0, 0}, {0xfe, 0, 0, 0, 0}, {op::kJaOp, 0, 0, 4000, 0}};
  for (int round = 0; round < 300; ++round) {
    std::vector<Instruction> prog;
    std::size_t k = 0;
    const std::size_t len = 5 + rng() % 20;
    for (std::size_t i = 0; i < len; ++i) {
      if (rng() % 4 == 0) {
        prog.push_back(defects[rng() % defects.size()]);
        ++k;
      } else {
        prog.push_back({0x07, static_cast<std::uint8_t>(rng() % 10), 0, 0, 1});
      }
    }
    prog.push_back(kExit);
    ASSERT_EQ(errors_of(slots(prog), ExecutionLimits(64, 64)).size(), k);
  }
}

TEST(Verifier, FuelBound) {
  EXPECT_EQ(fuel_bound(ExecutionLimits(100, 10)), 1000u);
  EXPECT_EQ(fuel_bound(ExecutionLimits(1, 1)), 1u);
  EXPECT_EQ(fuel_bound(ExecutionLimits(1ull << 20, 1ull << 20)), 1ull << 40);
  EXPECT_THROW(ExecutionLimits(0, 1), std::invalid_argument);
  EXPECT_THROW(ExecutionLimits(1, 0), std::invalid_argument);
  EXPECT_THROW(ExecutionLimits(1ull << 33, 1ull << 31), std::invalid_argument);
  EXPECT_NO_THROW(ExecutionLimits(1ull << 32, (1ull << 32) - 1));
}

TEST(Verifier, CorpusVerifies) {
  for (auto name : corpus::names()) {
    auto r = verify(corpus::package(name).text, kLimits);
    EXPECT_TRUE(r.ok()) << name << ": " << (r.ok() ? "" : to_string(r.errors.front()));
  }
}

TEST(Verifier, FletcherCounts) {
  auto r = verify(corpus::package(corpus::kFletcher32).text, kLimits);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.program->slots().size(), 54u);
  EXPECT_EQ(r.program->branch_count(), 5u);
}

TEST(Verifier, Deterministic) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 200; ++k) {
    std::vector<Instruction> s;
    for (int i = 0; i < 10; ++i) s.push_back(testing::random_slot(rng));
    RawProgram raw = slots(s);
    ASSERT_EQ(verify(raw, kLimits).errors, verify(raw, kLimits).errors);
  }
}

bool structural_fault(FaultKind kind) {
  return kind == FaultKind::kUnreachable;
}

TEST(Verifier, AcceptedProgramsOnlyFaultOnRuntimeConditions) {
  // Valid-by-construction programs, then the same with random slots mutated.
  std::mt19937_64 rng(33);
  const auto syscalls = register_syscall(SyscallTable{}, 2, [](CallContext&, const SyscallArgs& a) {
                          return a[0] * 3;
                        }).with_granted({2});
  int accepted = 0;
  for (int k = 0; k < 3000; ++k) {
    auto instrs = testing::random_instructions(rng, {.syscalls = {2, 3, 77}});
    RawProgram raw = encode_program(instrs);
    if (k % 2 == 1) {
      std::vector<Instruction> s;
      for (std::size_t i = 0; i < raw.slot_count(); ++i) {
        s.push_back(decode_slot(std::span(raw.bytes).subspan(i * 8).first<8>()));
      }
      s[rng() % s.size()] = testing::random_slot(rng);
      raw = slots(s);
    }
    auto r = verify(raw, ExecutionLimits(128, 64));
    if (!r.ok()) continue;
    ++accepted;
    testing::Sandbox box;
    ExecOutcome out = box.run(*r.program, syscalls);
    if (auto* f = std::get_if<Fault>(&out)) {
      ASSERT_FALSE(structural_fault(f->kind)) << disassemble(raw);
    }
  }
  // Every unmutated program must get through.
  EXPECT_GE(accepted, 1500);
}

}  // namespace
}  // namespace femto
