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


#include <gtest/gtest.h>

#include <random>
#include <string>

#include "femto/assembler.h"
#include "femto/corpus.h"
#include "femto/package.h"
#include "femto/verifier.h"
#include "support/program_gen.h"

namespace femto {
namespace {

AsmErrorKind asm_error(const std::string& source) {
  try {
    assemble(source);
  } catch (const AsmError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "assembled: " << source;
  return AsmErrorKind::kEmptyProgram;
}

TEST(Assembler, MinimalProgramIsTwoSlots) {
  RawProgram raw = assemble("mov r0, 0\nexit");
  EXPECT_EQ(raw.slot_count(), 2u);
  EXPECT_EQ(raw.bytes, (std::vector<std::uint8_t>{0xb7, 0, 0, 0, 0, 0, 0, 0,  //
                                                  0x95, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(Assembler, UndefinedLabel) {
  EXPECT_EQ(asm_error("ja target\nexit"), AsmErrorKind::kUndefinedLabel);
}

TEST(Assembler, UnknownMnemonic) {
  EXPECT_EQ(asm_error("frobnicate r0, 1\nexit"), AsmErrorKind::kUnknownMnemonic);
}

TEST(Assembler, ImmediateOutOfRange) {
  EXPECT_EQ(asm_error("mov r0, 0x100000000\nexit"), AsmErrorKind::kImmediateOutOfRange);
  EXPECT_EQ(asm_error("ldxw r0, [r1+40000]\nexit"), AsmErrorKind::kImmediateOutOfRange);
}

TEST(Assembler, DuplicateLabel) {
  EXPECT_EQ(asm_error("a:\na:\nexit"), AsmErrorKind::kDuplicateLabel);
}

TEST(Assembler, ReportsOneBasedLine) {
  try {
    assemble("mov r0, 1\n\nbogus\nexit");
    FAIL();
  } catch (const AsmError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Assembler, LabelsResolveRelativeToNextSlot) {
  RawProgram raw = assemble(
      "top:\n"
      "  jeq r1, 0, done\n"
      "  lddw r2, 0x1122334455667788\n"
      "  ja top\n"
      "done:\n"
      "  exit\n");
  auto prog = decode_program(raw);
  ASSERT_EQ(prog.size(), 4u);
  EXPECT_EQ(prog[0].insn.offset, 3);   // 0 + 1 + 3 = slot 4
  EXPECT_EQ(prog[2].insn.offset, -4);  // 3 + 1 - 4 = slot 0
}

TEST(Assembler, Disassembles) {
  EXPECT_EQ(disassemble(assemble("exit")), "exit\n");
  EXPECT_EQ(disassemble(assemble("add r2, 7\nexit")), "add r2, 7\nexit\n");
  EXPECT_EQ(disassemble(assemble("stxdw [r10-8], r1\nexit")), "stxdw [r10-8], r1\nexit\n");
  EXPECT_EQ(disassemble(assemble("be16 r3\nexit")), "be16 r3\nexit\n");
}

TEST(Assembler, PackageDirectives) {
  ContainerPackage pkg = assemble_package(
      ".syscalls 2, 3\n"
      ".context write\n"
      ".entry start\n"
      ".rodata\n"
      ".word 360\n"
      ".ascii \"ab\\n\"\n"
      ".data\n"
      ".zero 4\n"
      ".text\n"
      "  exit\n"
      "start:\n"
      "  mov r0, 1\n"
      "  exit\n");
  EXPECT_EQ(pkg.required_syscalls, (std::vector<std::uint32_t>{2, 3}));
  EXPECT_EQ(pkg.required_regions, kRequireContextWrite);
  EXPECT_TRUE(pkg.needs_context_read());
  EXPECT_EQ(pkg.text.entry, 1u);
  EXPECT_EQ(pkg.rodata, (std::vector<std::uint8_t>{0x68, 0x01, 0, 0, 'a', 'b', '\n'}));
  EXPECT_EQ(pkg.data, std::vector<std::uint8_t>(4, 0));
}

TEST(Assembler, BadDirective) {
  EXPECT_THROW(assemble_package(".context maybe\nexit"), AsmError);
  EXPECT_THROW(assemble_package(".frob\nexit"), AsmError);
  EXPECT_THROW(assemble_package(".byte 1\nexit"), AsmError);  // data in .text
}

TEST(Assembler, PackageDisassemblyRoundTrips) {
  for (auto name : corpus::names()) {
    ContainerPackage pkg = corpus::package(name);
    EXPECT_EQ(assemble_package(disassemble_package(pkg)), pkg) << name;
  }
}

TEST(Assembler, CorpusSourcesMatchCommittedPackages) {
  for (auto name : corpus::names()) {
    EXPECT_EQ(serialize_package(assemble_package(corpus::source(name))),
              serialize_package(corpus::package(name)))
        << name;
  }
}

TEST(Assembler, DisassemblyRoundTripsAcceptedPrograms) {
  std::mt19937_64 rng(21);
  int accepted = 0;
  for (int k = 0; k < 1000; ++k) {
    RawProgram raw = testing::random_program(rng, {.syscalls = {2, 3, 99}});
    if (!verify(raw, ExecutionLimits(4096, 4096)).ok()) continue;
    ++accepted;
    ASSERT_EQ(assemble(disassemble(raw)), raw) << disassemble(raw);
  }
  EXPECT_EQ(accepted, 1000);
}

TEST(Assembler, RawSlotsSurviveDisassembly) {
  // Not verifiable, but the text form must still be lossless.
  std::mt19937_64 rng(22);
  for (int k = 0; k < 500; ++k) {
    std::vector<Instruction> slots{testing::random_slot(rng), {op::kExitOp, 0, 0, 0, 0}};
    if (slots[0].opcode == op::kLddw) continue;
    RawProgram raw = encode_program(std::span<const Instruction>(slots));
    ASSERT_EQ(assemble(disassemble(raw)), raw) << disassemble(raw);
  }
}

}  // namespace
}  // namespace femto
