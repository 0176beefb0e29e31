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

// Textual assembler and disassembler. The grammar is documented in
// docs/assembly.md.

#ifndef FEMTO_ASSEMBLER_H_
#define FEMTO_ASSEMBLER_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "femto/isa.h"
#include "femto/package.h"

namespace femto {

enum class AsmErrorKind {
  kUnknownMnemonic,
  kUndefinedLabel,
  kImmediateOutOfRange,
  kDuplicateLabel,
  kBadOperand,
  kBadDirective,
  kEmptyProgram,
};

const char* to_string(AsmErrorKind kind);

class AsmError : public std::runtime_error {
 public:
  AsmError(AsmErrorKind kind, std::size_t line, const std::string& detail);

  AsmErrorKind kind() const { return kind_; }
  // 1-based source line.
  std::size_t line() const { return line_; }

 private:
  AsmErrorKind kind_;
  std::size_t line_;
};

// Assembles the text section only.
RawProgram assemble(std::string_view source);

// Assembles text plus the .rodata/.data sections and the .syscalls/.context
// requirement directives into a package.
ContainerPackage assemble_package(std::string_view source);

// One instruction per line. Opcodes outside the supported subset are emitted
// as `.raw 0x<16 hex digits>` so that any decodable program round-trips.
// Throws DecodeError.
std::string disassemble(const RawProgram& raw);
std::string disassemble_instruction(const DecodedInstruction& d);

// Full package as assembler source: requirement directives, text, and the
// data sections as .byte lines. assemble_package() inverts it.
std::string disassemble_package(const ContainerPackage& pkg);

}  // namespace femto

#endif  // FEMTO_ASSEMBLER_H_
