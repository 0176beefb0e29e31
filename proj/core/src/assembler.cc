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

#include "femto/assembler.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "femto/bytes.h"

namespace femto {

const char* to_string(AsmErrorKind kind) {
  switch (kind) {
    case AsmErrorKind::kUnknownMnemonic: return "UnknownMnemonic";
    case AsmErrorKind::kUndefinedLabel: return "UndefinedLabel";
    case AsmErrorKind::kImmediateOutOfRange: return "ImmediateOutOfRange";
    case AsmErrorKind::kDuplicateLabel: return "DuplicateLabel";
    case AsmErrorKind::kBadOperand: return "BadOperand";
    case AsmErrorKind::kBadDirective: return "BadDirective";
    case AsmErrorKind::kEmptyProgram: return "EmptyProgram";
  }
  return "?";
}

AsmError::AsmError(AsmErrorKind kind, std::size_t line,
                   const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " +
                         to_string(kind) + ": " + detail),
      kind_(kind),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_' &&
      s[0] != '.') {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

// Strips a trailing comment, ignoring comment characters inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (quoted) continue;
    if (c == ';' || c == '#') return line.substr(0, i);
    if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string_view> split_operands(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '[') ++depth;
    if (i < s.size() && s[i] == ']') --depth;
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

struct Number {
  bool negative = false;
  std::uint64_t magnitude = 0;
};

std::optional<Number> parse_number(std::string_view s) {
  Number n;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    n.negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n.magnitude, base);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return n;
}

class Assembler {
 public:
  explicit Assembler(std::string_view source) : source_(source) {}

  ContainerPackage run() {
    first_pass();
    ContainerPackage pkg;
    std::vector<Instruction> slots;
    slots.reserve(slot_count_);
    for (const Pending& p : pending_) encode(p, slots);
    if (slots.empty()) {
      throw AsmError(AsmErrorKind::kEmptyProgram, 0, "no instructions");
    }
    pkg.text = encode_program(std::span<const Instruction>(slots));
    if (entry_) {
      auto n = parse_number(entry_->second);
      if (n && !n->negative) {
        pkg.text.entry = n->magnitude;
      } else {
        auto it = labels_.find(entry_->second);
        if (it == labels_.end()) {
          fail(AsmErrorKind::kUndefinedLabel, entry_->first, entry_->second);
        }
        pkg.text.entry = it->second;
      }
    }
    pkg.rodata = std::move(rodata_);
    pkg.data = std::move(data_);
    pkg.required_syscalls = std::move(syscalls_);
    pkg.required_regions = regions_;
    return pkg;
  }

 private:
  enum class Section { kText, kRodata, kData };

  struct Pending {
    std::size_t line;
    std::size_t slot;
    std::string mnemonic;
    std::vector<std::string> operands;
  };

  [[noreturn]] void fail(AsmErrorKind kind, std::size_t line,
                         const std::string& detail) const {
    throw AsmError(kind, line, detail);
  }

  void first_pass() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source_.size()) {
      std::size_t end = source_.find('\n', pos);
      if (end == std::string_view::npos) end = source_.size();
      ++line_no;
      handle_line(strip_comment(source_.substr(pos, end - pos)), line_no);
      pos = end + 1;
    }
  }

  void handle_line(std::string_view line, std::size_t line_no) {
    line = trim(line);
    // Labels: identifier followed by ':'.
    while (true) {
      std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) break;
      std::string_view label = trim(line.substr(0, colon));
      if (!is_identifier(label) || label.front() == '.') break;
      if (section_ != Section::kText) {
        fail(AsmErrorKind::kBadDirective, line_no, "label outside .text");
      }
      if (!labels_.emplace(std::string(label), slot_count_).second) {
        fail(AsmErrorKind::kDuplicateLabel, line_no, std::string(label));
      }
      line = trim(line.substr(colon + 1));
    }
    if (line.empty()) return;

    std::size_t split = 0;
    while (split < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[split]))) {
      ++split;
    }
    std::string mnemonic(line.substr(0, split));
    std::transform(mnemonic.begin(), mnemonic.end(), mnemonic.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::string_view rest = trim(line.substr(split));

    if (mnemonic.front() == '.') {
      directive(mnemonic, rest, line_no);
      return;
    }
    if (section_ != Section::kText) {
      fail(AsmErrorKind::kBadDirective, line_no,
           "instruction outside .text section");
    }
    Pending p{line_no, slot_count_, mnemonic, {}};
    for (auto operand : split_operands(rest)) p.operands.emplace_back(operand);
    slot_count_ += (mnemonic == "lddw") ? 2 : 1;
    pending_.push_back(std::move(p));
  }

  std::vector<std::uint8_t>& section_bytes(std::size_t line_no) {
    if (section_ == Section::kRodata) return rodata_;
    if (section_ == Section::kData) return data_;
    fail(AsmErrorKind::kBadDirective, line_no,
         "data directive in .text section");
  }

  void directive(const std::string& name, std::string_view rest,
                 std::size_t line_no) {
    if (name == ".text") {
      section_ = Section::kText;
    } else if (name == ".rodata") {
      section_ = Section::kRodata;
    } else if (name == ".data") {
      section_ = Section::kData;
    } else if (name == ".syscalls") {
      for (auto operand : split_operands(rest)) {
        auto n = parse_number(operand);
        if (!n || n->negative || n->magnitude > UINT32_MAX) {
          fail(AsmErrorKind::kImmediateOutOfRange, line_no,
               std::string(operand));
        }
        syscalls_.push_back(static_cast<std::uint32_t>(n->magnitude));
      }
    } else if (name == ".context") {
      if (rest == "read") {
        regions_ |= kRequireContextRead;
      } else if (rest == "write") {
        regions_ |= kRequireContextWrite;
      } else {
        fail(AsmErrorKind::kBadDirective, line_no, "expected read|write");
      }
    } else if (name == ".entry") {
      if (rest.empty()) fail(AsmErrorKind::kBadDirective, line_no, ".entry needs a target");
      entry_.emplace(line_no, std::string(rest));
    } else if (name == ".raw") {
      if (section_ != Section::kText) {
        fail(AsmErrorKind::kBadDirective, line_no, ".raw outside .text");
      }
      pending_.push_back({line_no, slot_count_, ".raw", {std::string(rest)}});
      ++slot_count_;
    } else if (name == ".byte" || name == ".half" || name == ".word" ||
               name == ".dword") {
      const unsigned width = name == ".byte"   ? 1
                             : name == ".half" ? 2
                             : name == ".word" ? 4
                                               : 8;
      auto& out = section_bytes(line_no);
      for (auto operand : split_operands(rest)) {
        auto n = parse_number(operand);
        const std::uint64_t limit =
            width == 8 ? UINT64_MAX : (std::uint64_t{1} << (8 * width)) - 1;
        if (!n || n->magnitude > limit) {
          fail(AsmErrorKind::kImmediateOutOfRange, line_no,
               std::string(operand));
        }
        std::uint64_t bits = n->negative ? (0 - n->magnitude) : n->magnitude;
        for (unsigned i = 0; i < width; ++i) {
          out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
        }
      }
    } else if (name == ".zero") {
      auto n = parse_number(rest);
      if (!n || n->negative || n->magnitude > (1u << 20)) {
        fail(AsmErrorKind::kImmediateOutOfRange, line_no, std::string(rest));
      }
      auto& out = section_bytes(line_no);
      out.insert(out.end(), n->magnitude, 0);
    } else if (name == ".ascii") {
      auto& out = section_bytes(line_no);
      append_string(rest, out, line_no);
    } else {
      fail(AsmErrorKind::kBadDirective, line_no, name);
    }
  }

  void append_string(std::string_view lit, std::vector<std::uint8_t>& out,
                     std::size_t line_no) {
    if (lit.size() < 2 || lit.front() != '"' || lit.back() != '"') {
      fail(AsmErrorKind::kBadDirective, line_no, "expected quoted string");
    }
    lit = lit.substr(1, lit.size() - 2);
    for (std::size_t i = 0; i < lit.size(); ++i) {
      char c = lit[i];
      if (c != '\\') {
        out.push_back(static_cast<std::uint8_t>(c));
        continue;
      }
      if (++i >= lit.size()) {
        fail(AsmErrorKind::kBadDirective, line_no, "dangling escape");
      }
      switch (lit[i]) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '0': out.push_back(0); break;
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        case 'x': {
          auto hex = i + 2 < lit.size() ? from_hex(lit.substr(i + 1, 2))
                                        : std::nullopt;
          if (!hex || hex->size() != 1) {
            fail(AsmErrorKind::kBadDirective, line_no, "bad \\x escape");
          }
          out.push_back((*hex)[0]);
          i += 2;
          break;
        }
        default:
          fail(AsmErrorKind::kBadDirective, line_no, "unknown escape");
      }
    }
  }

  // Operand helpers -------------------------------------------------------

  std::uint8_t reg(const Pending& p, std::size_t index) const {
    if (index >= p.operands.size()) {
      fail(AsmErrorKind::kBadOperand, p.line, "missing register operand");
    }
    std::string_view s = p.operands[index];
    if (s.size() < 2 || (s[0] != 'r' && s[0] != 'R')) {
      fail(AsmErrorKind::kBadOperand, p.line, "expected register: " + std::string(s));
    }
    auto n = parse_number(s.substr(1));
    if (!n || n->negative || n->magnitude > 10 || s[1] == '+' || s[1] == '-') {
      fail(AsmErrorKind::kBadOperand, p.line, "bad register: " + std::string(s));
    }
    return static_cast<std::uint8_t>(n->magnitude);
  }

  static bool looks_like_register(std::string_view s) {
    return s.size() >= 2 && (s[0] == 'r' || s[0] == 'R') &&
           std::isdigit(static_cast<unsigned char>(s[1]));
  }

  std::int32_t imm32(const Pending& p, std::string_view s) const {
    auto n = parse_number(s);
    if (!n) fail(AsmErrorKind::kBadOperand, p.line, "bad immediate: " + std::string(s));
    const bool fits = n->negative ? n->magnitude <= (std::uint64_t{1} << 31)
                                  : n->magnitude <= UINT32_MAX;
    if (!fits) {
      fail(AsmErrorKind::kImmediateOutOfRange, p.line, std::string(s));
    }
    std::uint64_t bits = n->negative ? (0 - n->magnitude) : n->magnitude;
    return static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
  }

  std::int16_t offset16(const Pending& p, const Number& n,
                        std::string_view text) const {
    const bool fits = n.negative ? n.magnitude <= 32768 : n.magnitude <= 32767;
    if (!fits) fail(AsmErrorKind::kImmediateOutOfRange, p.line, std::string(text));
    return static_cast<std::int16_t>(n.negative ? -static_cast<std::int64_t>(n.magnitude)
                                                : static_cast<std::int64_t>(n.magnitude));
  }

  // Parses "[rN]", "[rN+off]" or "[rN-off]".
  std::pair<std::uint8_t, std::int16_t> memory(const Pending& p,
                                               std::size_t index) const {
    if (index >= p.operands.size()) {
      fail(AsmErrorKind::kBadOperand, p.line, "missing memory operand");
    }
    std::string_view s = p.operands[index];
    if (s.size() < 4 || s.front() != '[' || s.back() != ']') {
      fail(AsmErrorKind::kBadOperand, p.line, "expected [reg+off]: " + std::string(s));
    }
    s = trim(s.substr(1, s.size() - 2));
    std::size_t sign = s.find_first_of("+-");
    Pending tmp{p.line, p.slot, p.mnemonic, {std::string(trim(s.substr(0, sign)))}};
    std::uint8_t base = reg(tmp, 0);
    std::int16_t off = 0;
    if (sign != std::string_view::npos) {
      std::string_view text = s.substr(sign);
      std::string compact;
      for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
      }
      auto n = parse_number(compact);
      if (!n) fail(AsmErrorKind::kBadOperand, p.line, "bad offset: " + std::string(text));
      off = offset16(p, *n, text);
    }
    return {base, off};
  }

  std::int16_t jump_target(const Pending& p, std::size_t index) const {
    if (index >= p.operands.size()) {
      fail(AsmErrorKind::kBadOperand, p.line, "missing jump target");
    }
    std::string_view s = p.operands[index];
    if (!s.empty() && (s[0] == '+' || s[0] == '-' ||
                       std::isdigit(static_cast<unsigned char>(s[0])))) {
      auto n = parse_number(s);
      if (!n) fail(AsmErrorKind::kBadOperand, p.line, "bad offset: " + std::string(s));
      return offset16(p, *n, s);
    }
    auto it = labels_.find(std::string(s));
    if (it == labels_.end()) {
      fail(AsmErrorKind::kUndefinedLabel, p.line, std::string(s));
    }
    std::int64_t rel = static_cast<std::int64_t>(it->second) -
                       static_cast<std::int64_t>(p.slot + 1);
    Number n{rel < 0, static_cast<std::uint64_t>(rel < 0 ? -rel : rel)};
    return offset16(p, n, s);
  }

  void expect_operands(const Pending& p, std::size_t count) const {
    if (p.operands.size() != count) {
      fail(AsmErrorKind::kBadOperand, p.line,
           p.mnemonic + " expects " + std::to_string(count) + " operand(s)");
    }
  }

  void encode(const Pending& p, std::vector<Instruction>& out) const {
    if (p.mnemonic == ".raw") {
      auto bytes = from_hex(p.operands.at(0));
      if (!bytes || bytes->size() != kSlotSize) {
        fail(AsmErrorKind::kBadDirective, p.line, ".raw expects 8 bytes of hex");
      }
      out.push_back(decode_slot(std::span<const std::uint8_t, kSlotSize>(bytes->data(), kSlotSize)));
      return;
    }

    // Byte swaps carry their width in the mnemonic.
    static const std::map<std::string, std::pair<std::uint8_t, std::int32_t>>
        kEndian = {{"le16", {op::kLeOp, 16}}, {"le32", {op::kLeOp, 32}},
                   {"le64", {op::kLeOp, 64}}, {"be16", {op::kBeOp, 16}},
                   {"be32", {op::kBeOp, 32}}, {"be64", {op::kBeOp, 64}}};
    if (auto it = kEndian.find(p.mnemonic); it != kEndian.end()) {
      expect_operands(p, 1);
      out.push_back({it->second.first, reg(p, 0), 0, 0, it->second.second});
      return;
    }
    if (p.mnemonic == "lddw") {
      expect_operands(p, 2);
      auto n = parse_number(p.operands[1]);
      if (!n) fail(AsmErrorKind::kBadOperand, p.line, "bad immediate");
      if (n->negative && n->magnitude > (std::uint64_t{1} << 63)) {
        fail(AsmErrorKind::kImmediateOutOfRange, p.line, p.operands[1]);
      }
      std::uint64_t bits = n->negative ? (0 - n->magnitude) : n->magnitude;
      out.push_back({op::kLddw, reg(p, 0), 0, 0,
                     static_cast<std::int32_t>(static_cast<std::uint32_t>(bits))});
      out.push_back({0, 0, 0, 0,
                     static_cast<std::int32_t>(static_cast<std::uint32_t>(bits >> 32))});
      return;
    }

    const auto& variants = mnemonic_index();
    auto it = variants.find(p.mnemonic);
    if (it == variants.end()) {
      fail(AsmErrorKind::kUnknownMnemonic, p.line, p.mnemonic);
    }
    const auto& [imm_op, reg_op, form] = it->second;
    Instruction insn;
    switch (form) {
      case Form::kAluImm:
      case Form::kAluReg: {
        expect_operands(p, 2);
        insn.dst = reg(p, 0);
        if (looks_like_register(p.operands[1])) {
          insn.opcode = reg_op;
          insn.src = reg(p, 1);
        } else {
          insn.opcode = imm_op;
          insn.imm = imm32(p, p.operands[1]);
        }
        break;
      }
      case Form::kNeg:
        expect_operands(p, 1);
        insn.opcode = imm_op;
        insn.dst = reg(p, 0);
        break;
      case Form::kLoad: {
        expect_operands(p, 2);
        insn.opcode = imm_op;
        insn.dst = reg(p, 0);
        std::tie(insn.src, insn.offset) = memory(p, 1);
        break;
      }
      case Form::kStoreImm:
        expect_operands(p, 2);
        insn.opcode = imm_op;
        std::tie(insn.dst, insn.offset) = memory(p, 0);
        insn.imm = imm32(p, p.operands[1]);
        break;
      case Form::kStoreReg:
        expect_operands(p, 2);
        insn.opcode = imm_op;
        std::tie(insn.dst, insn.offset) = memory(p, 0);
        insn.src = reg(p, 1);
        break;
      case Form::kJa:
        expect_operands(p, 1);
        insn.opcode = imm_op;
        insn.offset = jump_target(p, 0);
        break;
      case Form::kJumpImm:
      case Form::kJumpReg:
        expect_operands(p, 3);
        insn.dst = reg(p, 0);
        if (looks_like_register(p.operands[1])) {
          insn.opcode = reg_op;
          insn.src = reg(p, 1);
        } else {
          insn.opcode = imm_op;
          insn.imm = imm32(p, p.operands[1]);
        }
        insn.offset = jump_target(p, 2);
        break;
      case Form::kCall:
        expect_operands(p, 1);
        insn.opcode = imm_op;
        insn.imm = imm32(p, p.operands[0]);
        break;
      case Form::kExit:
        expect_operands(p, 0);
        insn.opcode = imm_op;
        break;
      case Form::kEndian:
      case Form::kLoadWide:
        fail(AsmErrorKind::kUnknownMnemonic, p.line, p.mnemonic);
    }
    out.push_back(insn);
  }

  struct Variant {
    std::uint8_t imm_op = 0;
    std::uint8_t reg_op = 0;
    Form form = Form::kExit;
  };

  // Mnemonic -> (immediate-form opcode, register-form opcode, form).
  static const std::unordered_map<std::string, Variant>& mnemonic_index() {
    static const auto index = [] {
      std::unordered_map<std::string, Variant> m;
      for (int code = 0; code < 256; ++code) {
        const OpcodeInfo* info = lookup_opcode(static_cast<std::uint8_t>(code));
        if (info == nullptr || info->form == Form::kEndian ||
            info->form == Form::kLoadWide) {
          continue;
        }
        Variant& v = m[info->mnemonic];
        v.form = info->form;
        if (info->form == Form::kAluReg || info->form == Form::kJumpReg) {
          v.reg_op = static_cast<std::uint8_t>(code);
        } else {
          v.imm_op = static_cast<std::uint8_t>(code);
        }
      }
      return m;
    }();
    return index;
  }

  std::string_view source_;
  Section section_ = Section::kText;
  std::size_t slot_count_ = 0;
  std::vector<Pending> pending_;
  std::map<std::string, std::size_t> labels_;
  std::vector<std::uint8_t> rodata_;
  std::vector<std::uint8_t> data_;
  std::vector<std::uint32_t> syscalls_;
  std::uint8_t regions_ = 0;
  std::optional<std::pair<std::size_t, std::string>> entry_;
};

std::string signed_offset(std::int64_t v) {
  return (v < 0 ? "-" : "+") + std::to_string(v < 0 ? -v : v);
}

std::string raw_directive(const Instruction& insn) {
  std::array<std::uint8_t, kSlotSize> bytes{};
  encode_slot(insn, bytes);
  return ".raw 0x" + to_hex(bytes);
}

}  // namespace

RawProgram assemble(std::string_view source) {
  return Assembler(source).run().text;
}

ContainerPackage assemble_package(std::string_view source) {
  return Assembler(source).run();
}

std::string disassemble_instruction(const DecodedInstruction& d) {
  const Instruction& i = d.insn;
  const OpcodeInfo* info = lookup_opcode(i.opcode);
  if (info == nullptr || i.dst >= kNumRegisters || i.src >= kNumRegisters ||
      !reserved_fields_clear(i, info->form)) {
    std::string out = raw_directive(i);
    if (d.is_wide()) out += "\n" + raw_directive(Instruction{0, 0, 0, 0, d.imm_high});
    return out;
  }

  auto r = [](std::uint8_t n) { return "r" + std::to_string(n); };
  auto mem = [&](std::uint8_t base) {
    return "[" + r(base) + signed_offset(i.offset) + "]";
  };
  std::string m = info->mnemonic;
  switch (info->form) {
    case Form::kAluImm: return m + " " + r(i.dst) + ", " + std::to_string(i.imm);
    case Form::kAluReg: return m + " " + r(i.dst) + ", " + r(i.src);
    case Form::kNeg: return m + " " + r(i.dst);
    case Form::kEndian:
      return m + std::to_string(i.imm) + " " + r(i.dst);
    case Form::kLoadWide: {
      std::ostringstream os;
      os << "lddw " << r(i.dst) << ", 0x" << std::hex << d.wide().value();
      return os.str();
    }
    case Form::kLoad: return m + " " + r(i.dst) + ", " + mem(i.src);
    case Form::kStoreImm: return m + " " + mem(i.dst) + ", " + std::to_string(i.imm);
    case Form::kStoreReg: return m + " " + mem(i.dst) + ", " + r(i.src);
    case Form::kJa: return m + " " + signed_offset(i.offset);
    case Form::kJumpImm:
      return m + " " + r(i.dst) + ", " + std::to_string(i.imm) + ", " +
             signed_offset(i.offset);
    case Form::kJumpReg:
      return m + " " + r(i.dst) + ", " + r(i.src) + ", " + signed_offset(i.offset);
    case Form::kCall: return m + " " + std::to_string(i.imm);
    case Form::kExit: return m;
  }
  return raw_directive(i);
}

std::string disassemble(const RawProgram& raw) {
  std::string out;
  for (const DecodedInstruction& d : decode_program(raw)) {
    out += disassemble_instruction(d);
    out += '\n';
  }
  return out;
}

std::string disassemble_package(const ContainerPackage& pkg) {
  std::string out;
  if (!pkg.required_syscalls.empty()) {
    out += ".syscalls ";
    for (std::size_t i = 0; i < pkg.required_syscalls.size(); ++i) {
      out += (i ? ", " : "") + std::to_string(pkg.required_syscalls[i]);
    }
    out += '\n';
  }
  if (pkg.required_regions & kRequireContextRead) out += ".context read\n";
  if (pkg.required_regions & kRequireContextWrite) out += ".context write\n";
  if (pkg.text.entry != 0) out += ".entry " + std::to_string(pkg.text.entry) + "\n";
  out += ".text\n" + disassemble(pkg.text);
  auto bytes = [&out](const char* section, const std::vector<std::uint8_t>& data) {
    if (data.empty()) return;
    out += section;
    out += '\n';
    for (std::size_t i = 0; i < data.size(); i += 16) {
      out += "    .byte ";
      for (std::size_t j = i; j < std::min(data.size(), i + 16); ++j) {
        static constexpr char kHex[] = "0123456789abcdef";
        out += (j > i ? ", 0x" : "0x");
        out += kHex[data[j] >> 4];
        out += kHex[data[j] & 15];
      }
      out += '\n';
    }
  };
  bytes(".rodata", pkg.rodata);
  bytes(".data", pkg.data);
  return out;
}

}  // namespace femto
