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


// Reference implementations the tests compare the runtime against. They are
// written directly from the instruction-set and algorithm definitions and
// share no code with the library beyond the Instruction struct.

#ifndef FEMTO_TESTS_SUPPORT_ORACLES_H_
#define FEMTO_TESTS_SUPPORT_ORACLES_H_

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "femto/isa.h"

namespace femto::oracle {

// Fletcher-32 via the modular definition: both sums are taken mod 65535
// over little-endian 16-bit words (odd tail zero-padded), seeded with
// 0xffff, and a zero residue is written as 0xffff.
inline std::uint32_t fletcher32(std::span<const std::uint8_t> bytes) {
  std::uint64_t a = 0xffff, b = 0xffff;
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    std::uint64_t w = bytes[i];
    if (i + 1 < bytes.size()) w |= std::uint64_t{bytes[i + 1]} << 8;
    a = (a + w) % 65535;
    b = (b + a) % 65535;
  }
  if (a == 0) a = 65535;
  if (b == 0) b = 65535;
  return static_cast<std::uint32_t>(b << 16 | a);
}

// Arbitrary-precision evaluator for straight-line ALU programs (ALU64,
// ALU32, neg, byte swaps, lddw, mov, exit). Returns r0, or nullopt when the
// program divides by zero. Registers start at zero.
class AluEvaluator {
 public:
  using Int = boost::multiprecision::cpp_int;

  std::optional<std::uint64_t> run(std::span<const DecodedInstruction> program) {
    for (auto& r : regs_) r = 0;
    // The frame pointer starts at the top of the 512-byte stack.
    regs_[10] = Int(0x10000200);
    for (const DecodedInstruction& d : program) {
      const Instruction& i = d.insn;
      const unsigned cls = i.opcode & 7;
      if (i.opcode == 0x95) break;
      if (i.opcode == 0x18) {
        regs_[i.dst] = Int(static_cast<std::uint32_t>(i.imm)) +
                       Int(static_cast<std::uint32_t>(d.imm_high)) * kTwo32;
        continue;
      }
      if (i.opcode == 0xd4 || i.opcode == 0xdc) {
        regs_[i.dst] = swap(regs_[i.dst], i.imm, i.opcode == 0xdc);
        continue;
      }
      const bool wide = cls == 7;
      const Int modulus = wide ? kTwo64 : kTwo32;
      const unsigned bits = wide ? 64 : 32;
      const unsigned operation = i.opcode & 0xf0;
      const bool reg_src = (i.opcode & 0x08) != 0;
      // Operands as unsigned values of the operation width.
      Int dst = regs_[i.dst] % modulus;
      Int src = reg_src ? regs_[i.src] % modulus : wrap(Int(i.imm), modulus);
      Int out;
      switch (operation) {
        case 0x00: out = dst + src; break;
        case 0x10: out = dst - src; break;
        case 0x20: out = dst * src; break;
        case 0x30:
          if (src == 0) return std::nullopt;
          out = dst / src;
          break;
        case 0x40: out = dst | src; break;
        case 0x50: out = dst & src; break;
        case 0x60: out = dst * pow2(static_cast<unsigned>(src % bits)); break;
        case 0x70: out = dst / pow2(static_cast<unsigned>(src % bits)); break;
        case 0x80: out = -dst; break;
        case 0x90:
          if (src == 0) return std::nullopt;
          out = dst % src;
          break;
        case 0xa0: out = dst ^ src; break;
        case 0xb0: out = src; break;
        case 0xc0: {
          // Arithmetic shift: floor division of the signed value.
          Int s = to_signed(dst, bits);
          Int p = pow2(static_cast<unsigned>(src % bits));
          out = s >= 0 ? Int(s / p) : Int(-((-s + p - 1) / p));
          break;
        }
        default: return std::nullopt;
      }
      regs_[i.dst] = wrap(out, modulus);
    }
    return static_cast<std::uint64_t>(regs_[0] % kTwo64);
  }

 private:
  static Int pow2(unsigned n) { return Int(1) << n; }
  static Int wrap(Int v, const Int& m) {
    v %= m;
    if (v < 0) v += m;
    return v;
  }
  static Int to_signed(const Int& v, unsigned bits) {
    return v >= pow2(bits - 1) ? v - pow2(bits) : v;
  }
  static Int swap(const Int& v, std::int32_t width, bool big) {
    const unsigned n = static_cast<unsigned>(width) / 8;
    Int low = v % pow2(static_cast<unsigned>(width));
    if (!big) return low;
    Int out = 0;
    for (unsigned k = 0; k < n; ++k) {
      Int byte = (low / pow2(8 * k)) % 256;
      out += byte * pow2(8 * (n - 1 - k));
    }
    return out;
  }

  inline static const Int kTwo32 = Int(1) << 32;
  inline static const Int kTwo64 = Int(1) << 64;
  Int regs_[11];
};

// Expected end state of the multi-tenant scenario, computed by simulating
// each program's documented behaviour in plain C++.
struct ScenarioExpectation {
  std::map<std::uint32_t, std::int64_t> counter_local;  // thread id -> count
  std::vector<std::int64_t> samples;
  std::map<std::uint32_t, std::int64_t> sensor_local;
  std::int64_t average = 0;
  std::string formatter_output;
  // "<scope> <key> <value>" lines with container ids 1, 2, 3 for counter,
  // sensor reader and formatter and tenant ids 1, 2.
  std::string dump;
};

inline ScenarioExpectation expect_scenario(std::uint64_t seed, int switches, int timers) {
  ScenarioExpectation e;
  for (int k = 0; k < switches; ++k) e.counter_local[(k + 1) % 3 + 1] += 1;
  std::mt19937_64 sensor(seed);
  for (int k = 0; k < timers; ++k) e.samples.push_back(static_cast<std::int64_t>(sensor() % 1000));
  for (std::size_t k = 0; k < e.samples.size(); ++k) e.sensor_local[k % 8] = e.samples[k];
  if (!e.samples.empty()) e.sensor_local[8] = static_cast<std::int64_t>(e.samples.size());
  std::size_t window = std::min<std::size_t>(e.samples.size(), 8);
  if (window > 0) {
    std::int64_t sum = 0;
    for (std::size_t k = e.samples.size() - window; k < e.samples.size(); ++k) sum += e.samples[k];
    e.average = sum / static_cast<std::int64_t>(window);
  }
  e.formatter_output = std::to_string(e.average);

  auto lines = [&e](const std::string& scope, const std::map<std::uint32_t, std::int64_t>& m) {
    for (const auto& [k, v] : m) e.dump += scope + " " + std::to_string(k) + " " + std::to_string(v) + "\n";
  };
  lines("local:1", e.counter_local);
  lines("local:2", e.sensor_local);
  if (window > 0) lines("tenant:2", {{1, e.average}});
  return e;
}

}  // namespace femto::oracle

#endif  // FEMTO_TESTS_SUPPORT_ORACLES_H_
