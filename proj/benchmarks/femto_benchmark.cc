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

// google-benchmark view of the interpreter: one loop per instruction class,
// the corpus applications and hook firing. `femto bench` reports the same
// classes as CSV.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "femto/assembler.h"
#include "femto/corpus.h"
#include "femto/demo.h"
#include "femto/host.h"
#include "femto/verifier.h"
#include "femto/vm.h"

namespace {

using namespace femto;

constexpr int kBody = 32;
constexpr int kTrips = 16;

// `line` repeated kBody times inside a kTrips loop.
VerifiedProgram loop_program(const std::string& setup, const std::string& line) {
  std::string src = "mov r6, " + std::to_string(kTrips) + "\nmov r7, 1\n" + setup + "loop:\n";
  for (int i = 0; i < kBody; ++i) src += line + "\n";
  src += "sub r6, 1\njne r6, 0, loop\nexit\n";
  VerifyResult r = verify(assemble(src), ExecutionLimits(4096, 256));
  if (!r.ok()) throw std::runtime_error("benchmark program rejected");
  return std::move(*r.program);
}

void run_class(benchmark::State& state, const std::string& setup, const std::string& line) {
  VerifiedProgram program = loop_program(setup, line);
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  AllowList allow(stack);
  SyscallTable table =
      register_syscall({}, 200, [](CallContext&, const SyscallArgs&) { return 0; })
          .with_granted({200});
  std::uint64_t instr = 0;
  for (auto _ : state) {
    ExecOutcome out = exec(program, allow, table, 0);
    if (const auto* f = std::get_if<Fault>(&out)) {
      state.SkipWithError(to_string(*f).c_str());
      break;
    }
    instr = std::get<ExecutionResult>(out).instr_executed;
    benchmark::DoNotOptimize(out);
  }
  state.counters["instr"] = static_cast<double>(instr);
  state.counters["ns_per_instr"] = benchmark::Counter(
      static_cast<double>(instr) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate | benchmark::Counter::kInvert);
}

void BM_AluImm(benchmark::State& s) { run_class(s, "", "add r0, 1"); }
void BM_AluReg(benchmark::State& s) { run_class(s, "", "add r0, r7"); }
void BM_Mul(benchmark::State& s) { run_class(s, "mov r0, 1\n", "mul r0, 3"); }
void BM_Load(benchmark::State& s) { run_class(s, "stxdw [r10-8], r7\n", "ldxdw r0, [r10-8]"); }
void BM_Store(benchmark::State& s) { run_class(s, "", "stxdw [r10-8], r7"); }
void BM_CondBranch(benchmark::State& s) { run_class(s, "", "jeq r7, 0, +0"); }
void BM_Call(benchmark::State& s) { run_class(s, "", "call 200"); }
BENCHMARK(BM_AluImm);
BENCHMARK(BM_AluReg);
BENCHMARK(BM_Mul);
BENCHMARK(BM_Load);
BENCHMARK(BM_Store);
BENCHMARK(BM_CondBranch);
BENCHMARK(BM_Call);

void BM_MemCheck(benchmark::State& state) {
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  std::vector<std::uint8_t> data(64);
  AllowList allow(stack);
  allow.add({vaddr::kData, data, true, true});
  std::uint64_t addr = vaddr::kData + 8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(addr);
    benchmark::DoNotOptimize(mem_check(allow, addr, 8, Access::kWrite));
  }
}
BENCHMARK(BM_MemCheck);

void BM_Fletcher360(benchmark::State& state) {
  ContainerPackage pkg = corpus::package(corpus::kFletcher32);
  VerifyResult vr = verify(pkg.text, ExecutionLimits(128, 64));
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  AllowList allow(stack);
  allow.add({vaddr::kRodata, pkg.rodata, true, false});
  const std::uint64_t expected = corpus::fletcher32(corpus::fletcher_input());
  for (auto _ : state) {
    ExecOutcome out = exec(*vr.program, allow, SyscallTable{}, 0);
    const auto* r = std::get_if<ExecutionResult>(&out);
    if (r == nullptr || r->return_value != expected) {
      state.SkipWithError("checksum mismatch");
      break;
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 360);
}
BENCHMARK(BM_Fletcher360);

void BM_FireThreadCounter(benchmark::State& state) {
  Engine engine;
  demo::register_standard_hooks(engine);
  engine.add_tenant(Tenant{demo::kDebugTenant, 0});
  engine.install_container(demo::kDebugTenant, corpus::package(corpus::kThreadCounter),
                           demo::thread_switch_hook(), demo::default_limits());
  const std::vector<std::uint8_t> ctx = demo::thread_switch_context(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.fire_hook(demo::thread_switch_hook(), ctx));
  }
}
BENCHMARK(BM_FireThreadCounter);

void BM_FireEmptyHook(benchmark::State& state) {
  Engine engine;
  demo::register_standard_hooks(engine);
  const std::vector<std::uint8_t> ctx(demo::kThreadSwitchContextSize, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.fire_hook(demo::thread_switch_hook(), ctx));
  }
}
BENCHMARK(BM_FireEmptyHook);

}  // namespace

BENCHMARK_MAIN();
