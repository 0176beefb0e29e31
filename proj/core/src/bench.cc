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

#include "femto/bench.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

#include "femto/assembler.h"
#include "femto/corpus.h"
#include "femto/demo.h"
#include "femto/host.h"
#include "femto/verifier.h"
#include "femto/vm.h"

namespace femto::bench {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint32_t kNoopSyscall = 200;
constexpr std::uint64_t kPattern = 0x1122334455667788;

// Median wall time of `batches` batches of `iterations` calls, after one
// warm-up batch.
double median_batch_ns(std::uint64_t iterations, int batches,
                       const std::function<void()>& body) {
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(iterations, 100); ++i) body();
  std::vector<double> samples;
  for (int b = 0; b < batches; ++b) {
    auto start = Clock::now();
    for (std::uint64_t i = 0; i < iterations; ++i) body();
    samples.push_back(std::chrono::duration<double, std::nano>(Clock::now() - start).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

struct MicroProgram {
  std::string source;
  std::uint64_t expected_r0;
};

MicroProgram micro_program(const std::string& klass, int body, int trips) {
  std::string prologue = "    mov r6, " + std::to_string(trips) +
                         "\n    mov r0, 0\n    mov r7, 1\n    lddw r8, " +
                         std::to_string(kPattern) + "\n";
  std::string line;
  std::string epilogue;
  const std::uint64_t n = static_cast<std::uint64_t>(body) * static_cast<std::uint64_t>(trips);
  std::uint64_t expected = n;
  if (klass == "alu_imm") {
    line = "add r0, 1";
  } else if (klass == "alu_reg") {
    line = "add r0, r7";
  } else if (klass == "mul") {
    prologue += "    mov r0, 1\n";
    line = "mul r0, 3";
    expected = 1;
    for (std::uint64_t i = 0; i < n; ++i) expected *= 3;
  } else if (klass == "load") {
    prologue += "    stxdw [r10-8], r8\n";
    line = "ldxdw r0, [r10-8]";
    expected = kPattern;
  } else if (klass == "store") {
    line = "stxdw [r10-8], r8";
    epilogue = "    ldxdw r0, [r10-8]\n";
    expected = kPattern;
  } else if (klass == "cond_branch") {
    line = "jeq r7, 0, +0";
    epilogue = "    mov r0, r6\n";
    expected = 0;
  } else if (klass == "call") {
    line = "call " + std::to_string(kNoopSyscall);
  } else {
    throw std::invalid_argument("unknown instruction class " + klass);
  }
  std::string src = prologue + "loop:\n";
  for (int i = 0; i < body; ++i) src += "    " + line + "\n";
  src += "    sub r6, 1\n    jne r6, 0, loop\n" + epilogue + "    exit\n";
  return {src, expected};
}

BenchRow mem_check_row(const BenchOptions& options) {
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  std::vector<std::uint8_t> ctx(32), ro(64), data(64);
  AllowList allow(stack);
  allow.add(MemoryRegion{vaddr::kContext, ctx, true, true});
  allow.add(MemoryRegion{vaddr::kRodata, ro, true, false});
  allow.add(MemoryRegion{vaddr::kData, data, true, true});
  const std::array<std::uint64_t, 4> addrs = {vaddr::kStackTop - 8, vaddr::kContext + 8,
                                              vaddr::kRodata + 16, vaddr::kData + 24};
  const std::uint64_t checks = static_cast<std::uint64_t>(options.body) * options.trips;
  double ns = median_batch_ns(options.iterations, options.batches, [&] {
    std::uint64_t granted = 0;
    for (std::uint64_t i = 0; i < checks; ++i) {
      granted += mem_check(allow, addrs[i & 3], 8, Access::kRead) ? 1 : 0;
    }
    if (granted != checks) throw BenchFailure("mem_check rejected a mapped access");
  });
  return {"mem_check", options.iterations, ns / static_cast<double>(options.iterations * checks),
          0, ""};
}

}  // namespace

std::vector<std::string> instruction_classes() {
  return {"alu_imm", "alu_reg", "mul", "load", "store", "cond_branch", "call", "mem_check"};
}

BenchRow bench_instruction(const std::string& klass, const BenchOptions& options) {
  if (klass == "mem_check") return mem_check_row(options);
  MicroProgram mp = micro_program(klass, options.body, options.trips);
  const ExecutionLimits limits(4096, 256);
  VerifyResult vr = verify(assemble(mp.source), limits);
  if (!vr.ok()) throw BenchFailure(klass + ": micro program failed verification");

  std::uint64_t calls = 0;
  SyscallTable table = register_syscall(SyscallTable(), kNoopSyscall,
                                        [&calls](CallContext&, const SyscallArgs&) {
                                          return ++calls;
                                        })
                           .with_granted({kNoopSyscall});
  alignas(8) std::array<std::uint8_t, kStackSize> stack{};
  AllowList allow(stack);

  std::uint64_t instr = 0;
  double ns = median_batch_ns(options.iterations, options.batches, [&] {
    calls = 0;
    ExecOutcome out = exec(*vr.program, allow, table, 0);
    const auto* r = std::get_if<ExecutionResult>(&out);
    if (r == nullptr || r->return_value != mp.expected_r0 ||
        (instr != 0 && r->instr_executed != instr)) {
      throw BenchFailure(klass + ": unexpected result");
    }
    instr = r->instr_executed;
  });
  return {klass, options.iterations,
          ns / static_cast<double>(options.iterations * instr), instr, ""};
}

std::vector<BenchRow> bench_instructions(const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (const std::string& klass : instruction_classes()) {
    rows.push_back(bench_instruction(klass, options));
  }
  return rows;
}

std::vector<BenchRow> bench_apps(const BenchOptions& options) {
  std::vector<BenchRow> rows;

  {
    ContainerPackage pkg = corpus::package(corpus::kFletcher32);
    const std::uint32_t expected = corpus::fletcher32(corpus::fletcher_input());
    VerifyResult vr = verify(pkg.text, demo::default_limits());
    if (!vr.ok()) throw BenchFailure("fletcher32 failed verification");
    alignas(8) std::array<std::uint8_t, kStackSize> stack{};
    AllowList allow(stack);
    allow.add(MemoryRegion{vaddr::kRodata, pkg.rodata, true, false});
    SyscallTable table;
    std::uint64_t instr = 0;
    double ns = median_batch_ns(options.iterations, options.batches, [&] {
      ExecOutcome out = exec(*vr.program, allow, table, 0);
      const auto* r = std::get_if<ExecutionResult>(&out);
      if (r == nullptr || r->return_value != expected) {
        throw BenchFailure("fletcher32: checksum mismatch");
      }
      instr = r->instr_executed;
    });
    rows.push_back({"fletcher32-360B", options.iterations, ns / options.iterations, instr,
                    "2133 us @ 64 MHz Cortex-M4"});
  }

  {
    Engine engine;
    demo::register_standard_hooks(engine);
    engine.add_tenant(Tenant{demo::kDebugTenant, 0});
    ContainerId id = engine.install_container(demo::kDebugTenant,
                                              corpus::package(corpus::kThreadCounter),
                                              demo::thread_switch_hook(), demo::default_limits());
    const std::vector<std::uint8_t> ctx = demo::thread_switch_context(1, 2);
    std::uint64_t fires = 0;
    std::uint64_t instr = 0;
    double ns = median_batch_ns(options.iterations, options.batches, [&] {
      FireReport report = engine.fire_hook(demo::thread_switch_hook(), ctx);
      ++fires;
      const auto* r = report.entries.size() == 1
                          ? std::get_if<ExecutionResult>(&report.entries[0].outcome)
                          : nullptr;
      if (r == nullptr || r->return_value != 0) throw BenchFailure("thread counter faulted");
      instr = r->instr_executed;
    });
    if (engine.stores().get(LocalScope{id}, 2) != static_cast<KvValue>(fires)) {
      throw BenchFailure("thread counter lost increments");
    }
    rows.push_back({"thread-counter-fire", options.iterations, ns / options.iterations, instr,
                    "1750 ticks (hook + app)"});
  }

  {
    Engine engine;
    demo::register_standard_hooks(engine);
    engine.add_tenant(Tenant{demo::kSensorTenant, 0});
    engine.install_container(demo::kSensorTenant, corpus::package(corpus::kFormatter),
                             demo::request_hook(), demo::default_limits());
    engine.stores().put(TenantScope{demo::kSensorTenant}, 1, 1234);
    const std::vector<std::uint8_t> ctx(demo::kRequestContextSize, 0);
    std::uint64_t instr = 0;
    double ns = median_batch_ns(options.iterations, options.batches, [&] {
      FireReport report = engine.fire_hook(demo::request_hook(), ctx);
      const auto* r = report.entries.size() == 1
                          ? std::get_if<ExecutionResult>(&report.entries[0].outcome)
                          : nullptr;
      if (r == nullptr || r->return_value != 4 ||
          std::string(report.entries[0].context.begin(),
                      report.entries[0].context.begin() + 4) != "1234") {
        throw BenchFailure("formatter produced the wrong text");
      }
      instr = r->instr_executed;
    });
    rows.push_back({"formatter-fire", options.iterations, ns / options.iterations, instr, ""});
  }

  {
    Engine engine;
    demo::register_standard_hooks(engine);
    const std::vector<std::uint8_t> ctx(demo::kThreadSwitchContextSize, 0);
    double ns = median_batch_ns(options.iterations, options.batches, [&] {
      FireReport report = engine.fire_hook(demo::thread_switch_hook(), ctx);
      if (!report.empty_hook || !report.entries.empty()) {
        throw BenchFailure("empty hook ran something");
      }
    });
    rows.push_back({"empty-hook-fire", options.iterations, ns / options.iterations, 0,
                    "109 ticks"});
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kCsvHeader << '\n';
  for (const BenchRow& row : rows) {
    std::ostringstream ns;
    ns << std::fixed << std::setprecision(3) << row.ns_per_op;
    out << row.name << ',' << row.iterations << ',' << ns.str() << ',' << row.instr_executed
        << ',' << row.paper_ref_value << '\n';
  }
}

}  // namespace femto::bench
