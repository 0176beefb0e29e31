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

#include "femto/demo.h"

#include <sstream>
#include <thread>

#include "femto/assembler.h"
#include "femto/bytes.h"
#include "femto/corpus.h"

namespace femto::demo {

namespace {

Uuid must_parse(std::string_view text) { return *Uuid::parse(text); }

constexpr std::string_view kSpinSource =
    "spin:\n"
    "    ja spin\n"
    "    exit\n";

}  // namespace

Uuid thread_switch_hook() { return must_parse("5f1c0b5e-7d3a-4c2e-9a61-3b0f2d9e1001"); }
Uuid timer_hook() { return must_parse("5f1c0b5e-7d3a-4c2e-9a61-3b0f2d9e1002"); }
Uuid request_hook() { return must_parse("5f1c0b5e-7d3a-4c2e-9a61-3b0f2d9e1003"); }

std::vector<HookSpec> standard_hooks() {
  using namespace syscall_id;
  return {
      HookSpec{thread_switch_hook(), "thread-switch", kThreadSwitchContextSize, false,
               {kKvGetLocal, kKvPutLocal, kKvGetGlobal, kKvPutGlobal},
               ResultPolicy::kCollectAll},
      HookSpec{timer_hook(), "timer", kTimerContextSize, false,
               {kKvGetLocal, kKvPutLocal, kKvGetGlobal, kKvPutGlobal, kKvGetTenant,
                kKvPutTenant, kSensorRead},
               ResultPolicy::kCollectAll},
      HookSpec{request_hook(), "request", kRequestContextSize, true,
               {kKvGetLocal, kKvPutLocal, kKvGetGlobal, kKvPutGlobal, kKvGetTenant,
                kKvPutTenant},
               ResultPolicy::kFirstNonZero},
  };
}

void register_standard_hooks(Engine& engine) {
  for (const HookSpec& spec : standard_hooks()) engine.register_hook(spec);
}

ExecutionLimits default_limits() { return ExecutionLimits(128, 64); }

std::vector<std::uint8_t> thread_switch_context(std::uint32_t prev, std::uint32_t next) {
  std::vector<std::uint8_t> ctx;
  append_le(ctx, prev);
  append_le(ctx, next);
  return ctx;
}

ScenarioResult run_multi_tenant(Engine& engine, const ScenarioOptions& options) {
  register_standard_hooks(engine);
  engine.add_tenant(Tenant{kDebugTenant, 0});
  engine.add_tenant(Tenant{kSensorTenant, 0});

  ScenarioResult result;
  const ExecutionLimits limits = default_limits();
  result.counter = engine.install_container(
      kDebugTenant, corpus::package(corpus::kThreadCounter), thread_switch_hook(), limits);
  if (options.inject_fuel_fault) {
    result.faulty = engine.install_container(kSensorTenant, assemble_package(kSpinSource),
                                             timer_hook(), limits);
  }
  result.sensor = engine.install_container(
      kSensorTenant, corpus::package(corpus::kSensorReader), timer_hook(), limits);
  result.formatter = engine.install_container(
      kSensorTenant, corpus::package(corpus::kFormatter), request_hook(), limits);

  std::vector<std::pair<std::string, FireReport>> switches;
  std::vector<std::pair<std::string, FireReport>> timers;
  auto run_switches = [&] {
    for (int k = 0; k < options.thread_switches; ++k) {
      auto prev = static_cast<std::uint32_t>(k % 3 + 1);
      auto next = static_cast<std::uint32_t>((k + 1) % 3 + 1);
      switches.emplace_back("thread-switch#" + std::to_string(k + 1),
                            engine.fire_hook(thread_switch_hook(),
                                             thread_switch_context(prev, next)));
    }
  };
  auto run_timers = [&] {
    for (int k = 0; k < options.timer_firings; ++k) {
      std::vector<std::uint8_t> ctx;
      append_le(ctx, static_cast<std::uint64_t>(k + 1));  // tick
      timers.emplace_back("timer#" + std::to_string(k + 1), engine.fire_hook(timer_hook(), ctx));
    }
  };
  if (options.concurrent) {
    std::thread other(run_switches);
    run_timers();
    other.join();
  } else {
    run_switches();
    run_timers();
  }

  std::vector<std::uint8_t> request(kRequestContextSize, 0);
  FireReport response = engine.fire_hook(request_hook(), request);
  for (const FireEntry& e : response.entries) {
    if (e.container != result.formatter) continue;
    if (const auto* r = std::get_if<ExecutionResult>(&e.outcome)) {
      std::size_t n = std::min<std::size_t>(r->return_value, e.context.size());
      result.formatter_output.assign(e.context.begin(), e.context.begin() + n);
    }
  }

  result.fires = std::move(switches);
  for (auto& f : timers) result.fires.push_back(std::move(f));
  result.fires.emplace_back("request#1", std::move(response));
  result.stores = engine.stores().dump();
  return result;
}

std::string format_report(const std::string& label, const FireReport& report) {
  std::ostringstream out;
  if (report.entries.empty()) out << label << " empty\n";
  for (const FireEntry& e : report.entries) {
    out << label << " container=" << to_underlying(e.container) << ' ';
    if (const auto* r = std::get_if<ExecutionResult>(&e.outcome)) {
      out << "ok r0=" << r->return_value << " instr=" << r->instr_executed;
    } else {
      out << "fault " << to_string(std::get<Fault>(e.outcome));
    }
    out << '\n';
  }
  out << label << " policy=" << report.policy_value << '\n';
  return out.str();
}

std::string format_dump(const std::map<std::string, KvSnapshot>& stores) {
  std::ostringstream out;
  for (const auto& [scope, entries] : stores) {
    for (const auto& [key, value] : entries) out << scope << ' ' << key << ' ' << value << '\n';
  }
  return out.str();
}

}  // namespace femto::demo
