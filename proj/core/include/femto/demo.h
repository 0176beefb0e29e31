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

// The standard hook set and the multi-tenant scenario: a kernel debug
// counter (tenant 1) and a sensor reader plus response formatter (tenant 2)
// sharing one engine.

#ifndef FEMTO_DEMO_H_
#define FEMTO_DEMO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "femto/host.h"

namespace femto::demo {

inline constexpr std::size_t kThreadSwitchContextSize = 8;
inline constexpr std::size_t kTimerContextSize = 8;
inline constexpr std::size_t kRequestContextSize = 32;

inline constexpr TenantId kDebugTenant{1};
inline constexpr TenantId kSensorTenant{2};

Uuid thread_switch_hook();
Uuid timer_hook();
Uuid request_hook();

// thread-switch, timer, request.
std::vector<HookSpec> standard_hooks();
void register_standard_hooks(Engine& engine);

// Limits the demo installs containers with.
ExecutionLimits default_limits();

// u32 previous thread id, u32 next thread id.
std::vector<std::uint8_t> thread_switch_context(std::uint32_t prev, std::uint32_t next);

struct ScenarioOptions {
  int thread_switches = 12;
  int timer_firings = 10;
  // Fire the thread-switch and timer hooks from two threads.
  bool concurrent = true;
  // Attach a never-terminating container ahead of the sensor reader.
  bool inject_fuel_fault = false;
};

struct ScenarioResult {
  ContainerId counter{};
  ContainerId sensor{};
  ContainerId formatter{};
  std::optional<ContainerId> faulty;
  // (label, report) in a fixed order: thread switches, timer, request.
  std::vector<std::pair<std::string, FireReport>> fires;
  std::string formatter_output;
  std::map<std::string, KvSnapshot> stores;
};

// `engine` must be fresh (no tenants or hooks); its sensor seed drives the
// samples.
ScenarioResult run_multi_tenant(Engine& engine, const ScenarioOptions& options = {});

// One line per container outcome.
std::string format_report(const std::string& label, const FireReport& report);
// "<scope> <key> <value>" lines, scopes in dump order.
std::string format_dump(const std::map<std::string, KvSnapshot>& stores);

}  // namespace femto::demo

#endif  // FEMTO_DEMO_H_
