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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "femto/corpus.h"
#include "femto/demo.h"
#include "femto/package.h"
#include "femto/vm.h"
#include "support/fixtures.h"
#include "support/oracles.h"
#include "support/sandbox.h"

namespace femto {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint64_t run_fletcher(std::span<const std::uint8_t> input, std::uint64_t* instr = nullptr) {
  auto rodata = corpus::fletcher_rodata(input);
  testing::Sandbox box(0, false, 0, 0);
  box.allow.add({vaddr::kRodata, rodata, true, false});
  auto prog = testing::must_verify(corpus::package(corpus::kFletcher32).text, ExecutionLimits(128, 64));
  auto out = box.run(prog);
  if (auto* f = std::get_if<Fault>(&out)) {
    ADD_FAILURE() << to_string(*f);
    return 0;
  }
  if (instr) *instr = std::get<ExecutionResult>(out).instr_executed;
  return std::get<ExecutionResult>(out).return_value;
}

TEST(Corpus, FletcherInputIsTheFixedString) {
  EXPECT_EQ(corpus::fletcher_input(), testing::fletcher_input_360());
  EXPECT_EQ(corpus::fletcher_input().size(), 360u);
}

TEST(Corpus, FletcherOnFixedInput) {
  auto input = testing::fletcher_input_360();
  EXPECT_EQ(run_fletcher(input), oracle::fletcher32(input));
  EXPECT_EQ(corpus::fletcher32(input), oracle::fletcher32(input));
}

TEST(Corpus, FletcherOnRandomInputs) {
  std::mt19937_64 rng(91);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::uint8_t> input(1 + rng() % 1024);
    for (auto& b : input) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(run_fletcher(input), oracle::fletcher32(input)) << "length " << input.size();
    ASSERT_EQ(corpus::fletcher32(input), oracle::fletcher32(input));
  }
  // Saturated input stresses the block folding.
  for (std::size_t n : {1u, 2u, 717u, 718u, 719u, 1024u}) {
    std::vector<std::uint8_t> ones(n, 0xff);
    ASSERT_EQ(run_fletcher(ones), oracle::fletcher32(ones)) << n;
  }
}

TEST(Corpus, FletcherOracleKnownAnswers) {
  // Published Fletcher-32 values for these ASCII strings.
  auto of = [](std::string s) {
    return oracle::fletcher32(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  };
  EXPECT_EQ(of("abcde"), 0xF04FC729u);
  EXPECT_EQ(of("abcdef"), 0x56502D2Au);
  EXPECT_EQ(of("abcdefgh"), 0xEBE19591u);
}

TEST(Corpus, FletcherInstructionCountIsStable) {
  std::uint64_t a = 0, b = 0;
  run_fletcher(testing::fletcher_input_360(), &a);
  run_fletcher(testing::fletcher_input_360(), &b);
  EXPECT_GT(a, 360u);
  EXPECT_EQ(a, b);
}

TEST(Corpus, CommittedFixturesAreCurrent) {
  const std::filesystem::path dir = FEMTO_CORPUS_DIR;
  for (const auto& [name, bytes] : testing::render_fixtures()) {
    ASSERT_TRUE(std::filesystem::exists(dir / name)) << name << " (run the regen_fixtures target)";
    EXPECT_EQ(read_file(dir / name), bytes) << name << " is stale (run the regen_fixtures target)";
  }
}

TEST(Corpus, CommittedPackagesParseAndRoundTrip) {
  const std::filesystem::path dir = FEMTO_CORPUS_DIR;
  for (auto name : corpus::names()) {
    auto bytes = read_file(dir / (std::string(name) + ".pkg"));
    ContainerPackage pkg = parse_package(bytes);
    EXPECT_EQ(serialize_package(pkg), bytes) << name;
    EXPECT_EQ(encode_program(decode_program(pkg.text)).bytes, pkg.text.bytes) << name;
    EXPECT_EQ(pkg, corpus::package(name)) << name;
  }
}

TEST(Corpus, FletcherExpectedFixtureMatchesVm) {
  auto text = read_file(std::filesystem::path(FEMTO_CORPUS_DIR) / "fletcher32.expected");
  EXPECT_EQ(std::string(text.begin(), text.end()),
            std::to_string(run_fletcher(testing::fletcher_input_360())) + "\n");
}

void expect_matches_oracle(const demo::ScenarioResult& r, const Engine& engine) {
  const auto e = oracle::expect_scenario(testing::kFixtureSeed, testing::kFixtureThreadSwitches,
                                         testing::kFixtureTimerFirings);
  KvSnapshot counter(e.counter_local.begin(), e.counter_local.end());
  KvSnapshot sensor(e.sensor_local.begin(), e.sensor_local.end());
  EXPECT_EQ(engine.stores().snapshot(LocalScope{r.counter}), counter);
  EXPECT_EQ(engine.stores().snapshot(LocalScope{r.sensor}), sensor);
  EXPECT_EQ(engine.stores().get(TenantScope{demo::kSensorTenant}, 1), e.average);
  EXPECT_EQ(engine.stores().snapshot(TenantScope{demo::kDebugTenant}), KvSnapshot{});
  EXPECT_EQ(engine.stores().snapshot(GlobalScope{}), KvSnapshot{});
  EXPECT_EQ(r.formatter_output, e.formatter_output);
  // Every timer firing returns the running average.
  std::int64_t sum = 0;
  int t = 0;
  for (const auto& [label, report] : r.fires) {
    if (label.rfind("timer#", 0) != 0) continue;
    ++t;
    sum = 0;
    const int window = std::min(t, 8);
    for (int k = t - window; k < t; ++k) sum += e.samples[k];
    bool found = false;
    for (const auto& entry : report.entries) {
      if (entry.container != r.sensor) continue;
      found = true;
      EXPECT_EQ(std::get<ExecutionResult>(entry.outcome).return_value,
                static_cast<std::uint64_t>(sum / window))
          << label;
    }
    EXPECT_TRUE(found) << label;
  }
  EXPECT_EQ(t, testing::kFixtureTimerFirings);
}

TEST(Corpus, MultiTenantScenarioMatchesOracle) {
  for (bool concurrent : {false, true}) {
    Engine engine(EngineOptions{testing::kFixtureSeed});
    auto r = demo::run_multi_tenant(engine, {.thread_switches = testing::kFixtureThreadSwitches,
                                             .timer_firings = testing::kFixtureTimerFirings,
                                             .concurrent = concurrent});
    expect_matches_oracle(r, engine);
    EXPECT_EQ(demo::format_dump(r.stores),
              oracle::expect_scenario(testing::kFixtureSeed, testing::kFixtureThreadSwitches,
                                      testing::kFixtureTimerFirings)
                  .dump);
    EXPECT_EQ(r.fires.size(), 12u + 10u + 1u);
  }
}

TEST(Corpus, InjectedFuelFaultChangesNothingElse) {
  Engine engine(EngineOptions{testing::kFixtureSeed});
  auto r = demo::run_multi_tenant(engine, {.thread_switches = testing::kFixtureThreadSwitches,
                                           .timer_firings = testing::kFixtureTimerFirings,
                                           .inject_fuel_fault = true});
  ASSERT_TRUE(r.faulty.has_value());
  expect_matches_oracle(r, engine);
  int faults = 0;
  for (const auto& [label, report] : r.fires) {
    for (const auto& entry : report.entries) {
      if (entry.container == *r.faulty) {
        EXPECT_EQ(std::get<Fault>(entry.outcome).kind, FaultKind::kFuelExceeded);
        ++faults;
      }
    }
  }
  EXPECT_EQ(faults, testing::kFixtureTimerFirings);
}

TEST(Corpus, OtherSeedsStillMatch) {
  for (std::uint64_t seed : {1ull, 7ull, 123456789ull}) {
    Engine engine(EngineOptions{seed});
    auto r = demo::run_multi_tenant(engine, {.thread_switches = 5, .timer_firings = 3});
    auto e = oracle::expect_scenario(seed, 5, 3);
    EXPECT_EQ(demo::format_dump(r.stores), e.dump) << seed;
    EXPECT_EQ(r.formatter_output, e.formatter_output) << seed;
  }
}

}  // namespace
}  // namespace femto
