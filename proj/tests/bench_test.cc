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

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "femto/bench.h"
#include "femto/corpus.h"
#include "support/sandbox.h"

namespace femto::bench {
namespace {

std::map<std::string, BenchRow> by_name(const std::vector<BenchRow>& rows) {
  std::map<std::string, BenchRow> out;
  for (const auto& r : rows) out[r.name] = r;
  return out;
}

TEST(Bench, OneRowPerInstructionClass) {
  auto rows = bench_instructions();
  ASSERT_EQ(rows.size(), instruction_classes().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].name, instruction_classes()[i]);
    EXPECT_GT(rows[i].ns_per_op, 0.0) << rows[i].name;
    EXPECT_GE(rows[i].iterations, 1000u);
  }
  for (const auto& r : rows) {
    if (r.name != "mem_check") EXPECT_GT(r.instr_executed, 0u) << r.name;
  }
}

TEST(Bench, StoreIsNotCheaperThanHalfAnAluOp) {
  auto rows = by_name(bench_instructions());
  EXPECT_GE(rows.at("store").ns_per_op, 0.5 * rows.at("alu_imm").ns_per_op);
  if (rows.at("store").ns_per_op < rows.at("alu_imm").ns_per_op) {
    std::cout << "note: store " << rows.at("store").ns_per_op << " ns < alu_imm "
              << rows.at("alu_imm").ns_per_op << " ns\n";
  }
}

TEST(Bench, DoublingTheLoopKeepsPerInstructionTime) {
  // Timing noise on a shared machine is real; take the best of three tries
  // per class, each against the same +-20% band.
  BenchOptions base{.iterations = 1000, .batches = 5, .body = 32, .trips = 16};
  BenchOptions doubled = base;
  doubled.trips *= 2;
  for (const std::string& klass : instruction_classes()) {
    if (klass == "mem_check") continue;
    double best = 1e9;
    for (int attempt = 0; attempt < 3 && std::abs(best - 1.0) > 0.2; ++attempt) {
      const BenchRow a = bench_instruction(klass, base);
      const BenchRow b = bench_instruction(klass, doubled);
      EXPECT_GT(b.instr_executed, a.instr_executed);
      const double ratio = b.ns_per_op / a.ns_per_op;
      if (std::abs(ratio - 1.0) < std::abs(best - 1.0)) best = ratio;
    }
    EXPECT_NEAR(best, 1.0, 0.2) << klass;
  }
}

TEST(Bench, AppRowsAreVerifiedAndOrdered) {
  auto rows = by_name(bench_apps());
  for (const char* name : {"fletcher32-360B", "thread-counter-fire", "formatter-fire", "empty-hook-fire"}) {
    ASSERT_TRUE(rows.contains(name)) << name;
    EXPECT_GT(rows.at(name).ns_per_op, 0.0) << name;
  }
  EXPECT_EQ(rows.at("empty-hook-fire").instr_executed, 0u);
  EXPECT_LE(rows.at("empty-hook-fire").ns_per_op, rows.at("thread-counter-fire").ns_per_op);
  EXPECT_FALSE(rows.at("fletcher32-360B").paper_ref_value.empty());

  // The instruction count matches an audited run of the same program.
  ContainerPackage pkg = corpus::package(corpus::kFletcher32);
  testing::Sandbox box(0, false, 0, 0);
  box.allow.add({vaddr::kRodata, pkg.rodata, true, false});
  auto out = box.run(testing::must_verify(pkg.text, ExecutionLimits(128, 64)), {}, true);
  const auto& audited = std::get<ExecutionResult>(out);
  EXPECT_EQ(rows.at("fletcher32-360B").instr_executed, audited.instr_executed);
  EXPECT_EQ(audited.access_audit->size(), 1u + 360u / 2u);  // length + words
  EXPECT_FALSE(rows.at("empty-hook-fire").paper_ref_value.empty());
}

TEST(Bench, CsvSchema) {
  std::vector<BenchRow> rows{{"a", 1000, 1.5, 10, "x"}, {"b", 2000, 0.25, 0, ""}};
  std::ostringstream out;
  write_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "name,iterations,ns_per_op,instr_executed,paper_ref_value");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 7), "a,1000,");
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 7), "b,2000,");
  EXPECT_EQ(line.back(), ',');
}

}  // namespace
}  // namespace femto::bench
