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

// Timing harness: per-instruction-class costs and per-application costs.
// Every timed program is checked against its expected result on every run;
// a mismatch throws BenchFailure instead of producing a row.

#ifndef FEMTO_BENCH_H_
#define FEMTO_BENCH_H_

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace femto::bench {

struct BenchRow {
  std::string name;
  std::uint64_t iterations = 0;    // timed executions per batch
  double ns_per_op = 0;            // per instruction (micro) or per run (apps)
  std::uint64_t instr_executed = 0;  // per execution
  std::string paper_ref_value;     // reference figure, never asserted
};

class BenchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchOptions {
  std::uint64_t iterations = 1000;  // executions per batch
  int batches = 5;                  // median of these is reported
  // Body repetitions per loop trip and loop trips for the micro programs.
  int body = 32;
  int trips = 16;
};

// alu_imm, alu_reg, mul, load, store, cond_branch, call, mem_check.
std::vector<std::string> instruction_classes();

BenchRow bench_instruction(const std::string& klass, const BenchOptions& options = {});
std::vector<BenchRow> bench_instructions(const BenchOptions& options = {});

// fletcher32-360B, thread-counter-fire, formatter-fire, empty-hook-fire.
std::vector<BenchRow> bench_apps(const BenchOptions& options = {});

inline constexpr const char* kCsvHeader =
    "name,iterations,ns_per_op,instr_executed,paper_ref_value";

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace femto::bench

#endif  // FEMTO_BENCH_H_
