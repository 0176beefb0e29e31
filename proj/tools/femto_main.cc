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

// femto: assemble, verify, run and host containers from the command line.
//
// Exit status: 0 success, 1 domain error (verify failure, fault, rejected
// update...), 2 usage error. Data goes to stdout, diagnostics to stderr.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "femto/assembler.h"
#include "femto/bench.h"
#include "femto/bytes.h"
#include "femto/demo.h"
#include "femto/host.h"
#include "femto/package.h"
#include "femto/update.h"
#include "femto/verifier.h"
#include "json.hpp"

namespace {

using femto::to_underlying;
using json = nlohmann::json;

// Raised for failures that map to exit status 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::string& path) {
  auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

femto::ContainerPackage load_package(const std::string& path) {
  try {
    return femto::parse_package(read_file(path));
  } catch (const femto::PackageError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::uint64_t sensor_seed() {
  const char* env = std::getenv("FEMTO_SEED");
  if (env == nullptr || *env == '\0') return 42;
  try {
    return std::stoull(env, nullptr, 0);
  } catch (const std::exception&) {
    throw DomainError("FEMTO_SEED is not a number: " + std::string(env));
  }
}

// ---- asm / disasm / verify / run -----------------------------------------

struct LimitFlags {
  std::uint64_t max_instr = 4096;
  std::uint64_t max_branch = 256;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-instr", max_instr, "N_i: program length limit in slots")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-branch", max_branch, "N_b: branch instruction limit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
  femto::ExecutionLimits limits() const {
    try {
      return femto::ExecutionLimits(max_instr, max_branch);
    } catch (const std::invalid_argument& e) {
      throw DomainError(e.what());
    }
  }
};

int cmd_asm(const std::string& input, const std::string& output) {
  try {
    auto pkg = femto::assemble_package(read_text(input));
    write_file(output, femto::serialize_package(pkg));
  } catch (const femto::AsmError& e) {
    throw DomainError(input + ":" + std::to_string(e.line()) + ": " + e.what());
  }
  return 0;
}

int cmd_disasm(const std::string& input) {
  auto pkg = load_package(input);
  try {
    std::cout << femto::disassemble_package(pkg);
  } catch (const femto::DecodeError& e) {
    throw DomainError(input + ": " + e.what());
  }
  return 0;
}

int cmd_verify(const std::string& input, const LimitFlags& flags) {
  auto pkg = load_package(input);
  femto::VerifyResult result = femto::verify(pkg.text, flags.limits());
  if (result.ok()) {
    std::cout << "ok slots=" << result.program->slots().size()
              << " branches=" << result.program->branch_count() << '\n';
    return 0;
  }
  for (const auto& e : result.errors) std::cout << femto::to_string(e) << '\n';
  return 1;
}

// Runs the package once through an engine with a single "cli" hook that
// permits every built-in syscall. The context block comes from --ctx.
int cmd_run(const std::string& input, const std::string& ctx_hex, bool audit,
            const LimitFlags& flags) {
  auto pkg = load_package(input);
  std::vector<std::uint8_t> ctx;
  if (!ctx_hex.empty()) {
    auto parsed = femto::from_hex(ctx_hex);
    if (!parsed) throw DomainError("--ctx is not valid hex");
    ctx = std::move(*parsed);
  }
  femto::Engine engine(femto::EngineOptions{sensor_seed()});
  femto::HookSpec spec;
  spec.uuid = *femto::Uuid::parse("00000000-0000-4000-8000-000000000000");
  spec.name = "cli";
  spec.context_size = ctx.size();
  spec.context_writable = true;
  spec.allowed_syscalls = {2, 3, 4, 5, 6, 7, 10};
  engine.register_hook(spec);
  engine.add_tenant(femto::Tenant{femto::TenantId{1}, 0});
  try {
    engine.install_container(femto::TenantId{1}, pkg, spec.uuid, flags.limits());
  } catch (const femto::InstallError& e) {
    std::cerr << "install failed: " << e.what() << '\n';
    for (const auto& v : e.verify_errors()) std::cerr << femto::to_string(v) << '\n';
    return 1;
  }
  femto::FireReport report = engine.fire_hook(spec.uuid, ctx, audit);
  const femto::FireEntry& entry = report.entries.at(0);
  auto print_audit = [](const std::optional<std::vector<femto::AccessRecord>>& log) {
    if (!log) return;
    for (const auto& a : *log) {
      std::cout << (a.access == femto::Access::kRead ? "R" : "W") << " 0x" << std::hex
                << a.address << std::dec << ' ' << a.size << '\n';
    }
  };
  if (const auto* fault = std::get_if<femto::Fault>(&entry.outcome)) {
    print_audit(fault->access_audit);
    std::cerr << "fault: " << femto::to_string(*fault) << '\n';
    return 1;
  }
  const auto& result = std::get<femto::ExecutionResult>(entry.outcome);
  std::cout << result.return_value << '\n';
  print_audit(result.access_audit);
  if (pkg.needs_context_write() && !entry.context.empty()) {
    std::cout << "ctx " << femto::to_hex(entry.context) << '\n';
  }
  std::cerr << "instr=" << result.instr_executed << " branches=" << result.branches_taken
            << '\n';
  return 0;
}

// ---- kv ---------------------------------------------------------------------

// State files hold {"<scope>": {"<key>": value, ...}, ...}.
void load_state(const std::string& path, femto::StoreRegistry& stores) {
  if (!std::filesystem::exists(path)) return;
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
  for (const auto& [scope_text, entries] : doc.items()) {
    auto scope = femto::parse_scope(scope_text);
    if (!scope || !entries.is_object()) throw DomainError(path + ": bad scope " + scope_text);
    stores.create(*scope);
    femto::KvSnapshot snap;
    for (const auto& [key, value] : entries.items()) {
      snap[static_cast<femto::KvKey>(std::stoul(key))] = value.get<femto::KvValue>();
    }
    stores.find(*scope)->load(snap);
  }
}

json state_json(const std::map<std::string, femto::KvSnapshot>& dump) {
  json doc = json::object();
  for (const auto& [scope, entries] : dump) {
    json e = json::object();
    for (const auto& [k, v] : entries) e[std::to_string(k)] = v;
    doc[scope] = e;
  }
  return doc;
}

femto::StoreScope scope_arg(const std::string& text) {
  auto scope = femto::parse_scope(text);
  if (!scope) throw CLI::ValidationError("--scope", "expected global|tenant:<id>|local:<id>");
  return *scope;
}

int cmd_kv(const std::string& action, const std::string& scope_text,
           const std::vector<std::string>& args, const std::string& state) {
  femto::StoreRegistry stores;
  load_state(state, stores);
  if (action == "dump") {
    auto dump = stores.dump();
    if (!scope_text.empty()) {
      std::string key = femto::format_scope(scope_arg(scope_text));
      std::map<std::string, femto::KvSnapshot> only;
      if (dump.contains(key)) only.emplace(key, dump.at(key));
      dump = std::move(only);
    }
    std::cout << femto::demo::format_dump(dump);
    return 0;
  }
  if (scope_text.empty()) throw CLI::ValidationError("--scope", "required for get/put");
  femto::StoreScope scope = scope_arg(scope_text);
  stores.create(scope);
  auto number = [](const std::string& s, const char* what) -> long long {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used, 0);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "not a number: " + s);
    }
  };
  if (action == "get") {
    if (args.size() != 1) throw CLI::ValidationError("get", "expects <key>");
    long long key = number(args[0], "key");
    if (key < 0 || key > UINT32_MAX) throw CLI::ValidationError("key", "out of range");
    std::cout << stores.get(scope, static_cast<femto::KvKey>(key)) << '\n';
    return 0;
  }
  if (args.size() != 2) throw CLI::ValidationError("put", "expects <key> <value>");
  long long key = number(args[0], "key");
  if (key < 0 || key > UINT32_MAX) throw CLI::ValidationError("key", "out of range");
  femto::KvValue previous =
      stores.put(scope, static_cast<femto::KvKey>(key), number(args[1], "value"));
  write_text(state, state_json(stores.dump()).dump(2) + "\n");
  std::cout << previous << '\n';
  return 0;
}

// ---- hooks / demo -------------------------------------------------------------

int cmd_hooks_list() {
  femto::Engine engine(femto::EngineOptions{sensor_seed()});
  femto::demo::ScenarioOptions opts;
  opts.thread_switches = 0;
  opts.timer_firings = 0;
  femto::demo::run_multi_tenant(engine, opts);
  for (const femto::HookInfo& h : engine.hooks()) {
    std::cout << h.spec.uuid.to_string() << ' ' << h.spec.name << " ctx=" << h.spec.context_size
              << (h.spec.context_writable ? " rw" : " ro")
              << " policy=" << femto::to_string(h.spec.policy) << " syscalls=";
    bool first = true;
    for (auto id : h.spec.allowed_syscalls) {
      std::cout << (first ? "" : ",") << id;
      first = false;
    }
    std::cout << " attached=";
    first = true;
    for (auto c : h.attached) {
      std::cout << (first ? "" : ",") << to_underlying(c);
      first = false;
    }
    if (h.attached.empty()) std::cout << '-';
    std::cout << '\n';
  }
  return 0;
}

int cmd_demo(bool sequential, bool inject_fault, const std::string& save_state) {
  femto::Engine engine(femto::EngineOptions{sensor_seed()});
  femto::demo::ScenarioOptions opts;
  opts.concurrent = !sequential;
  opts.inject_fuel_fault = inject_fault;
  femto::demo::ScenarioResult result = femto::demo::run_multi_tenant(engine, opts);
  for (const auto& [label, report] : result.fires) {
    std::cout << femto::demo::format_report(label, report);
  }
  std::cout << "formatter: " << result.formatter_output << '\n';
  std::cout << "stores:\n" << femto::demo::format_dump(result.stores);
  if (!save_state.empty()) write_text(save_state, state_json(result.stores).dump(2) + "\n");
  return 0;
}

// ---- keys / manifest / update ---------------------------------------------------

template <std::size_t N>
std::array<std::uint8_t, N> hex_array(const json& value, const std::string& what) {
  auto bytes = femto::from_hex(value.get<std::string>());
  if (!bytes || bytes->size() != N) throw DomainError("bad " + what);
  std::array<std::uint8_t, N> out{};
  std::copy(bytes->begin(), bytes->end(), out.begin());
  return out;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

femto::KeyPair load_secret_key(const std::string& path) {
  json doc = read_json(path);
  if (!doc.contains("secret")) throw DomainError(path + ": no secret key");
  return femto::KeyPair{hex_array<32>(doc.at("public"), "public key"),
                        hex_array<64>(doc.at("secret"), "secret key")};
}

femto::PublicKey load_public_key(const std::string& path) {
  return hex_array<32>(read_json(path).at("public"), "public key");
}

int cmd_keys_gen(const std::string& out) {
  femto::KeyPair kp = femto::generate_keypair();
  std::uint32_t id = femto::key_id_of(kp.public_key);
  json pub = {{"key_id", id}, {"public", femto::to_hex(kp.public_key)}};
  json sec = pub;
  sec["secret"] = femto::to_hex(kp.secret_key);
  write_text(out, sec.dump(2) + "\n");
  write_text(out + ".pub", pub.dump(2) + "\n");
  std::cout << "key_id " << id << '\n';
  return 0;
}

int cmd_manifest_create(const std::string& slot_text, std::uint64_t seq,
                        const std::string& payload_path, const std::string& key_path,
                        std::string out) {
  auto slot = femto::Uuid::parse(slot_text);
  if (!slot) throw CLI::ValidationError("--slot", "not a uuid: " + slot_text);
  auto payload = read_file(payload_path);
  femto::Manifest m = femto::make_manifest(*slot, seq, payload, load_secret_key(key_path));
  if (out.empty()) out = payload_path + ".manifest";
  auto bytes = femto::encode_manifest(m);
  write_file(out, bytes);
  std::cout << femto::to_hex(bytes) << '\n';
  return 0;
}

int cmd_update_apply(const std::string& manifest_path, const std::string& payload_path,
                     const std::vector<std::string>& trust, std::uint64_t current_seq) {
  femto::Manifest m;
  try {
    m = femto::parse_manifest(read_file(manifest_path));
  } catch (const femto::ManifestError& e) {
    throw DomainError(manifest_path + ": " + e.what());
  }
  auto payload = read_file(payload_path);
  femto::TrustedKeys trusted;
  for (const auto& path : trust) {
    femto::PublicKey key = load_public_key(path);
    trusted.emplace(femto::key_id_of(key), key);
  }
  std::uint32_t owner_key = trust.empty() ? 0 : femto::key_id_of(load_public_key(trust[0]));

  femto::Engine engine(femto::EngineOptions{sensor_seed()});
  femto::demo::register_standard_hooks(engine);
  engine.add_tenant(femto::Tenant{femto::TenantId{1}, owner_key});
  try {
    engine.bind_slot(m.slot, femto::TenantId{1}, current_seq);
  } catch (const femto::EngineError& e) {
    throw DomainError("slot " + m.slot.to_string() + " is not a known hook");
  }
  femto::ContainerId id;
  try {
    id = femto::install_update(engine, m, payload, trusted, femto::demo::default_limits());
  } catch (const femto::UpdateRejected& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return 1;
  } catch (const femto::InstallError& e) {
    std::cerr << "install failed: " << e.what() << '\n';
    for (const auto& v : e.verify_errors()) std::cerr << femto::to_string(v) << '\n';
    return 1;
  }
  std::cout << "installed container=" << to_underlying(id) << " slot=" << m.slot.to_string()
            << " seq=" << engine.slot(m.slot)->current_sequence << '\n';
  std::size_t ctx_size = 0;
  for (const auto& h : engine.hooks()) {
    if (h.spec.uuid == m.slot) ctx_size = h.spec.context_size;
  }
  std::vector<std::uint8_t> ctx(ctx_size, 0);
  std::cout << femto::demo::format_report("fire", engine.fire_hook(m.slot, ctx));
  return 0;
}

// ---- bench ------------------------------------------------------------------------

int cmd_bench(const std::string& csv, std::uint64_t iterations) {
  femto::bench::BenchOptions opts;
  opts.iterations = iterations;
  std::vector<femto::bench::BenchRow> rows;
  try {
    rows = femto::bench::bench_instructions(opts);
    auto apps = femto::bench::bench_apps(opts);
    rows.insert(rows.end(), apps.begin(), apps.end());
  } catch (const femto::bench::BenchFailure& e) {
    throw DomainError(std::string("benchmark failed verification: ") + e.what());
  }
  if (csv.empty()) {
    for (const auto& r : rows) {
      std::printf("%-22s %10.3f ns/op  instr=%-8llu %s\n", r.name.c_str(), r.ns_per_op,
                  static_cast<unsigned long long>(r.instr_executed), r.paper_ref_value.c_str());
    }
  } else if (csv == "-") {
    femto::bench::write_csv(std::cout, rows);
  } else {
    std::ofstream out(csv, std::ios::trunc);
    if (!out) throw DomainError("cannot write " + csv);
    femto::bench::write_csv(out, rows);
  }
  return 0;
}

// Help of the most deeply parsed subcommand.
std::string help_for(const CLI::App& app) {
  const CLI::App* cur = &app;
  while (true) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
  }
  return cur->help();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Femto-Container runtime: assemble, verify, run and host containers"};
  app.name("femto");
  app.require_subcommand(1);

  std::string input, output, ctx_hex, scope, state = "femto-state.json", save_state;
  std::string slot, payload, sign, manifest, csv, kv_action;
  std::vector<std::string> kv_args, trust;
  std::uint64_t seq = 0, current_seq = 0, iterations = 1000;
  bool audit = false, sequential = false, inject_fault = false;
  LimitFlags verify_limits, run_limits;
  int status = 0;

  auto* asm_cmd = app.add_subcommand("asm", "Assemble a source file into a package");
  asm_cmd->add_option("input", input, "assembly source")->required();
  asm_cmd->add_option("-o,--out", output, "package file")->required();
  asm_cmd->callback([&] { status = cmd_asm(input, output); });

  auto* disasm_cmd = app.add_subcommand("disasm", "Print a package as assembly source");
  disasm_cmd->add_option("package", input)->required();
  disasm_cmd->callback([&] { status = cmd_disasm(input); });

  auto* verify_cmd = app.add_subcommand("verify", "Run the pre-flight checks on a package");
  verify_cmd->add_option("package", input)->required();
  verify_limits.add_to(verify_cmd);
  verify_cmd->callback([&] { status = cmd_verify(input, verify_limits); });

  auto* run_cmd = app.add_subcommand("run", "Execute a package once and print r0");
  run_cmd->add_option("package", input)->required();
  run_cmd->add_option("--ctx", ctx_hex, "context block as hex bytes");
  run_cmd->add_flag("--audit", audit, "print every memory access as 'R|W addr size'");
  run_limits.add_to(run_cmd);
  run_cmd->callback([&] { status = cmd_run(input, ctx_hex, audit, run_limits); });

  auto* kv_cmd = app.add_subcommand("kv", "Inspect or edit a key-value state file");
  kv_cmd->add_option("action", kv_action, "get | put | dump")
      ->required()
      ->check(CLI::IsMember({"get", "put", "dump"}));
  kv_cmd->add_option("args", kv_args, "<key> [<value>]");
  kv_cmd->add_option("--scope", scope, "global | tenant:<id> | local:<container>");
  kv_cmd->add_option("--state", state, "state file")->capture_default_str();
  kv_cmd->callback([&] { status = cmd_kv(kv_action, scope, kv_args, state); });

  auto* hooks_cmd = app.add_subcommand("hooks", "Hook registry");
  hooks_cmd->require_subcommand(1);
  hooks_cmd->add_subcommand("list", "List the standard hooks and their attachments")
      ->callback([&] { status = cmd_hooks_list(); });

  auto* demo_cmd = app.add_subcommand("demo", "Scripted scenarios");
  demo_cmd->require_subcommand(1);
  auto* mt_cmd = demo_cmd->add_subcommand("multi-tenant",
                                          "3 containers, 2 tenants, 3 hooks end to end");
  mt_cmd->add_flag("--sequential", sequential, "fire all hooks from one thread");
  mt_cmd->add_flag("--inject-fault", inject_fault,
                   "attach a fuel-exhausting container to the timer hook");
  mt_cmd->add_option("--save-state", save_state, "write the final stores as a kv state file");
  mt_cmd->callback([&] { status = cmd_demo(sequential, inject_fault, save_state); });

  auto* keys_cmd = app.add_subcommand("keys", "Signing keys");
  keys_cmd->require_subcommand(1);
  auto* gen_cmd = keys_cmd->add_subcommand("gen", "Generate an Ed25519 key pair");
  gen_cmd->add_option("--out", output, "secret key file (<out>.pub gets the public half)")
      ->required();
  gen_cmd->callback([&] { status = cmd_keys_gen(output); });

  auto* manifest_cmd = app.add_subcommand("manifest", "Update manifests");
  manifest_cmd->require_subcommand(1);
  auto* create_cmd = manifest_cmd->add_subcommand("create", "Create and sign a manifest");
  create_cmd->add_option("--slot", slot, "target hook uuid")->required();
  create_cmd->add_option("--seq", seq, "sequence number")->required();
  create_cmd->add_option("--payload", payload, "package file")->required();
  create_cmd->add_option("--sign", sign, "secret key file")->required();
  create_cmd->add_option("--out", output, "manifest file (default <payload>.manifest)");
  create_cmd->callback(
      [&] { status = cmd_manifest_create(slot, seq, payload, sign, output); });

  auto* update_cmd = app.add_subcommand("update", "Apply updates");
  update_cmd->require_subcommand(1);
  auto* apply_cmd = update_cmd->add_subcommand("apply", "Verify a manifest and install");
  apply_cmd->add_option("--manifest", manifest)->required();
  apply_cmd->add_option("--payload", payload)->required();
  apply_cmd->add_option("--trust", trust, "trusted public key file(s)")->required();
  apply_cmd->add_option("--current-seq", current_seq, "slot sequence before the update")
      ->capture_default_str();
  apply_cmd->callback(
      [&] { status = cmd_update_apply(manifest, payload, trust, current_seq); });

  auto* bench_cmd = app.add_subcommand("bench", "Instruction and application timings");
  bench_cmd->add_option("--csv", csv, "write CSV to this file ('-' for stdout)");
  bench_cmd->add_option("--iterations", iterations, "executions per batch")
      ->capture_default_str()
      ->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 32));
  bench_cmd->callback([&] { status = cmd_bench(csv, iterations); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << help_for(app);
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}
