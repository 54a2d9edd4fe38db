/*
 * Copyright 2026 The bipsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line driver: run, check, bench, stats, gen.
//
// Exit codes: 0 ok, 1 diagnostics or bad input, 2 deadlock before the
// requested number of steps (run), 3 engines disagree (check).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bipsym.hpp"

namespace {

using namespace bipsym;

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kDeadlock = 2;
constexpr int kDivergence = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

struct RunArgs {
  std::string file;
  std::string engine = "symbolic";
  std::uint64_t steps = 10000;
  std::uint64_t seed = 0;
  std::string trace;
  bool quiet = false;
};

template <class Engine>
Trace run_engine(Engine& e, const RunArgs& a) {
  return run(e, a.steps, a.seed);
}

int cmd_run(const RunArgs& a) {
  const SystemModel m = load_model(a.file);
  Trace t;
  if (parse_engine(a.engine) == EngineKind::Enumerative) {
    EnumEngine e(m);
    t = run_engine(e, a);
  } else {
    SymbolicEngine e(m);
    t = run_engine(e, a);
  }
  if (!a.trace.empty()) {
    auto out = open_out(a.trace);
    write_trace_csv(out, m, t);
  }
  if (!a.quiet) {
    for (const auto& s : t.steps) std::cout << '{' << s.interaction.str() << "} -> " << state_text(m, s.state) << '\n';
  }
  std::cout << t.steps.size() << " steps";
  if (t.deadlocked) std::cout << ", deadlock at (" << state_text(m, t.steps.empty() ? t.initial : t.steps.back().state) << ")";
  std::cout << '\n';
  return t.deadlocked && t.steps.size() < a.steps ? kDeadlock : kOk;
}

int cmd_check(const std::string& file, std::size_t bound) {
  const SystemModel m = load_model(file);
  const EquivalenceReport r = check_equivalence(m, bound);
  std::cout << describe(m, r) << '\n';
  return r.equivalent() ? kOk : kDivergence;
}

struct BenchArgs {
  std::string example;
  std::vector<int> n;
  int m = 1;
  std::string engine = "both";
  std::uint64_t steps = 10000;
  std::uint64_t seed = 0;
  int repetitions = 5;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<EngineKind> engines;
  if (a.engine == "both") {
    engines = {EngineKind::Enumerative, EngineKind::Symbolic};
  } else {
    engines = {parse_engine(a.engine)};
  }
  std::ofstream file;
  if (!a.out.empty()) {
    file = open_out(a.out);
    file << kBenchCsvHeader << '\n';
  }
  std::cout << kBenchCsvHeader << '\n';
  for (int n : a.n) {
    for (auto e : engines) {
      const BenchRecord r = bench(a.example, n, a.m, a.steps, a.seed, e, {a.repetitions, true});
      write_csv_row(std::cout, r);
      if (file.is_open()) write_csv_row(file, r);
    }
  }
  return kOk;
}

int cmd_stats(const std::string& file) {
  const SystemModel m = load_model(file);
  const SystemEncoding enc = build(m);
  const EncodingStats s = enc.stats();
  std::cout << "atoms " << m.atoms.size() << "\nconnectors " << m.connectors.size() << "\ninteractions "
            << gamma_of(m).size() << "\nvariables " << enc.mgr->num_vars() << "\nf_B " << s.fb_nodes
            << "\nf_C " << s.fc_nodes << "\nf_S " << s.fs_nodes << "\nf_P " << s.fp_nodes << '\n';
  return kOk;
}

struct GenArgs {
  std::string kind;
  int n = 1;
  int m = 1;
  bool reversed = false;
  std::uint64_t seed = 0;
  RandomBounds bounds;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  SystemModel m;
  if (a.kind == "bus") {
    m = gen_bus(a.n, a.reversed);
  } else if (a.kind == "tasks") {
    m = gen_tasks(a.n, a.m);
  } else {
    m = gen_random(a.seed, a.bounds);
  }
  if (a.out.empty()) {
    std::cout << serialize(m);
  } else {
    save_model(m, a.out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enumerative and BDD-based execution engines for BIP-style component systems"};
  app.require_subcommand(1);
  const auto engines = CLI::IsMember({"enum", "symbolic"});

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Execute a model");
  run_cmd->add_option("file", run_args.file, "Model file (.bip-lite)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--engine", run_args.engine, "enum or symbolic")->check(engines)->capture_default_str();
  run_cmd->add_option("--steps", run_args.steps, "Steps to run")->capture_default_str();
  run_cmd->add_option("--seed", run_args.seed, "Seed")->capture_default_str();
  run_cmd->add_option("--trace", run_args.trace, "Write the trace as CSV");
  run_cmd->add_flag("-q,--quiet", run_args.quiet, "Print only the summary line");

  std::string check_file;
  std::size_t bound = 100000;
  auto* check_cmd = app.add_subcommand("check", "Compare both engines at every reachable state");
  check_cmd->add_option("file", check_file, "Model file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--bound", bound, "Maximum number of states")->check(CLI::PositiveNumber)->capture_default_str();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time a generated benchmark");
  bench_cmd->add_option("example", bench_args.example, "bus or tasks")->required()->check(CLI::IsMember({"bus", "tasks"}));
  bench_cmd->add_option("--n", bench_args.n, "Clusters or tasks (repeatable)")->required()->expected(1, -1);
  bench_cmd->add_option("--m", bench_args.m, "Processors (tasks)")->capture_default_str();
  bench_cmd->add_option("--engine", bench_args.engine, "enum, symbolic or both")
      ->check(CLI::IsMember({"enum", "symbolic", "both"}))
      ->capture_default_str();
  bench_cmd->add_option("--steps", bench_args.steps, "Steps per run")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed, "Seed")->capture_default_str();
  bench_cmd->add_option("--repetitions", bench_args.repetitions, "Timed runs (median reported)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out, "CSV output file");

  std::string stats_file;
  auto* stats_cmd = app.add_subcommand("stats", "Print BDD node counts of f_B, f_C, f_S, f_P");
  stats_cmd->add_option("file", stats_file, "Model file")->required()->check(CLI::ExistingFile);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated model");
  gen_cmd->add_option("kind", gen_args.kind, "bus, tasks or random")->required()->check(CLI::IsMember({"bus", "tasks", "random"}));
  gen_cmd->add_option("--n", gen_args.n, "Clusters or tasks")->capture_default_str();
  gen_cmd->add_option("--m", gen_args.m, "Processors")->capture_default_str();
  gen_cmd->add_flag("--reversed", gen_args.reversed, "Bus atoms communicate before computing");
  gen_cmd->add_option("--seed", gen_args.seed, "Seed (random)")->capture_default_str();
  gen_cmd->add_option("--atoms", gen_args.bounds.atoms, "Max atoms (random)")->capture_default_str();
  gen_cmd->add_option("--states", gen_args.bounds.states, "Max states per atom (random)")->capture_default_str();
  gen_cmd->add_option("--ports", gen_args.bounds.ports, "Max ports per atom (random)")->capture_default_str();
  gen_cmd->add_option("--depth", gen_args.bounds.depth, "Max connector depth (random)")->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*check_cmd) return cmd_check(check_file, bound);
    if (*bench_cmd) return cmd_bench(bench_args);
    if (*stats_cmd) return cmd_stats(stats_file);
    if (*gen_cmd) return cmd_gen(gen_args);
  } catch (const InputError& e) {
    std::cerr << e.what() << '\n';
    return kDiagnostics;
  } catch (const ContractViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kDiagnostics;
  }
  return kOk;
}
