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

// Timing harness and CSV output.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bipsym/engine.hpp"
#include "bipsym/enum_engine.hpp"
#include "bipsym/error.hpp"
#include "bipsym/generators.hpp"
#include "bipsym/model.hpp"
#include "bipsym/symbolic_engine.hpp"

namespace bipsym {

enum class EngineKind { Enumerative, Symbolic };

inline const char* engine_name(EngineKind e) { return e == EngineKind::Enumerative ? "enum" : "symbolic"; }

inline EngineKind parse_engine(const std::string& s) {
  if (s == "enum") return EngineKind::Enumerative;
  if (s == "symbolic") return EngineKind::Symbolic;
  throw InputError("unknown engine '" + s + "' (expected enum or symbolic)");
}

struct BenchRecord {
  std::string example;
  std::string engine;
  int n = 0;
  int m = 0;  // 0 when the example has no M
  std::uint64_t steps = 0;
  std::int64_t total_ns = 0;
  double mean_step_ns = 0;
  std::optional<EncodingStats> nodes;  // symbolic runs only
  std::uint64_t seed = 0;
  std::vector<std::int64_t> samples_ns;  // every timed repetition
};

struct BenchOptions {
  int repetitions = 5;
  bool warmup = true;
};

namespace bench_detail {

template <class Engine>
BenchRecord time_engine(Engine& engine, std::uint64_t steps, std::uint64_t seed, const BenchOptions& opt) {
  const GlobalState init = engine.state();
  if (opt.warmup) {
    static_cast<void>(run(engine, steps, seed));
    engine.set_state(init);
  }
  BenchRecord r;
  r.seed = seed;
  std::vector<std::int64_t> totals;
  for (int k = 0; k < std::max(1, opt.repetitions); ++k) {
    const Trace t = run(engine, steps, seed);
    engine.set_state(init);
    r.steps = t.steps.size();
    totals.push_back(t.elapsed_ns);
  }
  r.samples_ns = totals;
  std::sort(totals.begin(), totals.end());
  r.total_ns = totals[totals.size() / 2];
  r.mean_step_ns = r.steps == 0 ? 0.0 : static_cast<double>(r.total_ns) / static_cast<double>(r.steps);
  return r;
}

}  // namespace bench_detail

/// Times `steps` engine iterations (fewer on deadlock) on `system`. The
/// reported total is the median over the repetitions, after a warm-up run.
inline BenchRecord bench_model(const SystemModel& system, EngineKind engine, std::uint64_t steps,
                               std::uint64_t seed, const BenchOptions& opt = {}) {
  if (steps == 0) throw InputError("bench: steps must be at least 1");
  BenchRecord r;
  if (engine == EngineKind::Enumerative) {
    EnumEngine e(system);
    r = bench_detail::time_engine(e, steps, seed, opt);
  } else {
    SymbolicEngine e(system);
    r = bench_detail::time_engine(e, steps, seed, opt);
    r.nodes = e.stats();
  }
  r.example = system.name;
  r.engine = engine_name(engine);
  return r;
}

/// Named benchmark family: "bus" (uses n) or "tasks" (uses n and m).
inline BenchRecord bench(const std::string& example, int n, int m, std::uint64_t steps, std::uint64_t seed,
                         EngineKind engine, const BenchOptions& opt = {}) {
  if (steps == 0) throw InputError("bench: steps must be at least 1");
  SystemModel system;
  if (example == "bus") {
    system = gen_bus(n);
    m = 0;
  } else if (example == "tasks") {
    system = gen_tasks(n, m);
  } else {
    throw InputError("unknown example '" + example + "' (expected bus or tasks)");
  }
  BenchRecord r = bench_model(system, engine, steps, seed, opt);
  r.example = example;
  r.n = n;
  r.m = m;
  return r;
}

inline constexpr const char* kBenchCsvHeader =
    "example,engine,n,m,steps,total_ns,mean_step_ns,fs_nodes,fb_nodes,fc_nodes,fp_nodes,seed";

inline void write_csv_row(std::ostream& os, const BenchRecord& r) {
  os << r.example << ',' << r.engine << ',' << r.n << ',';
  if (r.m != 0) os << r.m;
  os << ',' << r.steps << ',' << r.total_ns << ',' << std::fixed;
  os.precision(1);
  os << r.mean_step_ns << ',';
  os.unsetf(std::ios::floatfield);
  if (r.nodes) {
    os << r.nodes->fs_nodes << ',' << r.nodes->fb_nodes << ',' << r.nodes->fc_nodes << ',' << r.nodes->fp_nodes;
  } else {
    os << ",,,";
  }
  os << ',' << r.seed << '\n';
}

/// step,interaction,state with a step-0 row for the initial state.
inline void write_trace_csv(std::ostream& os, const SystemModel& system, const Trace& trace) {
  os << "step,interaction,state\n";
  os << "0,," << state_text(system, trace.initial) << '\n';
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    os << k + 1 << ',' << trace.steps[k].interaction.str() << ',' << state_text(system, trace.steps[k].state)
       << '\n';
  }
}

}  // namespace bipsym
