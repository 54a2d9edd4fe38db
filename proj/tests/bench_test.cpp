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

#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

namespace bipsym {
namespace {

using testing::ia;

TEST(Generators, BusConnectorCount) {
  for (int n : {1, 2, 3, 7}) {
    const SystemModel m = gen_bus(n);
    EXPECT_EQ(m.atoms.size(), 4U * static_cast<std::size_t>(n));
    EXPECT_EQ(m.connectors.size(), 5U * static_cast<std::size_t>(n));
    EXPECT_TRUE(validate(m).empty());
    EXPECT_TRUE(m.priority.is_maximal_progress());
  }
  EXPECT_THROW(static_cast<void>(gen_bus(0)), InputError);
}

TEST(Generators, BusAtomsAlternate) {
  const SystemModel bus = gen_bus(1);
  const AtomicBehavior& a = bus.atoms[0];
  EXPECT_EQ(a.transitions, (std::vector<Transition>{{0, ia({"c1_1"}), 1}, {1, ia({"s1_1"}), 0}}));
  const SystemModel reversed = gen_bus(1, true);
  const AtomicBehavior& r = reversed.atoms[0];
  EXPECT_EQ(r.transitions, (std::vector<Transition>{{0, ia({"s1_1"}), 1}, {1, ia({"c1_1"}), 0}}));
}

TEST(Generators, TasksConnectorCount) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 4}, {4, 2}, {5, 3}}) {
    const SystemModel s = gen_tasks(n, m);
    EXPECT_EQ(s.atoms.size(), static_cast<std::size_t>(n + m));
    EXPECT_EQ(s.connectors.size(), static_cast<std::size_t>(2 * n * (n - 1) * m));
    EXPECT_TRUE(validate(s).empty());
  }
  EXPECT_THROW(static_cast<void>(gen_tasks(1, 1)), InputError);
  EXPECT_THROW(static_cast<void>(gen_tasks(2, 0)), InputError);
}

TEST(Generators, TaskStartConnectorHasTwoInteractions) {
  const SystemModel s = gen_tasks(2, 1);
  EXPECT_EQ(interactions_of(s.connectors[0].term),
            (InteractionSet{ia({"T2_b1", "P1_s"}), ia({"T2_b1", "P1_s", "T1_p1"})}));
}

TEST(Generators, ProcessorAndTaskAutomata) {
  const SystemModel s = gen_tasks(2, 2);
  const AtomicBehavior& t = s.atoms[0];
  EXPECT_EQ(t.states, (std::vector<std::string>{"s", "c1", "w1", "c2", "w2"}));
  EXPECT_EQ(t.transitions.size(), 8U);
  const AtomicBehavior& p = s.atoms[2];
  EXPECT_EQ(p.name, "P1");
  EXPECT_EQ(p.transitions.size(), 4U);
}

TEST(Equivalence, ModuloEight) {
  const SystemModel m = modulo8();
  const EquivalenceReport r = check_equivalence(m, 1000);
  EXPECT_TRUE(r.equivalent());
  EXPECT_EQ(r.states, 8U);
  EXPECT_FALSE(r.truncated);
  EXPECT_EQ(describe(m, r), "equivalent, 8 states");
}

TEST(Equivalence, SmallBenchmarks) {
  for (const SystemModel& m : {gen_tasks(2, 1), gen_bus(1), gen_tasks(3, 2)}) {
    const EquivalenceReport r = check_equivalence(m, 100000);
    EXPECT_TRUE(r.equivalent()) << describe(m, r);
    EXPECT_FALSE(r.truncated);
  }
}

TEST(Equivalence, TruncationIsFlagged) {
  const EquivalenceReport r = check_equivalence(gen_bus(3), 10);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.states, 10U);
}

TEST(Equivalence, CorruptedEncodingIsCaught) {
  const SystemModel m = modulo8();
  EquivalenceOptions opt;
  // drop the connectors: every behavior move becomes "enabled"
  opt.corrupt = [](SystemEncoding& enc) { enc.f_s = enc.f_b; };
  const EquivalenceReport r = check_equivalence(m, 1000, opt);
  EXPECT_FALSE(r.equivalent());
  EXPECT_NE(describe(m, r).find("divergent"), std::string::npos);
  EquivalenceOptions no_priority;
  no_priority.corrupt = [](SystemEncoding& enc) { enc.priority_guard = enc.mgr->zero(); };
  EXPECT_FALSE(check_equivalence(gen_tasks(2, 1), 1000, no_priority).equivalent());
}

TEST(Bench, RecordsAndCsv) {
  BenchOptions quick{1, false};
  const BenchRecord e = bench("bus", 2, 0, 200, 7, EngineKind::Enumerative, quick);
  EXPECT_EQ(e.steps, 200U);
  EXPECT_GT(e.total_ns, 0);
  EXPECT_FALSE(e.nodes.has_value());
  const BenchRecord s = bench("tasks", 2, 1, 100, 7, EngineKind::Symbolic, quick);
  ASSERT_TRUE(s.nodes.has_value());
  EXPECT_GT(s.nodes->fs_nodes, 0U);
  std::ostringstream os;
  write_csv_row(os, e);
  write_csv_row(os, s);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, 16), "bus,enum,2,,200,");
  EXPECT_NE(text.find(",,,,7\n"), std::string::npos);
  EXPECT_NE(text.find("tasks,symbolic,2,1,100,"), std::string::npos);
  EXPECT_EQ(std::string(kBenchCsvHeader),
            "example,engine,n,m,steps,total_ns,mean_step_ns,fs_nodes,fb_nodes,fc_nodes,fp_nodes,seed");
}

TEST(Bench, MedianOfRepetitions) {
  const BenchRecord r = bench("bus", 1, 0, 50, 1, EngineKind::Symbolic, {5, true});
  ASSERT_EQ(r.samples_ns.size(), 5U);
  std::vector<std::int64_t> sorted = r.samples_ns;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(r.total_ns, sorted[2]);
}

TEST(Bench, RejectsBadInput) {
  EXPECT_THROW(static_cast<void>(bench("bus", 2, 0, 0, 1, EngineKind::Enumerative)), InputError);
  EXPECT_THROW(static_cast<void>(bench("ring", 2, 0, 10, 1, EngineKind::Enumerative)), InputError);
  EXPECT_THROW(static_cast<void>(bench("tasks", 1, 1, 10, 1, EngineKind::Enumerative)), InputError);
  EXPECT_THROW(static_cast<void>(parse_engine("fast")), InputError);
}

TEST(Bench, TraceCsv) {
  const SystemModel m = modulo8();
  EnumEngine e(m);
  const Trace t = run(e, 2, 0);
  std::ostringstream os;
  write_trace_csv(os, m, t);
  EXPECT_EQ(os.str(), "step,interaction,state\n0,,l1 l3 l5\n1,p,l2 l3 l5\n2,p q r,l1 l4 l5\n");
}

}  // namespace
}  // namespace bipsym
