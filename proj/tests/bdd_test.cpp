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

#include <random>
#include <sstream>

#include "bdd_oracle.hpp"
#include "support.hpp"

namespace bipsym {
namespace {

TEST(BddOracle, AllPairsOverThreeVariablesAndRandomPairsOverFour) {
  const testing::OracleResult r = testing::run_bdd_oracle(2026, 1000);
  EXPECT_EQ(r.failures, 0U) << r.first_failure;
  EXPECT_GT(r.checks, 256U * 256U * 10U);
}

TEST(Bdd, TerminalsAndVariables) {
  BddManager mgr({"a", "b"});
  EXPECT_TRUE(mgr.is_false(mgr.zero()));
  EXPECT_TRUE(mgr.is_true(mgr.one()));
  EXPECT_EQ(mgr.var("a"), mgr.var("a"));
  EXPECT_EQ(mgr.node_count(mgr.var("a")), 1U);
  EXPECT_EQ(mgr.node_count(mgr.one()), 0U);
  EXPECT_EQ(mgr.negate(mgr.var("a")), mgr.nvar_at(0));
  EXPECT_EQ(mgr.top_level(mgr.var("b")), 1U);
}

TEST(Bdd, RejectsBadInput) {
  EXPECT_THROW(BddManager({"a", "a"}), InputError);
  BddManager mgr({"a"});
  BddManager other({"a"});
  EXPECT_THROW(static_cast<void>(mgr.var("zz")), InputError);
  EXPECT_THROW(static_cast<void>(mgr.var_at(5)), InputError);
  EXPECT_THROW(static_cast<void>(mgr.conj(mgr.var("a"), other.var("a"))), InputError);
  EXPECT_THROW(static_cast<void>(mgr.restrict_cube(mgr.var("a"), mgr.zero())), InputError);
  // a disjunction is not a cube
  BddManager two({"a", "b"});
  EXPECT_THROW(static_cast<void>(two.exists(two.var("a"), two.disj(two.var("a"), two.var("b")))), InputError);
}

TEST(Bdd, CubeOfNLiteralsHasNNodes) {
  BddManager mgr({"a", "b", "c", "d", "e"});
  const BddRef c = mgr.cube({{4, true}, {0, false}, {2, true}});
  EXPECT_EQ(mgr.node_count(c), 3U);
  EXPECT_EQ(mgr.sat_count(c), 4.0);
  EXPECT_TRUE(mgr.is_false(mgr.cube({{1, true}, {1, false}})));
  EXPECT_EQ(mgr.cube({}), mgr.one());
}

TEST(Bdd, SupportAndSatEnumeration) {
  BddManager mgr({"a", "b", "c"});
  const BddRef f = mgr.disj(mgr.var("a"), mgr.var("c"));
  EXPECT_EQ(mgr.support(f), (std::vector<std::uint32_t>{0, 2}));
  int count = 0;
  mgr.for_each_sat(f, {0, 2}, [&](const std::vector<bool>& v) {
    EXPECT_TRUE(v[0] || v[1]);
    ++count;
  });
  EXPECT_EQ(count, 3);
}

TEST(Bdd, PickSatIsSeededAndSatisfying) {
  BddManager mgr({"a", "b", "c", "d"});
  const BddRef f = mgr.apply(BddOp::Xor, mgr.var("a"), mgr.conj(mgr.var("b"), mgr.var("d")));
  EXPECT_FALSE(mgr.pick_sat(mgr.zero(), 1).has_value());
  std::set<std::vector<bool>> seen;
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto v = mgr.pick_sat(f, s);
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(mgr.eval(f, *v));
    EXPECT_FALSE((*v)[2]) << "variables outside the support stay false";
    EXPECT_EQ(v, mgr.pick_sat(f, s));
    seen.insert(*v);
  }
  EXPECT_EQ(seen.size(), 4U) << "every model over the support is reachable";
}

TEST(Bdd, RollbackDiscardsScratchNodes) {
  BddManager mgr({"a", "b", "c"});
  const BddRef keep = mgr.conj(mgr.var("a"), mgr.var("b"));
  const std::size_t before = mgr.size();
  mgr.checkpoint();
  const BddRef tmp = mgr.disj(keep, mgr.var("c"));
  EXPECT_GT(mgr.size(), before);
  EXPECT_EQ(mgr.node_count(tmp), 3U);
  mgr.rollback();
  EXPECT_EQ(mgr.size(), before);
  EXPECT_TRUE(mgr.audit());
  // rebuilt after rollback: identical function, no stale cache hits
  const BddRef again = mgr.disj(keep, mgr.var("c"));
  EXPECT_EQ(mgr.sat_count(again), 5.0);
  EXPECT_TRUE(mgr.audit());
}

TEST(Bdd, CanonicalInsideCheckpoint) {
  std::mt19937_64 rng(31);
  testing::TruthTableOracle o(4);
  BddManager& mgr = o.mgr();
  const BddRef base = o.build(0x6a5c);
  const std::size_t before = mgr.size();
  mgr.checkpoint();
  std::vector<std::pair<std::uint32_t, BddRef>> made;
  for (int i = 0; i < 3000; ++i) {
    const auto t = static_cast<std::uint32_t>(rng() & 0xffff);
    made.emplace_back(t, o.build(t));
  }
  EXPECT_TRUE(mgr.audit());
  for (const auto& [t, f] : made) {
    EXPECT_EQ(o.build(t), f);
    EXPECT_EQ(o.table_of(f), t);
  }
  EXPECT_EQ(o.build(0x6a5c), base) << "existing nodes are found, not duplicated";
  mgr.rollback();
  EXPECT_EQ(mgr.size(), before);
  EXPECT_TRUE(mgr.audit());
}

TEST(Bdd, CompactKeepsRootsAndDropsGarbage) {
  std::mt19937_64 rng(9);
  testing::TruthTableOracle o(4);
  BddManager& mgr = o.mgr();
  std::vector<BddRef> junk;
  for (int i = 0; i < 50; ++i) junk.push_back(o.build(static_cast<std::uint32_t>(rng() & 0xffff)));
  const std::uint32_t ta = 0x1234;
  const std::uint32_t tb = 0xbeef;
  BddRef a = o.build(ta);
  BddRef b = o.build(tb);
  const std::size_t before = mgr.size();
  mgr.compact({&a, &b});
  EXPECT_LT(mgr.size(), before);
  EXPECT_TRUE(mgr.audit());
  EXPECT_EQ(o.table_of(a), ta);
  EXPECT_EQ(o.table_of(b), tb);
  EXPECT_EQ(o.build(ta), a) << "hash-consing survives compaction";
  mgr.checkpoint();
  EXPECT_THROW(mgr.compact({&a}), ContractViolation);
  mgr.rollback();
}

TEST(Bdd, NamedExistsAndRestrict) {
  BddManager mgr({"a", "b"});
  const BddRef f = mgr.conj(mgr.var("a"), mgr.var("b"));
  EXPECT_EQ(mgr.exists(f, std::vector<std::string>{"a"}), mgr.var("b"));
  EXPECT_EQ(mgr.restrict(f, "b", false), mgr.zero());
  EXPECT_EQ(mgr.restrict(f, "b", true), mgr.var("a"));
}

TEST(Bdd, DotOutputNamesVariables) {
  BddManager mgr({"alpha", "beta"});
  std::ostringstream os;
  mgr.to_dot(mgr.disj(mgr.var("alpha"), mgr.var("beta")), os);
  EXPECT_NE(os.str().find("alpha"), std::string::npos);
  EXPECT_NE(os.str().find("digraph"), std::string::npos);
}

TEST(Bdd, ManyVariablesStayCanonical) {
  VarOrder order;
  for (int i = 0; i < 40; ++i) order.push_back("v" + std::to_string(i));
  BddManager mgr(order);
  // parity in two association orders
  BddRef left = mgr.zero();
  for (std::uint32_t i = 0; i < 40; ++i) left = mgr.apply(BddOp::Xor, left, mgr.var_at(i));
  BddRef right = mgr.zero();
  for (std::uint32_t i = 40; i-- > 0;) right = mgr.apply(BddOp::Xor, mgr.var_at(i), right);
  EXPECT_EQ(left, right);
  EXPECT_EQ(mgr.node_count(left), 2U * 40U - 1U);
  EXPECT_TRUE(mgr.audit());
}

}  // namespace
}  // namespace bipsym
