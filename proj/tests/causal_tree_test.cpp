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

#include "support.hpp"

namespace bipsym {
namespace {

using testing::ia;

CausalTree forest(std::vector<CausalNode> roots) { return CausalTree{std::move(roots)}; }

TEST(CausalTree, Rendezvous) {
  const AcTerm x = fuse({sync("s"), sync("r1"), sync("r2"), sync("r3")});
  EXPECT_TRUE(equivalent(tau(x), forest({cnode(ia({"s", "r1", "r2", "r3"}))})));
}

TEST(CausalTree, Broadcast) {
  const AcTerm x = fuse({trig("s"), sync("r1"), sync("r2"), sync("r3")});
  const CausalTree want = forest({cnode(ia({"s"}), {cnode(ia({"r1"})), cnode(ia({"r2"})), cnode(ia({"r3"}))})});
  EXPECT_TRUE(equivalent(tau(x), want)) << tau(x);
  EXPECT_EQ(to_string(canonical(tau(x))), "s → (r1 ⊕ r2 ⊕ r3)");
}

TEST(CausalTree, AtomicBroadcast) {
  const AcTerm x = fuse({trig("s"), sync(fuse({sync("r1"), sync("r2"), sync("r3")}))});
  EXPECT_TRUE(equivalent(tau(x), forest({chain({ia({"s"}), ia({"r1", "r2", "r3"})})}))) << tau(x);
}

TEST(CausalTree, CausalChain) {
  const AcTerm x = fuse({trig("s"), sync(fuse({trig("r1"), sync(fuse({trig("r2"), sync("r3")}))}))});
  EXPECT_TRUE(equivalent(tau(x), forest({chain({ia({"s"}), ia({"r1"}), ia({"r2"}), ia({"r3"})})}))) << tau(x);
}

TEST(CausalTree, TwoTriggersOverTwoSynchronPairs) {
  // p' q' [[r' s] [t' u]]
  const AcTerm x = fuse({trig("p"), trig("q"),
                         sync(fuse({sync(fuse({trig("r"), sync("s")})), sync(fuse({trig("t"), sync("u")}))}))});
  auto branch = [](const char* root) {
    return cnode(ia({root}), {cnode(ia({"r", "t"}), {cnode(ia({"s"})), cnode(ia({"u"}))})});
  };
  EXPECT_TRUE(equivalent(tau(x), forest({branch("p"), branch("q")}))) << tau(x);
}

TEST(CausalTree, ModuloEightChainAndRules) {
  const CausalTree t = tau(modulo8().connectors.front().term);
  EXPECT_TRUE(equivalent(t, forest({chain({ia({"p"}), ia({"q", "r"}), ia({"s", "t"}), ia({"u"})})}))) << t;

  const CausalRuleSet rs = causal_rules(t);
  std::vector<CausalRule> want{{"q", {ia({"p", "r"})}},
                               {"r", {ia({"p", "q"})}},
                               {"s", {ia({"q", "r", "t"})}},
                               {"t", {ia({"q", "r", "s"})}},
                               {"u", {ia({"s", "t"})}}};
  EXPECT_EQ(rs.rules, want) << to_string(rs);
  EXPECT_EQ(rs.root_clause, ia({"p"}));
}

TEST(CausalTree, RulesMergeOverSeveralParents) {
  // a → c ⊕ b → c : c needs a or b
  const CausalTree t = forest({cnode(ia({"a"}), {cnode(ia({"c"}))}), cnode(ia({"b"}), {cnode(ia({"c"}))})});
  const CausalRuleSet rs = causal_rules(t);
  ASSERT_EQ(rs.rules.size(), 1U);
  EXPECT_EQ(rs.rules[0].head, "c");
  EXPECT_EQ(rs.rules[0].body, (std::set<Interaction>{ia({"a"}), ia({"b"})}));
  EXPECT_EQ(rs.root_clause, ia({"a", "b"}));
}

TEST(CausalTree, ConstantsAndEmptyLabels) {
  EXPECT_TRUE(tau(AcTerm::zero()).empty());
  EXPECT_EQ(ct_interactions(tau(AcTerm::zero())), InteractionSet{});
  EXPECT_EQ(ct_interactions(tau(AcTerm::one())), InteractionSet{Interaction{}});
  // 1 → p : the empty-labelled root is transparent for the rules
  const CausalTree t = forest({cnode(Interaction{}, {cnode(ia({"p"}))})});
  const CausalRuleSet rs = causal_rules(t);
  EXPECT_TRUE(rs.rules.empty());
  EXPECT_EQ(ct_interactions(t), (InteractionSet{Interaction{}, ia({"p"})}));
}

TEST(CausalTree, RulesFormulaOfModuloEight) {
  BddManager mgr({"p", "q", "r", "s", "t", "u"});
  const BddRef f = rules_to_formula(causal_rules(tau(modulo8().connectors.front().term)), mgr);
  auto v = [&](const char* n) { return mgr.var(n); };
  auto imp = [&](BddRef a, BddRef b) { return mgr.apply(BddOp::Implies, a, b); };
  BddRef want = v("p");
  want = mgr.conj(want, imp(v("q"), mgr.conj(v("p"), v("r"))));
  want = mgr.conj(want, imp(v("r"), mgr.conj(v("p"), v("q"))));
  want = mgr.conj(want, imp(v("s"), mgr.conj(v("q"), mgr.conj(v("r"), v("t")))));
  want = mgr.conj(want, imp(v("t"), mgr.conj(v("q"), mgr.conj(v("r"), v("s")))));
  want = mgr.conj(want, imp(v("u"), mgr.conj(v("s"), v("t"))));
  EXPECT_EQ(f, want);
}

TEST(CausalTreeProperty, TreeSemanticsMatchesConnectorSemantics) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const AcTerm x = testing::random_connector(rng, 1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 4),
                                               k % 3 == 0);
    ASSERT_EQ(ct_interactions(tau(x)), testing::brute_interactions(x)) << to_string(x) << "  tau: " << tau(x);
  }
}

TEST(CausalTreeProperty, FormulaSatisfiersAreTheNonEmptyInteractions) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const AcTerm x = testing::random_connector(rng, n, 1 + static_cast<int>(rng() % 4), k % 3 == 0);
    VarOrder order;
    for (int i = 0; i < n; ++i) order.push_back("p" + std::to_string(i));
    BddManager mgr(order);
    const BddRef f = connector_formula(x, mgr);
    InteractionSet want = testing::brute_interactions(x);
    want.erase(Interaction{});
    ASSERT_EQ(testing::brute_sat(mgr, f, support(x)), want) << to_string(x);
  }
}

}  // namespace
}  // namespace bipsym
