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

#include <filesystem>
#include <random>

#include "support.hpp"

namespace bipsym {
namespace {

using testing::ia;

const char* kModulo8 = R"(
system modulo8 {
  atom B1 { ports p, q; states init l1, l2; trans l1 -[p]-> l2; trans l2 -[p q]-> l1; }
  atom B2 { ports r, s; states init l3, l4; trans l3 -[r]-> l4; trans l4 -[r s]-> l3; }
  atom B3 { ports t, u; states init l5, l6; trans l5 -[t]-> l6; trans l6 -[t u]-> l5; }
  connector x = p' [[q r]' [[s t]' u]];
  priority maximal_progress;
}
)";

std::string models_dir() { return BIPSYM_MODELS_DIR; }

TEST(Dsl, ParsesModuloEight) {
  const ParseResult r = parse(kModulo8);
  ASSERT_TRUE(r.ok()) << format_diagnostic(r.diagnostics.front());
  EXPECT_EQ(*r.model, modulo8());
  EXPECT_EQ(gamma_of(*r.model), (InteractionSet{ia({"p"}), ia({"p", "q", "r"}), ia({"p", "q", "r", "s", "t"}),
                                                ia({"p", "q", "r", "s", "t", "u"})}));
}

TEST(Dsl, BroadcastConnector) {
  const SystemModel m = parse_or_throw(R"(system b {
    atom S { ports s; states init a; trans a -[s]-> a; }
    atom R { ports r1, r2, r3; states init a; trans a -[r1]-> a; }
    connector k = s' r1 r2 r3;
  })");
  EXPECT_EQ(m.connectors.front().term, fuse({trig("s"), sync("r1"), sync("r2"), sync("r3")}));
  EXPECT_EQ(m.priority, PriorityModel::none());
}

TEST(Dsl, UnbalancedBracketIsLocated) {
  const ParseResult r = parse("system x {\n  atom A { ports p; states init a; trans a -[p]-> a; }\n"
                              "  connector c = [p;\n}\n");
  ASSERT_EQ(r.diagnostics.size(), 1U);
  EXPECT_EQ(r.diagnostics[0].kind, "syntax");
  EXPECT_EQ(r.diagnostics[0].line, 3);
  EXPECT_EQ(r.diagnostics[0].column, 19);
  EXPECT_FALSE(r.model.has_value());
}

TEST(Dsl, LexicalErrorIsLocated) {
  const ParseResult r = parse("system x {\n  $\n}");
  ASSERT_EQ(r.diagnostics.size(), 1U);
  EXPECT_EQ(r.diagnostics[0].kind, "lexical");
  EXPECT_EQ(r.diagnostics[0].line, 2);
  EXPECT_EQ(r.diagnostics[0].column, 3);
}

TEST(Dsl, SemanticDiagnosticsPointAtDeclarations) {
  const ParseResult r = parse(R"(system x {
  atom A { ports p; states init a; trans a -[p]-> a; }
  atom B { ports p; states init b; trans b -[p]-> b; }
  connector c = p z;
})");
  ASSERT_EQ(r.diagnostics.size(), 2U);
  EXPECT_EQ(r.diagnostics[0].kind, "disjointness");
  EXPECT_EQ(r.diagnostics[0].line, 3);
  EXPECT_EQ(r.diagnostics[1].kind, "unbound port");
  EXPECT_EQ(r.diagnostics[1].line, 4);
  EXPECT_EQ(r.diagnostics[1].column, 13);
  EXPECT_THROW(static_cast<void>(parse_or_throw("system x { atom A { ports p; states a; } }")), InputError);
}

TEST(Dsl, UnknownStateAndInitProblems) {
  const ParseResult r = parse("system x { atom A { ports p; states init a, init b; trans a -[p]-> c; } }");
  ASSERT_EQ(r.diagnostics.size(), 2U);
  EXPECT_EQ(r.diagnostics[0].kind, "init");
  EXPECT_EQ(r.diagnostics[1].kind, "transition");
  EXPECT_NE(r.diagnostics[1].message.find("'c'"), std::string::npos);
  const ParseResult none = parse("system x { atom A { ports p; states a; } }");
  ASSERT_EQ(none.diagnostics.size(), 1U);
  EXPECT_EQ(none.diagnostics[0].kind, "init");
  EXPECT_EQ(none.diagnostics[0].column, 30);
}

TEST(Dsl, KeywordsAreContextual) {
  const SystemModel m = parse_or_throw(R"(system system {
    atom atom { ports ports, init; states init states, init; trans states -[ports init]-> init; }
    connector connector = ports' init;
  })");
  EXPECT_EQ(m.name, "system");
  EXPECT_EQ(m.atoms[0].states, (std::vector<std::string>{"states", "init"}));
  EXPECT_EQ(m.atoms[0].init, 0U);
  EXPECT_EQ(parse(serialize(m)).model, m);
}

TEST(Dsl, CommentsBomAndConstants) {
  const SystemModel m = parse_or_throw("\xEF\xBB\xBF# header\nsystem x { # trailing\n"
                                       "atom A { ports p; states init a; trans a -[p]-> a; }\n"
                                       "connector c = [1]' p 0; }\n");
  EXPECT_EQ(m.connectors[0].term, fuse({trig(fuse({sync(AcTerm::one())})), sync("p"), sync(AcTerm::zero())}));
}

TEST(Dsl, ExplicitPriorities) {
  const SystemModel m = parse_or_throw(R"(system x {
    atom A { ports p, q; states init a; trans a -[p]-> a; trans a -[p q]-> a; }
    connector c = p' q;
    priority {p} < {p q} {} < {p};
  })");
  EXPECT_EQ(m.priority, PriorityModel::explicit_pairs({{ia({"p"}), ia({"p", "q"})}, {Interaction{}, ia({"p"})}}));
  EXPECT_EQ(parse(serialize(m)).model, m);
}

TEST(Dsl, EmptySystem) {
  SystemModel m;
  m.name = "X";
  EXPECT_EQ(serialize(m), "system X { }\n");
  EXPECT_EQ(parse_or_throw(serialize(m)), m);
}

TEST(Dsl, SerializeIsCanonical) {
  const std::string text = serialize(modulo8());
  EXPECT_NE(text.find("connector x = p' [[q r]' [[s t]' u]];"), std::string::npos);
  EXPECT_NE(text.find("states init l1, l2;"), std::string::npos);
  EXPECT_NE(text.find("trans l2 -[p q]-> l1;"), std::string::npos);
  EXPECT_EQ(serialize(parse_or_throw(text)), text);
}

TEST(Dsl, RoundTripsBenchmarkCorpus) {
  std::vector<SystemModel> corpus{modulo8(), gen_tasks(2, 1), gen_tasks(3, 4)};
  for (int n = 1; n <= 4; ++n) {
    corpus.push_back(gen_bus(n));
    corpus.push_back(gen_bus(n, true));
  }
  for (const auto& m : corpus) EXPECT_EQ(parse_or_throw(serialize(m)), m) << m.name;
}

TEST(Dsl, RoundTripsRandomSystems) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SystemModel m = gen_random(seed, {4, 3, 3, 4});
    const ParseResult r = parse(serialize(m));
    ASSERT_TRUE(r.ok()) << serialize(m);
    ASSERT_EQ(*r.model, m) << serialize(m);
  }
}

TEST(Dsl, RandomGoldenFile) {
  const std::string golden = read_text_file(models_dir() + "/../tests/golden/random_seed0.bip-lite");
  EXPECT_EQ(serialize(gen_random(0, {2, 2, 2, 2})), golden);
}

TEST(Dsl, ShippedModelsParse) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(models_dir())) {
    if (entry.path().extension() != ".bip-lite") continue;
    const SystemModel m = load_model(entry.path().string());
    EXPECT_EQ(parse_or_throw(serialize(m)), m) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 3);
  EXPECT_EQ(load_model(models_dir() + "/modulo8.bip-lite"), modulo8());
  EXPECT_EQ(load_model(models_dir() + "/bus2.bip-lite"), gen_bus(2));
  EXPECT_THROW(static_cast<void>(load_model(models_dir() + "/missing.bip-lite")), InputError);
}

void expect_located(const std::string& text) {
  ParseResult r;
  ASSERT_NO_THROW(r = parse(text));
  EXPECT_EQ(r.ok(), r.model.has_value());
  for (const auto& d : r.diagnostics) {
    EXPECT_GT(d.line, 0) << format_diagnostic(d);
    EXPECT_GT(d.column, 0) << format_diagnostic(d);
  }
}

TEST(DslFuzz, ArbitraryBytesNeverThrow) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 2000; ++k) {
    std::string text(rng() % 200, '\0');
    for (auto& c : text) c = static_cast<char>(rng() & 0xff);
    expect_located(text);
  }
}

TEST(DslFuzz, MutatedModelsNeverThrow) {
  std::mt19937_64 rng(37);
  const std::string base = serialize(gen_tasks(2, 2));
  const std::string alphabet = "{}[];,=<'-> #\nabcpqinitstatestrans01";
  for (int k = 0; k < 3000; ++k) {
    std::string text = base;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits && !text.empty(); ++e) {
      const std::size_t at = rng() % text.size();
      switch (rng() % 3) {
        case 0:
          text.erase(at, 1 + rng() % 5);
          break;
        case 1:
          text.insert(at, 1, alphabet[rng() % alphabet.size()]);
          break;
        default:
          text[at] = alphabet[rng() % alphabet.size()];
      }
    }
    expect_located(text);
  }
}

TEST(DslFuzz, DeepNestingIsADiagnostic) {
  std::string text = "system x { atom A { ports p; states init a; trans a -[p]-> a; } connector c = ";
  text += std::string(100000, '[');
  text += "p";
  text += std::string(100000, ']');
  text += "; }";
  const ParseResult r = parse(text);
  ASSERT_EQ(r.diagnostics.size(), 1U);
  EXPECT_NE(r.diagnostics[0].message.find("nested"), std::string::npos);
}

}  // namespace
}  // namespace bipsym
