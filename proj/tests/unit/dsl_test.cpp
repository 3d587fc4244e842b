// Copyright 2026 The Quantale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "quantale/dsl.hpp"

using namespace quantale;
using namespace quantale::testing;

namespace {

const char* kRedWorld = R"({
  "pixies": ["x1"],
  "variables": ["x"],
  "joint": [{"assign": {"x": "x1"}, "prob": 1.0}],
  "predicates": {"red": {"x1": 0.7}}
})";

SourceDiagnostic only_error(const std::vector<SourceDiagnostic>& diagnostics) {
  EXPECT_EQ(diagnostics.size(), 1u);
  return diagnostics.empty() ? SourceDiagnostic{} : diagnostics.front();
}

std::size_t count_kind(const ScopeGraph& g, std::size_t index) {
  std::size_t n = 0;
  for (const auto& node : g.nodes()) n += node.value.index() == index;
  return n;
}

}  // namespace

TEST(ParseWorld, RedWorld) {
  const auto r = parse_world(kRedWorld);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.diagnostics.empty());
  const auto& w = *r.value;
  ASSERT_EQ(w.model.joint().size(), 1u);
  EXPECT_EQ(w.model.joint()[0].mass, 1.0);
  EXPECT_EQ(w.lexicon.at("red")(0), 0.7);
}

TEST(ParseWorld, JointMassMismatch) {
  const auto r = parse_world(R"({
  "pixies": ["a", "b"],
  "variables": ["x"],
  "joint": [{"assign": {"x": "a"}, "prob": 0.5},
            {"assign": {"x": "b"}, "prob": 0.4}]
})");
  EXPECT_FALSE(r.ok());
  const auto d = only_error(r.diagnostics);
  EXPECT_EQ(d.message, "joint mass 0.9 ≠ 1");
  EXPECT_EQ(d.line, 4u);
  EXPECT_EQ(d.column, 12u);
}

TEST(ParseWorld, PredicateOutOfRangeHasALocation) {
  const auto r = parse_world(R"({
  "pixies": ["x1"],
  "variables": ["x"],
  "joint": [{"assign": {"x": "x1"}, "prob": 1.0}],
  "predicates": {"red": {"x1": 1.3}}
})");
  const auto d = only_error(r.diagnostics);
  EXPECT_EQ(d.message, "predicate 'red' probability 1.3 at pixie 'x1' outside [0,1]");
  EXPECT_EQ(d.line, 5u);
  EXPECT_EQ(d.column, 32u);
  EXPECT_EQ(d.snippet, R"(  "predicates": {"red": {"x1": 1.3}})");
  EXPECT_EQ(format_diagnostic(d, "red.json"),
            "red.json:5:32: error: predicate 'red' probability 1.3 at pixie 'x1' outside [0,1]\n"
            "    \"predicates\": {\"red\": {\"x1\": 1.3}}\n"
            "                                 ^\n");
}

TEST(ParseWorld, CollectsEveryError) {
  const auto r = parse_world(R"({
  "pixies": ["a", "a"],
  "variables": ["x", "and"],
  "joint": [],
  "colour": 1
})");
  EXPECT_FALSE(r.ok());
  std::vector<std::string> messages;
  for (const auto& d : r.diagnostics) messages.push_back(d.message);
  EXPECT_EQ(messages, (std::vector<std::string>{"unknown key 'colour'", "duplicate pixie 'a'",
                                                "variable name 'and' is not a usable identifier",
                                                "'joint' must be a non-empty array"}));
}

TEST(ParseWorld, JsonSyntaxError) {
  const auto r = parse_world("{\n  \"pixies\": [\"a\",]\n}");
  const auto d = only_error(r.diagnostics);
  EXPECT_EQ(d.line, 2u);
  EXPECT_EQ(d.column, 18u);
}

TEST(ParseWorld, RejectsNumbersBeyondFifteenDigits) {
  const auto r = parse_world(R"({"pixies": ["a"], "variables": ["x"],
  "joint": [{"assign": {"x": "a"}, "prob": 1.0000000000000001}]})");
  EXPECT_EQ(only_error(r.diagnostics).message, "probability has more than 15 significant digits");
}

TEST(SerializeWorld, RoundTrip) {
  const auto w = *parse_world(kRedWorld).value;
  const auto text = serialize_world(w);
  const auto again = parse_world(text);
  ASSERT_TRUE(again.ok());
  EXPECT_TRUE(structurally_equal(w, *again.value));
  EXPECT_EQ(serialize_world(*again.value), text);
}

TEST(SerializeWorld, RandomWorldsRoundTrip) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto w = random_vague_world(rng);
    const auto again = parse_world(serialize_world(w));
    ASSERT_TRUE(again.ok()) << serialize_world(w);
    EXPECT_TRUE(structurally_equal(w, *again.value));
  }
}

TEST(SerializeWorld, CanonicalLayout) {
  const auto w = make_world({"b", "a"}, {"x"}, {{{"b"}, 0.5}, {{"a"}, 0.5}},
                            {{"p", {{"a", 0.0}, {"b", 0.25}}}});
  EXPECT_EQ(serialize_world(w), R"({
  "joint": [
    {
      "assign": {
        "x": "a"
      },
      "prob": 0.5
    },
    {
      "assign": {
        "x": "b"
      },
      "prob": 0.5
    }
  ],
  "pixies": [
    "a",
    "b"
  ],
  "predicates": {
    "p": {
      "b": 0.25
    }
  },
  "variables": [
    "x"
  ]
}
)");
}

TEST(ParseProp, PictureStoryTree) {
  const auto r = parse_prop("(every (x) (picture x) (a (z) (story z) (some (y) true (tell y))))");
  ASSERT_TRUE(r.ok());
  const auto& g = *r.value;
  EXPECT_EQ(g.size(), 7u);
  EXPECT_EQ(count_kind(g, 3), 3u);
  const auto& root = std::get<Quantifier>(g.node(g.root()).value);
  EXPECT_EQ(root.shape.kind(), QuantifierKind::Every);
  const auto& a = std::get<Quantifier>(g.node(root.body).value);
  EXPECT_EQ(a.shape.kind(), QuantifierKind::Some);
  EXPECT_EQ(a.bound, std::vector<std::string>{"z"});
  EXPECT_EQ(g.node(g.root()).location, (SourceLocation{1, 1}));
}

TEST(ParseProp, TrueAlone) {
  const auto r = parse_prop("true");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.value->size(), 1u);
  EXPECT_TRUE(std::holds_alternative<Tautology>(r.value->node(0).value));
}

TEST(ParseProp, LetBindingIsShared) {
  const auto g = fixture_prop("donkey_dag.prop");
  EXPECT_EQ(count_kind(g, 3), 5u);
  const auto a = analyze(g);
  std::size_t shared = 0;
  for (NodeId id : a.order) shared += a.parent_edges[id] > 1;
  EXPECT_EQ(shared, 1u);
  EXPECT_EQ(g.aliases().count("rc"), 1u);
}

TEST(ParseProp, TextualCopiesAreDistinctNodes) {
  const auto copied = prop("(and (many (x) true (r x)) (many (x) true (r x)))");
  const auto shared = prop("(let (m (many (x) true (r x))) (and #m #m))");
  EXPECT_EQ(count_kind(copied, 3), 2u);
  EXPECT_EQ(count_kind(shared, 3), 1u);
  EXPECT_FALSE(structurally_equal(copied, shared));
}

TEST(ParseProp, Diagnostics) {
  const std::pair<const char*, std::tuple<const char*, std::size_t, std::size_t>> cases[] = {
      {"(every (x) true (red x)", {"expected ')' after the quantifier body before end of input", 1, 24}},
      {"(every (x) true\n  (foo (y) true (red y)))", {"unknown quantifier keyword 'foo'", 2, 4}},
      {"(every (x) true #r)", {"unknown reference '#r'", 1, 17}},
      {"(let (a (red x)) (a (red y)) #a)", {"'a' is a keyword, not a binding name", 1, 7}},
      {"(let (r (red x)) (r (red y)) #r)", {"duplicate let name 'r'", 1, 19}},
      {"(every (x) (let (r (red x)) #r) (red x))", {"'let' is only allowed at the top level", 1, 13}},
      {"(and)", {"'and' needs at least one operand", 1, 5}},
      {"(every () true (red x))", {"a quantifier binds at least one variable", 1, 9}},
      {"(red x) extra", {"unexpected input after the proposition", 1, 9}},
  };
  for (const auto& [text, expected] : cases) {
    const auto r = parse_prop(text);
    EXPECT_FALSE(r.ok()) << text;
    ASSERT_FALSE(r.diagnostics.empty()) << text;
    const auto& d = r.diagnostics.front();
    EXPECT_EQ(d.message, std::get<0>(expected)) << text;
    EXPECT_EQ(d.line, std::get<1>(expected)) << text;
    EXPECT_EQ(d.column, std::get<2>(expected)) << text;
  }
}

TEST(ParseProp, UnusedBindingIsAWarning) {
  const auto r = parse_prop("(let (u (red x)) (every (x) true (red x)))");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].severity, Severity::Warning);
  EXPECT_EQ(r.diagnostics[0].column, 7u);
  EXPECT_EQ(r.value->size(), 3u);
}

TEST(SerializeProp, RoundTripsFixturesAndRandomGraphs) {
  for (const char* name : {"picture_story.prop", "donkey_dag.prop", "kitchen.prop", "every_red.prop"}) {
    const auto g = fixture_prop(name);
    const auto text = serialize_prop(g);
    const auto again = parse_prop(text);
    ASSERT_TRUE(again.ok()) << text;
    EXPECT_TRUE(structurally_equal(g, *again.value)) << text;
    EXPECT_EQ(serialize_prop(*again.value), text);
  }
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng, 1 + t % 12);
    const auto again = parse_prop(serialize_prop(g));
    ASSERT_TRUE(again.ok()) << serialize_prop(g);
    EXPECT_TRUE(structurally_equal(g, *again.value)) << serialize_prop(g);
  }
}

TEST(SerializeProp, KeepsAliasesAndNamesAnonymousSharing) {
  EXPECT_EQ(serialize_prop(fixture_prop("donkey_dag.prop")),
            "(let\n"
            "  (rc (and (farmer x) (some (y) true (own y))))\n"
            "  (every (x) (some (z) #rc (donkey z)) (generic (z) (and #rc (donkey z)) "
            "(some (w) true (feed w)))))\n");
  ScopeGraph g;
  const auto leaf = g.add_application("red", "x");
  g.set_root(g.add_quantifier(QuantifierKind::Every, {"x"}, leaf, leaf));
  EXPECT_EQ(serialize_prop(g), "(let\n  (n1 (red x))\n  (every (x) #n1 #n1))\n");
}

TEST(SerializeProp, CustomShapesHaveNoSyntax) {
  ScopeGraph g;
  const auto t = g.add_tautology();
  g.set_root(g.add_quantifier(QuantifierShape::custom("half", ShapeSpec::for_kind(QuantifierKind::Many)),
                              {"x"}, t, t));
  EXPECT_THROW(serialize_prop(g), Error);
}

TEST(ParseScenario, Prevalence) {
  const auto sc = fixture_scenario("prevalence.scenario.json");
  ASSERT_EQ(sc.states.size(), 2u);
  EXPECT_DOUBLE_EQ(sc.states[0].prior + sc.states[1].prior, 1.0);
  EXPECT_EQ(sc.states[1].value, 0.5);
  ASSERT_EQ(sc.utterances.size(), 2u);
  EXPECT_EQ(sc.utterances[1].id, "silence");
  EXPECT_TRUE(std::isinf(sc.alpha));
}

TEST(ParseScenario, Diagnostics) {
  const auto dir = fixture_path("");
  const auto no_utterances = parse_scenario(
      R"({"states": [{"id": "s", "prior": 1, "world": "red_0.7.json"}], "utterances": []})", dir);
  EXPECT_EQ(only_error(no_utterances.diagnostics).message, "scenario has no utterances");

  const auto missing_predicate = parse_scenario(R"js({
  "states": [{"id": "a", "prior": 0.5, "world": "red_0.7.json"},
             {"id": "b", "prior": 0.5, "world": "dog_barks.json"}],
  "utterances": [{"id": "u", "prop": "(some (x) true (red x))"}]
})js", dir);
  const auto d = only_error(missing_predicate.diagnostics);
  EXPECT_EQ(d.message, "utterance 'u' in state 'b': unknown predicate 'red'");
  EXPECT_EQ(d.line, 4u);

  const auto priors = parse_scenario(R"js({
  "states": [{"id": "a", "prior": 0.5, "world": "red_0.7.json"},
             {"id": "b", "prior": 0.4, "world": "red_0.9.json"}],
  "utterances": [{"id": "u", "prop": "(some (x) true (red x))"}]
})js", dir);
  EXPECT_EQ(only_error(priors.diagnostics).message, "state priors sum to 0.9, not 1");

  const auto nested = parse_scenario(R"js({
  "states": [{"id": "a", "prior": 1, "world": "red_0.7.json"}],
  "utterances": [{"id": "u", "prop": "open_root.prop"}, {"id": "v", "prop": "(some (x)"}]
})js", dir);
  ASSERT_EQ(nested.diagnostics.size(), 2u);
  EXPECT_EQ(nested.diagnostics[0].line, 3u);
}

TEST(ReadTextFile, MissingFile) { EXPECT_FALSE(read_text_file(fixture_path("absent.json"))); }
