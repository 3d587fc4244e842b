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

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "helpers.hpp"
#include "oracles.hpp"
#include "quantale/model.hpp"
#include "quantale/numeric.hpp"

using namespace quantale;
using namespace quantale::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

double weight_where(const LiftedLexicon& lifted, const std::string& pred,
                    const std::vector<bool>& truth) {
  double w = 0.0;
  for (const auto& [lexicon, weight] : lifted.configurations()) {
    if (lexicon.predicates.at(pred) == truth) w += weight;
  }
  return w;
}

}  // namespace

TEST(PixieSpace, RejectsEmptyAndDuplicates) {
  EXPECT_EQ(code_of([] { PixieSpace({}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { PixieSpace({"a", "a"}); }), ErrorCode::InvalidArgument);
  PixieSpace s({"b", "a"});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(*s.find("a"), 1u);
  EXPECT_FALSE(s.find("c"));
}

TEST(SituationModel, EnforcesInvariants) {
  PixieSpace s({"a", "b"});
  EXPECT_EQ(code_of([&] { SituationModel(s, {"x"}, {{{0}, 0.5}, {{1}, 0.4}}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { SituationModel(s, {"x"}, {{{0}, 0.5}, {{0}, 0.5}}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { SituationModel(s, {"x"}, {{{0}, 1.5}, {{1}, -0.5}}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { SituationModel(s, {"x", "y"}, {{{0}, 1.0}}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { SituationModel(s, {"x", "x"}, {{{0, 0}, 1.0}}); }),
            ErrorCode::InvalidArgument);
  SituationModel ok(s, {"x"}, {{{0}, 0.3}, {{1}, 0.7 + 1e-12}});
  EXPECT_EQ(ok.variable_id("x"), 0u);
  EXPECT_EQ(code_of([&] { ok.variable_id("y"); }), ErrorCode::UnknownVariable);
}

TEST(VaguePredicate, AbsentPixiesAreZeroAndRangeIsChecked) {
  PixieSpace s({"a", "b"});
  VaguePredicate red("red", s, {{"a", 0.7}});
  EXPECT_DOUBLE_EQ(red(0), 0.7);
  EXPECT_EQ(red(1), 0.0);
  EXPECT_EQ(code_of([&] { VaguePredicate("red", s, {{"a", 1.3}}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { VaguePredicate("red", s, {{"c", 0.5}}); }), ErrorCode::InvalidArgument);
}

TEST(Lift, SinglePixieGivesTwoConfigurationsUnderBothSchemes) {
  PixieSpace s({"x1"});
  VagueLexicon lex;
  add_predicate(lex, VaguePredicate("red", s, {{"x1", 0.7}}));
  for (auto scheme : {LiftScheme::Independent, LiftScheme::CoupledThreshold}) {
    const auto lifted = lift(lex, scheme, s);
    EXPECT_EQ(lifted.configuration_count(), 2u);
    EXPECT_NEAR(weight_where(lifted, "red", {true}), 0.7, 1e-12);
    EXPECT_NEAR(weight_where(lifted, "red", {false}), 0.3, 1e-12);
  }
}

TEST(Lift, CertainPredicateHasOneConfiguration) {
  PixieSpace s({"a", "b"});
  VagueLexicon lex;
  add_predicate(lex, VaguePredicate("p", s, {{"a", 1.0}, {"b", 1.0}}));
  for (auto scheme : {LiftScheme::Independent, LiftScheme::CoupledThreshold}) {
    const auto lifted = lift(lex, scheme, s);
    ASSERT_EQ(lifted.configuration_count(), 1u);
    EXPECT_EQ(lifted.configuration(0).second, 1.0);
  }
}

TEST(Lift, HalfHalfPredicateDiffersBetweenSchemes) {
  PixieSpace s({"a", "b"});
  VagueLexicon lex;
  add_predicate(lex, VaguePredicate("red", s, {{"a", 0.5}, {"b", 0.5}}));
  const auto independent = lift(lex, LiftScheme::Independent, s);
  ASSERT_EQ(independent.configuration_count(), 4u);
  for (const auto& [config, weight] : independent.configurations()) EXPECT_DOUBLE_EQ(weight, 0.25);
  const auto coupled = lift(lex, LiftScheme::CoupledThreshold, s);
  ASSERT_EQ(coupled.configuration_count(), 2u);
  EXPECT_DOUBLE_EQ(weight_where(coupled, "red", {true, true}), 0.5);
  EXPECT_DOUBLE_EQ(weight_where(coupled, "red", {false, false}), 0.5);
}

TEST(Lift, ExplosionGuard) {
  PixieSpace s({"a", "b", "c"});
  VagueLexicon lex;
  add_predicate(lex, VaguePredicate("p", s, {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}}));
  EXPECT_EQ(code_of([&] { lift(lex, LiftScheme::Independent, s, 4); }), ErrorCode::ExplosionGuard);
  EXPECT_EQ(lift(lex, LiftScheme::Independent, s, 8).configuration_count(), 8u);
}

TEST(Lift, MarginalsAndCountsOnRandomLexicons) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto w = random_vague_world(rng);
    const auto& space = w.model.space();
    std::size_t fractional = 0;
    for (const auto& [name, pred] : w.lexicon) {
      for (PixieId x = 0; x < space.size(); ++x) fractional += pred(x) > 0.0 && pred(x) < 1.0;
    }
    for (auto scheme : {LiftScheme::Independent, LiftScheme::CoupledThreshold}) {
      const auto lifted = lift(w.lexicon, scheme, space);
      KahanSum total;
      std::map<std::pair<std::string, PixieId>, double> marginal;
      for (const auto& [config, weight] : lifted.configurations()) {
        total.add(weight);
        for (const auto& [name, truth] : config.predicates) {
          for (PixieId x = 0; x < space.size(); ++x) {
            if (truth[x]) marginal[{name, x}] += weight;
          }
        }
      }
      EXPECT_NEAR(total.value(), 1.0, 1e-9);
      for (const auto& [name, pred] : w.lexicon) {
        for (PixieId x = 0; x < space.size(); ++x)
          EXPECT_NEAR(marginal[std::make_pair(name, x)], pred(x), 1e-9);
      }
      if (scheme == LiftScheme::Independent) {
        EXPECT_EQ(lifted.configuration_count(), std::uint64_t{1} << fractional);
      } else {
        for (const auto& factor : lifted.factors()) {
          const auto& table = w.lexicon.at(factor.predicate).table();
          const std::set<double> distinct(table.begin(), table.end());
          EXPECT_LE(factor.options.size(), distinct.size() + 1);
        }
      }
    }
  }
}

TEST(Marginal, AllVariablesIsTheJoint) {
  const auto w = fixture_world("kitchen.json");
  const std::vector<std::string> vars = {"x", "y", "z"};
  const auto d = marginal(w.model, vars);
  ASSERT_EQ(d.mass.size(), w.model.joint().size());
  for (const auto& e : w.model.joint()) EXPECT_DOUBLE_EQ(d.at(e.assignment), e.mass);
}

TEST(Marginal, UniformPairIsUniformOnEachVariable) {
  const auto w = make_world({"a", "b"}, {"x", "y"},
                            {{{"a", "a"}, 0.25}, {{"a", "b"}, 0.25}, {{"b", "a"}, 0.25}, {{"b", "b"}, 0.25}},
                            {});
  const std::vector<std::string> x = {"x"};
  const auto d = marginal(w.model, x);
  EXPECT_DOUBLE_EQ(d.at({0}), 0.5);
  EXPECT_DOUBLE_EQ(d.at({1}), 0.5);
}

TEST(Marginal, ThreeVariableWorldMatchesHandSums) {
  // Rows: (r1,h1,s1) .4, (r2,h1,s2) .3, (r2,h1,s1) .1, (r1,h1,s2) .2.
  const auto w = fixture_world("kitchen.json");
  const auto& s = w.model.space();
  const std::vector<std::string> x = {"x"}, z = {"z"}, xz = {"x", "z"};
  const auto dx = marginal(w.model, x);
  EXPECT_NEAR(dx.at({*s.find("r1")}), 0.6, 1e-12);
  EXPECT_NEAR(dx.at({*s.find("r2")}), 0.4, 1e-12);
  const auto dz = marginal(w.model, z);
  EXPECT_NEAR(dz.at({*s.find("s1")}), 0.5, 1e-12);
  EXPECT_NEAR(dz.at({*s.find("s2")}), 0.5, 1e-12);
  const auto dxz = marginal(w.model, xz);
  EXPECT_NEAR(dxz.at({*s.find("r2"), *s.find("s1")}), 0.1, 1e-12);
  EXPECT_NEAR(dxz.total(), 1.0, 1e-9);
}

TEST(Marginal, RejectsUnknownEmptyOrRepeatedVariables) {
  const auto w = fixture_world("kitchen.json");
  const std::vector<std::string> none, unknown = {"q"}, twice = {"x", "x"};
  EXPECT_THROW(marginal(w.model, none), Error);
  EXPECT_EQ(code_of([&] { marginal(w.model, unknown); }), ErrorCode::UnknownVariable);
  EXPECT_THROW(marginal(w.model, twice), Error);
}

TEST(Conditional, EmptyConditionIsTheJoint) {
  const auto w = fixture_world("kitchen.json");
  const auto d = conditional(w.model, {});
  for (const auto& e : w.model.joint()) EXPECT_NEAR(d.at(e.assignment), e.mass, 1e-12);
}

TEST(Conditional, DividesByTheConditioningMass) {
  const auto w = make_world({"a", "b", "c", "d"}, {"x", "z"},
                            {{{"a", "c"}, 0.2}, {{"a", "d"}, 0.6}, {{"b", "c"}, 0.2}}, {});
  const auto d = conditional(w.model, {{"x", "a"}});
  ASSERT_EQ(d.variables, std::vector<std::string>{"z"});
  EXPECT_NEAR(d.at({2}), 0.25, 1e-12);
  EXPECT_NEAR(d.at({3}), 0.75, 1e-12);
  EXPECT_EQ(code_of([&] { conditional(w.model, {{"x", "c"}}); }),
            ErrorCode::ZeroProbabilityCondition);
}

TEST(Conditional, LawOfTotalProbability) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto w = random_vague_world(rng, 4, 3);
    const auto& vars = w.model.variables();
    if (vars.size() < 2) continue;
    const std::vector<std::string> first = {vars[0]}, rest(vars.begin() + 1, vars.end());
    const auto outer = marginal(w.model, first);
    const auto direct = marginal(w.model, rest);
    std::map<std::vector<PixieId>, double> mixed;
    for (const auto& [tuple, mass] : outer.mass) {
      if (mass <= 0.0) continue;
      const auto c = conditional(w.model, {{vars[0], w.model.space().name(tuple[0])}});
      for (const auto& [u, p] : c.mass) mixed[u] += mass * p;
    }
    for (const auto& [u, p] : direct.mass) EXPECT_NEAR(mixed[u], p, 1e-9);
  }
}

TEST(LiftScheme, ParsesNames) {
  EXPECT_EQ(parse_lift_scheme("independent"), LiftScheme::Independent);
  EXPECT_EQ(parse_lift_scheme("coupled-threshold"), LiftScheme::CoupledThreshold);
  EXPECT_FALSE(parse_lift_scheme("coupled"));
  EXPECT_STREQ(to_string(LiftScheme::CoupledThreshold), "coupled-threshold");
}
