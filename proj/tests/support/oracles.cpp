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
#include "oracles.hpp"

#include <algorithm>
#include <set>

namespace quantale::testing {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

using Env = std::map<std::string, PixieId>;

bool holds(const ScopeGraph& g, NodeId id, const PreciseWorld& w, const Env& env) {
  const auto& value = g.node(id).value;
  if (std::holds_alternative<Tautology>(value)) return true;
  if (const auto* app = std::get_if<Application>(&value))
    return w.predicates.at(app->predicate)[env.at(app->variable)];
  if (const auto* c = std::get_if<Conjunction>(&value)) {
    for (NodeId child : c->children) {
      if (!holds(g, child, w, env)) return false;
    }
    return true;
  }
  const auto& q = std::get<Quantifier>(value);
  long restriction = 0, both = 0;
  for (const auto& s : w.situations) {
    bool agrees = true;
    for (const auto& [var, pixie] : env) {
      const auto pos = std::find(w.variables.begin(), w.variables.end(), var) - w.variables.begin();
      agrees = agrees && s[pos] == pixie;
    }
    if (!agrees) continue;
    Env inner = env;
    for (const auto& var : q.bound) {
      const auto pos = std::find(w.variables.begin(), w.variables.end(), var) - w.variables.begin();
      inner[var] = s[pos];
    }
    if (!holds(g, q.restriction, w, inner)) continue;
    ++restriction;
    if (holds(g, q.body, w, inner)) ++both;
  }
  switch (q.shape.kind()) {
    case QuantifierKind::Some: return both > 0;
    case QuantifierKind::Every: return both == restriction;
    case QuantifierKind::No: return both == 0;
    case QuantifierKind::Most: return 2 * both > restriction;
    default: throw std::logic_error("classical oracle handles some/every/no/most only");
  }
}

NodeId random_leaf(std::mt19937_64& rng, ScopeGraph& g, const std::vector<std::string>& preds,
                   const std::vector<std::string>& in_scope) {
  if (in_scope.empty() || coin(rng, 0.15)) return g.add_tautology();
  if (coin(rng, 0.3) && in_scope.size() > 0) {
    std::vector<NodeId> kids;
    const std::size_t n = 2 + pick(rng, 2);
    for (std::size_t i = 0; i < n; ++i)
      kids.push_back(g.add_application(preds[pick(rng, preds.size())],
                                       in_scope[pick(rng, in_scope.size())]));
    return g.add_conjunction(std::move(kids));
  }
  return g.add_application(preds[pick(rng, preds.size())], in_scope[pick(rng, in_scope.size())]);
}

NodeId random_quantifier(std::mt19937_64& rng, ScopeGraph& g, const std::vector<std::string>& preds,
                         const std::vector<std::string>& vars, std::vector<std::string> env,
                         int depth) {
  static const QuantifierKind kinds[] = {QuantifierKind::Some, QuantifierKind::Every,
                                         QuantifierKind::No, QuantifierKind::Most};
  std::vector<std::string> unused;
  for (const auto& v : vars) {
    if (std::find(env.begin(), env.end(), v) == env.end()) unused.push_back(v);
  }
  std::shuffle(unused.begin(), unused.end(), rng);
  const std::size_t count = 1 + pick(rng, std::min<std::size_t>(unused.size(), 2));
  std::vector<std::string> bound(unused.begin(), unused.begin() + count);
  env.insert(env.end(), bound.begin(), bound.end());
  auto child = [&]() {
    const bool room = env.size() < vars.size();
    if (depth > 1 && room && coin(rng, 0.4))
      return random_quantifier(rng, g, preds, vars, env, depth - 1);
    return random_leaf(rng, g, preds, env);
  };
  const NodeId r = child();
  const NodeId b = child();
  return g.add_quantifier(kinds[pick(rng, 4)], std::move(bound), r, b);
}

}  // namespace

World PreciseWorld::to_world() const {
  std::map<std::vector<PixieId>, std::size_t> counts;
  for (const auto& s : situations) ++counts[s];
  std::vector<JointEntry> joint;
  for (const auto& [assignment, n] : counts)
    joint.push_back({assignment, static_cast<double>(n) / static_cast<double>(situations.size())});
  PixieSpace space(pixies);
  VagueLexicon lexicon;
  for (const auto& [name, truth] : predicates) {
    std::vector<double> table;
    for (bool t : truth) table.push_back(t ? 1.0 : 0.0);
    add_predicate(lexicon, VaguePredicate(name, table));
  }
  return World{SituationModel(space, variables, std::move(joint)), std::move(lexicon)};
}

bool classical_truth(const ScopeGraph& graph, const PreciseWorld& world) {
  return holds(graph, graph.root(), world, {});
}

PreciseWorld random_precise_world(std::mt19937_64& rng, std::size_t max_pixies,
                                  std::size_t max_variables, std::size_t predicates) {
  PreciseWorld w;
  w.pixies = names("e", 1 + pick(rng, max_pixies));
  w.variables = names("v", 1 + pick(rng, max_variables));
  const std::size_t draws = 1 + pick(rng, 6);
  for (std::size_t i = 0; i < draws; ++i) {
    std::vector<PixieId> s;
    for (std::size_t v = 0; v < w.variables.size(); ++v)
      s.push_back(static_cast<PixieId>(pick(rng, w.pixies.size())));
    w.situations.push_back(std::move(s));
  }
  for (const auto& name : names("p", predicates)) {
    std::vector<bool> truth;
    for (std::size_t i = 0; i < w.pixies.size(); ++i) truth.push_back(coin(rng));
    w.predicates[name] = truth;
  }
  return w;
}

ScopeGraph random_classical_prop(std::mt19937_64& rng, const PreciseWorld& world, int max_depth) {
  ScopeGraph g;
  std::vector<std::string> preds;
  for (const auto& [name, truth] : world.predicates) preds.push_back(name);
  g.set_root(random_quantifier(rng, g, preds, world.variables, {}, max_depth));
  return g;
}

World random_vague_world(std::mt19937_64& rng, std::size_t max_pixies, std::size_t max_variables,
                         std::size_t predicates, double fractional_share) {
  const auto pixies = names("e", 1 + pick(rng, max_pixies));
  const auto variables = names("v", 1 + pick(rng, max_variables));
  std::map<std::vector<PixieId>, int> weights;
  const std::size_t draws = 1 + pick(rng, 5);
  for (std::size_t i = 0; i < draws; ++i) {
    std::vector<PixieId> s;
    for (std::size_t v = 0; v < variables.size(); ++v)
      s.push_back(static_cast<PixieId>(pick(rng, pixies.size())));
    weights[s] += 1 + static_cast<int>(pick(rng, 9));
  }
  // Integer weights scaled to thousandths; the remainder goes to the first entry.
  int total = 0;
  for (const auto& [s, wt] : weights) total += wt;
  std::vector<JointEntry> joint;
  int assigned = 0;
  for (const auto& [s, wt] : weights) {
    const int milli = wt * 1000 / total;
    joint.push_back({s, static_cast<double>(milli)});
    assigned += milli;
  }
  joint.front().mass += 1000 - assigned;
  for (auto& e : joint) e.mass /= 1000.0;
  joint.erase(std::remove_if(joint.begin(), joint.end(), [](const JointEntry& e) { return e.mass == 0.0; }),
              joint.end());
  if (joint.empty()) joint.push_back({std::vector<PixieId>(variables.size(), 0), 1.0});

  PixieSpace space(pixies);
  VagueLexicon lexicon;
  for (const auto& name : names("p", predicates)) {
    std::vector<double> table;
    for (std::size_t i = 0; i < pixies.size(); ++i) {
      if (coin(rng, fractional_share)) table.push_back(static_cast<double>(1 + pick(rng, 19)) / 20.0);
      else table.push_back(coin(rng) ? 1.0 : 0.0);
    }
    add_predicate(lexicon, VaguePredicate(name, table));
  }
  return World{SituationModel(space, variables, std::move(joint)), std::move(lexicon)};
}

ScopeGraph random_single_quantifier(std::mt19937_64& rng, const World& world,
                                    QuantifierKind kind) {
  ScopeGraph g;
  std::vector<std::string> preds;
  for (const auto& [name, p] : world.lexicon) preds.push_back(name);
  const auto& vars = world.model.variables();
  const NodeId r = random_leaf(rng, g, preds, vars);
  const NodeId b = random_leaf(rng, g, preds, vars);
  g.set_root(g.add_quantifier(kind, vars, r, b));
  return g;
}

namespace {

double psi(const ScopeGraph& g, NodeId id, const World& w, const std::vector<PixieId>& s) {
  const auto& value = g.node(id).value;
  if (std::holds_alternative<Tautology>(value)) return 1.0;
  if (const auto* app = std::get_if<Application>(&value))
    return w.lexicon.at(app->predicate)(s[w.model.variable_id(app->variable)]);
  double p = 1.0;
  for (NodeId child : std::get<Conjunction>(value).children) p *= psi(g, child, w, s);
  return p;
}

}  // namespace

double direct_ratio(const ScopeGraph& graph, const World& world) {
  const auto& q = std::get<Quantifier>(graph.node(graph.root()).value);
  long double num = 0, den = 0;
  for (const auto& e : world.model.joint()) {
    const double r = psi(graph, q.restriction, world, e.assignment);
    den += e.mass * r;
    num += e.mass * r * psi(graph, q.body, world, e.assignment);
  }
  if (den <= 0) return -1.0;
  return static_cast<double>(num / den);
}

ScopeGraph random_graph(std::mt19937_64& rng, std::size_t nodes) {
  static const QuantifierKind kinds[] = {QuantifierKind::Some,  QuantifierKind::Every,
                                         QuantifierKind::No,    QuantifierKind::Most,
                                         QuantifierKind::Many,  QuantifierKind::Few,
                                         QuantifierKind::Generic};
  const auto vars = names("v", 4);
  const auto preds = names("p", 4);
  ScopeGraph g;
  for (std::size_t i = 0; i < nodes; ++i) {
    const std::size_t choice = g.size() == 0 ? pick(rng, 2) : pick(rng, 4);
    if (choice == 0) {
      g.add_tautology();
    } else if (choice == 1) {
      g.add_application(preds[pick(rng, preds.size())], vars[pick(rng, vars.size())]);
    } else if (choice == 2) {
      std::vector<NodeId> kids;
      const std::size_t n = 1 + pick(rng, 3);
      for (std::size_t k = 0; k < n; ++k) kids.push_back(static_cast<NodeId>(pick(rng, g.size())));
      g.add_conjunction(std::move(kids));
    } else {
      std::vector<std::string> bound = {vars[pick(rng, vars.size())]};
      if (coin(rng, 0.3)) bound.push_back(vars[pick(rng, vars.size())]);
      g.add_quantifier(kinds[pick(rng, 7)], std::move(bound),
                       static_cast<NodeId>(pick(rng, g.size())),
                       static_cast<NodeId>(pick(rng, g.size())));
    }
  }
  g.set_root(static_cast<NodeId>(g.size() - 1));
  return g;
}

}  // namespace quantale::testing
