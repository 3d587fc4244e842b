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
#include "quantale/scope.hpp"

#include <algorithm>
#include <functional>

#include "quantale/error.hpp"

namespace quantale {

std::vector<NodeId> children_of(const ScopeNode& node) {
  if (const auto* c = std::get_if<Conjunction>(&node.value)) return c->children;
  if (const auto* q = std::get_if<Quantifier>(&node.value)) return {q->restriction, q->body};
  return {};
}

NodeId ScopeGraph::add(ScopeNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId ScopeGraph::add_tautology() { return add({Tautology{}, std::nullopt}); }

NodeId ScopeGraph::add_application(std::string predicate, std::string variable) {
  return add({Application{std::move(predicate), std::move(variable)}, std::nullopt});
}

NodeId ScopeGraph::add_conjunction(std::vector<NodeId> children) {
  return add({Conjunction{std::move(children)}, std::nullopt});
}

NodeId ScopeGraph::add_quantifier(QuantifierShape shape, std::vector<std::string> bound,
                                  NodeId restriction, NodeId body) {
  return add({Quantifier{std::move(shape), std::move(bound), restriction, body}, std::nullopt});
}

NodeId ScopeGraph::add_quantifier(QuantifierKind kind, std::vector<std::string> bound,
                                  NodeId restriction, NodeId body) {
  return add_quantifier(QuantifierShape::builtin(kind), std::move(bound), restriction, body);
}

std::string format_variable_set(const VariableSet& vars) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : vars) {
    if (!first) out += ", ";
    out += v;
    first = false;
  }
  return out + "}";
}

namespace {

enum class Mark { White, Grey, Black };

void check_ids(const ScopeGraph& graph) {
  const auto n = graph.size();
  if (graph.root() >= n)
    throw Error(ErrorCode::InvalidArgument, "root index " + std::to_string(graph.root()) + " out of range");
  for (NodeId id = 0; id < n; ++id) {
    for (NodeId c : children_of(graph.node(id))) {
      if (c >= n)
        throw Error(ErrorCode::InvalidArgument,
                    "node " + std::to_string(id) + " refers to missing node " + std::to_string(c));
    }
  }
}

void post_order(const ScopeGraph& graph, NodeId start, std::vector<Mark>& marks,
                std::vector<NodeId>& out) {
  // iterative DFS; the frame keeps the index of the next child to visit
  std::vector<std::pair<NodeId, std::size_t>> stack;
  if (marks[start] != Mark::White) return;
  marks[start] = Mark::Grey;
  stack.emplace_back(start, 0);
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto children = children_of(graph.node(id));
    if (next < children.size()) {
      const NodeId c = children[next++];
      if (marks[c] == Mark::Grey)
        throw Error(ErrorCode::CycleDetected, "cycle through node " + std::to_string(c));
      if (marks[c] == Mark::White) {
        marks[c] = Mark::Grey;
        stack.emplace_back(c, 0);
      }
      continue;
    }
    marks[id] = Mark::Black;
    out.push_back(id);
    stack.pop_back();
  }
}

VariableSet set_union(const VariableSet& a, const VariableSet& b) {
  VariableSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VariableSet set_minus(VariableSet a, const std::vector<std::string>& drop) {
  for (const auto& v : drop) a.erase(v);
  return a;
}

}  // namespace

std::vector<NodeId> topological_order(const ScopeGraph& graph) {
  check_ids(graph);
  std::vector<Mark> marks(graph.size(), Mark::White);
  std::vector<NodeId> out;
  out.reserve(graph.size());
  post_order(graph, graph.root(), marks, out);
  for (NodeId id = 0; id < graph.size(); ++id) post_order(graph, id, marks, out);
  return out;
}

ScopeAnalysis analyze(const ScopeGraph& graph) {
  check_ids(graph);
  const auto n = graph.size();
  ScopeAnalysis a;
  std::vector<Mark> marks(n, Mark::White);
  post_order(graph, graph.root(), marks, a.order);
  a.reachable.assign(n, false);
  for (NodeId id : a.order) a.reachable[id] = true;
  a.parent_edges.assign(n, 0);
  a.context.assign(n, {});
  a.free.assign(n, {});
  a.dependencies.assign(n, {});

  // contexts flow from parents to children; intersect over parents
  std::vector<std::optional<VariableSet>> ctx(n);
  ctx[graph.root()] = VariableSet{};
  for (auto it = a.order.rbegin(); it != a.order.rend(); ++it) {
    const NodeId id = *it;
    const VariableSet here = ctx[id].value_or(VariableSet{});
    a.context[id] = here;
    VariableSet passed = here;
    if (const auto* q = std::get_if<Quantifier>(&graph.node(id).value))
      passed.insert(q->bound.begin(), q->bound.end());
    for (NodeId c : children_of(graph.node(id))) {
      ++a.parent_edges[c];
      if (!ctx[c]) {
        ctx[c] = passed;
      } else {
        VariableSet both;
        std::set_intersection(ctx[c]->begin(), ctx[c]->end(), passed.begin(), passed.end(),
                              std::inserter(both, both.end()));
        ctx[c] = std::move(both);
      }
    }
  }

  for (NodeId id : a.order) {
    const auto& node = graph.node(id);
    VariableSet free = a.context[id];
    VariableSet deps;
    if (const auto* app = std::get_if<Application>(&node.value)) {
      free.insert(app->variable);
      deps.insert(app->variable);
    } else if (const auto* conj = std::get_if<Conjunction>(&node.value)) {
      for (NodeId c : conj->children) {
        free = set_union(free, a.free[c]);
        deps = set_union(deps, a.dependencies[c]);
      }
    } else if (const auto* q = std::get_if<Quantifier>(&node.value)) {
      free = set_union(free, set_minus(set_union(a.free[q->restriction], a.free[q->body]), q->bound));
      deps = set_union(a.context[id],
                       set_minus(set_union(a.dependencies[q->restriction], a.dependencies[q->body]),
                                 q->bound));
    }
    a.free[id] = std::move(free);
    a.dependencies[id] = std::move(deps);
  }
  return a;
}

VariableSet free_vars(const ScopeGraph& graph, NodeId node) {
  auto a = analyze(graph);
  if (node >= graph.size())
    throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " out of range");
  return a.free[node];
}

std::vector<ScopeDiagnostic> validate(const ScopeGraph& graph, const SituationModel& model,
                                      const VagueLexicon& lexicon) {
  std::vector<ScopeDiagnostic> out;
  auto report = [&](std::string code, std::string message, std::optional<NodeId> node) {
    std::optional<SourceLocation> loc;
    if (node && *node < graph.size()) loc = graph.node(*node).location;
    out.push_back({std::move(code), std::move(message), node, loc});
  };

  if (graph.size() == 0) {
    report("empty-graph", "graph has no nodes", std::nullopt);
    return out;
  }
  ScopeAnalysis a;
  try {
    a = analyze(graph);
  } catch (const Error& e) {
    report(e.code() == ErrorCode::CycleDetected ? "cycle" : "bad-index", e.what(), std::nullopt);
    return out;
  }

  for (NodeId id : a.order) {
    const auto& node = graph.node(id);
    if (const auto* app = std::get_if<Application>(&node.value)) {
      if (!lexicon.count(app->predicate))
        report("unknown-predicate", "unknown predicate '" + app->predicate + "'", id);
      if (!model.find_variable(app->variable))
        report("unknown-variable", "unknown variable '" + app->variable + "'", id);
    } else if (const auto* conj = std::get_if<Conjunction>(&node.value)) {
      if (conj->children.empty()) report("empty-conjunction", "conjunction has no children", id);
    } else if (const auto* q = std::get_if<Quantifier>(&node.value)) {
      if (q->bound.empty()) report("empty-binding", "quantifier binds no variables", id);
      VariableSet seen;
      for (const auto& v : q->bound) {
        if (!seen.insert(v).second)
          report("duplicate-binding", "quantifier binds '" + v + "' twice", id);
        if (!model.find_variable(v)) report("unknown-variable", "unknown variable '" + v + "'", id);
      }
      VariableSet clash;
      for (const auto& v : q->bound) {
        if (a.free[id].count(v)) clash.insert(v);
      }
      if (!clash.empty())
        report("rebinds-variable",
               "quantifier binds " + format_variable_set(clash) + " which are already in scope", id);
    }
  }
  if (!a.free[graph.root()].empty())
    report("open-root", "root has free variables " + format_variable_set(a.free[graph.root()]),
           graph.root());
  return out;
}

}  // namespace quantale
