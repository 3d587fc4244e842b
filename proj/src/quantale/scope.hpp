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
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "quantale/model.hpp"
#include "quantale/quant.hpp"

namespace quantale {

using NodeId = std::uint32_t;
using VariableSet = std::set<std::string>;

/// 1-based position in a source text.
struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

struct Tautology {
  friend bool operator==(const Tautology&, const Tautology&) = default;
};

/// A unary predicate applied to one variable. Role structure between
/// variables lives in the situation model's joint, not in leaves.
struct Application {
  std::string predicate;
  std::string variable;
  friend bool operator==(const Application&, const Application&) = default;
};

struct Conjunction {
  std::vector<NodeId> children;
  friend bool operator==(const Conjunction&, const Conjunction&) = default;
};

struct Quantifier {
  QuantifierShape shape;
  std::vector<std::string> bound;
  NodeId restriction = 0;
  NodeId body = 0;
  friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

using NodeValue = std::variant<Tautology, Application, Conjunction, Quantifier>;

struct ScopeNode {
  NodeValue value;
  std::optional<SourceLocation> location;
};

std::vector<NodeId> children_of(const ScopeNode& node);

/// Scope tree or DAG. A node reachable along several paths is one node: a
/// shared vague quantifier draws one threshold, while a textual copy of the
/// same subtree is a separate node with its own threshold.
class ScopeGraph {
 public:
  NodeId add(ScopeNode node);
  NodeId add_tautology();
  NodeId add_application(std::string predicate, std::string variable);
  NodeId add_conjunction(std::vector<NodeId> children);
  NodeId add_quantifier(QuantifierShape shape, std::vector<std::string> bound,
                        NodeId restriction, NodeId body);
  NodeId add_quantifier(QuantifierKind kind, std::vector<std::string> bound,
                        NodeId restriction, NodeId body);

  void set_root(NodeId root) { root_ = root; }
  /// Names a node; used to keep let-binding names through round-trips.
  void set_alias(std::string name, NodeId node) { aliases_[std::move(name)] = node; }

  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  const ScopeNode& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<ScopeNode>& nodes() const { return nodes_; }
  const std::map<std::string, NodeId>& aliases() const { return aliases_; }

 private:
  std::vector<ScopeNode> nodes_;
  NodeId root_ = 0;
  std::map<std::string, NodeId> aliases_;
};

/// Per-node variable sets of a graph.
///
/// context: variables bound by enclosing quantifiers. For a node reached
///   along several paths it is the intersection over its parents, so a
///   shared node is one function usable at every site.
/// free: variables the node's truth value is a function of, counting the
///   context. Quantifiers condition the joint on their context, which is how
///   role structure in the joint reaches nodes whose leaves do not mention
///   the context variables.
/// dependencies: the smallest set the node's value actually varies with;
///   the engines index tables by it.
struct ScopeAnalysis {
  std::vector<NodeId> order;  // reachable nodes, children first
  std::vector<bool> reachable;
  std::vector<std::size_t> parent_edges;
  std::vector<VariableSet> context;
  std::vector<VariableSet> free;
  std::vector<VariableSet> dependencies;
};

/// Throws Error(CycleDetected) or Error(InvalidArgument) for dangling ids.
ScopeAnalysis analyze(const ScopeGraph& graph);

VariableSet free_vars(const ScopeGraph& graph, NodeId node);

/// Children precede parents. Nodes reachable from the root come first, in
/// depth-first post-order; any others follow in index order.
std::vector<NodeId> topological_order(const ScopeGraph& graph);

struct ScopeDiagnostic {
  std::string code;
  std::string message;
  std::optional<NodeId> node;
  std::optional<SourceLocation> location;
};

/// Well-formedness report; never throws for ill-formed graphs.
std::vector<ScopeDiagnostic> validate(const ScopeGraph& graph, const SituationModel& model,
                                      const VagueLexicon& lexicon);

std::string format_variable_set(const VariableSet& vars);

}  // namespace quantale
