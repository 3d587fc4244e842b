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

// Internal: compiled form of (graph, model, lexicon) shared by the engines.

#include <cstdint>
#include <string>
#include <vector>

#include "quantale/engine.hpp"

namespace quantale::detail {

enum class PlanKind { Tautology, Application, Conjunction, Quantifier };

/// One positive-mass projection of the joint onto a quantifier's variables.
struct QuantTerm {
  std::uint32_t v = 0;  // index into the quantifier's own table
  std::uint32_t r = 0;  // index into the restriction's table
  std::uint32_t b = 0;  // index into the body's table
  double mass = 0.0;
};

struct NodePlan {
  PlanKind kind = PlanKind::Tautology;
  std::vector<VarId> vars;  // table layout, last variable fastest
  std::size_t size = 1;

  std::size_t predicate = 0;  // Application: index into Plan::predicates
  VarId variable = 0;

  std::vector<NodeId> children;                      // Conjunction
  std::vector<std::vector<std::uint32_t>> child_index;

  const QuantifierShape* shape = nullptr;  // Quantifier
  NodeId restriction = 0;
  NodeId body = 0;
  std::vector<QuantTerm> terms;
  std::vector<double> v_mass;
  std::vector<double> snap_points;
  double empty_value = 0.0;
  bool vague = false;

  /// Values do not depend on the sampled lexicon.
  bool fixed_inputs = true;
  /// Table differs between world configurations (random inputs or threshold).
  bool random_output = false;
};

struct Plan {
  std::vector<NodeId> order;
  std::vector<NodePlan> nodes;  // indexed by NodeId; unreachable entries unused
  NodeId root = 0;
  std::vector<std::string> predicates;        // used predicates, sorted
  std::vector<const VaguePredicate*> vague;    // parallel to predicates
  std::vector<NodeId> vague_nodes;
  std::size_t pixie_count = 0;
  double denominator_guard = 1e-15;
  double breakpoint_snap = 1e-12;
};

/// Validates and compiles. Throws Error(ValidationFailed) or ExplosionGuard.
/// random_inputs marks, per used predicate, whether its precise extension
/// varies across configurations (any psi strictly inside (0,1)).
Plan build_plan(const ScopeGraph& graph, const SituationModel& model, const VagueLexicon& lexicon,
                const EvalOptions& options);

using Table = std::vector<double>;

/// f_Q (or the empty-restriction value) for every entry of a quantifier's
/// table, given its children's tables.
void quantifier_values(const Plan& plan, const NodePlan& node, const Table& restriction,
                       const Table& body, Table& out);

void conjunction_values(const NodePlan& node, const std::vector<Table>& tables, Table& out);

}  // namespace quantale::detail
