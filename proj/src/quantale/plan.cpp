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
#include "quantale/plan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "quantale/error.hpp"
#include "quantale/numeric.hpp"

namespace quantale::detail {

namespace {

std::vector<VarId> layout_of(const VariableSet& names, const SituationModel& model) {
  std::vector<VarId> vars;
  for (const auto& name : names) vars.push_back(model.variable_id(name));
  std::sort(vars.begin(), vars.end());
  return vars;
}

std::uint32_t index_of(const std::vector<VarId>& vars, const std::vector<PixieId>& assignment,
                       std::size_t n) {
  std::uint64_t idx = 0;
  for (VarId v : vars) idx = idx * n + assignment[v];
  return static_cast<std::uint32_t>(idx);
}

void decode(std::uint64_t idx, const std::vector<VarId>& vars, std::size_t n,
            std::vector<PixieId>& assignment) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    assignment[*it] = static_cast<PixieId>(idx % n);
    idx /= n;
  }
}

}  // namespace

Plan build_plan(const ScopeGraph& graph, const SituationModel& model, const VagueLexicon& lexicon,
                const EvalOptions& options) {
  const auto diagnostics = validate(graph, model, lexicon);
  if (!diagnostics.empty()) {
    std::string message = "graph does not validate:";
    for (const auto& d : diagnostics) message += " " + d.message + ";";
    message.pop_back();
    throw Error(ErrorCode::ValidationFailed, message);
  }
  const ScopeAnalysis analysis = analyze(graph);
  const std::size_t n = model.space().size();

  Plan plan;
  plan.order = analysis.order;
  plan.root = graph.root();
  plan.nodes.resize(graph.size());
  plan.pixie_count = n;
  plan.denominator_guard = options.denominator_guard;
  plan.breakpoint_snap = options.breakpoint_snap;

  for (NodeId id : plan.order) {
    if (const auto* app = std::get_if<Application>(&graph.node(id).value))
      plan.predicates.push_back(app->predicate);
  }
  std::sort(plan.predicates.begin(), plan.predicates.end());
  plan.predicates.erase(std::unique(plan.predicates.begin(), plan.predicates.end()),
                        plan.predicates.end());
  for (const auto& name : plan.predicates) plan.vague.push_back(&lexicon.find(name)->second);

  std::vector<bool> predicate_fixed;
  for (const auto* psi : plan.vague) {
    bool fixed = true;
    for (PixieId x = 0; x < n; ++x) fixed = fixed && ((*psi)(x) == 0.0 || (*psi)(x) == 1.0);
    predicate_fixed.push_back(fixed);
  }

  std::vector<PixieId> scratch(model.variables().size(), 0);
  for (NodeId id : plan.order) {
    NodePlan& np = plan.nodes[id];
    np.vars = layout_of(analysis.dependencies[id], model);
    double size = std::pow(static_cast<double>(n), static_cast<double>(np.vars.size()));
    if (size > static_cast<double>(options.max_table_size))
      throw Error(ErrorCode::ExplosionGuard,
                  "node " + std::to_string(id) + " needs a table of " + std::to_string(size) + " entries");
    np.size = static_cast<std::size_t>(size);

    const NodeValue& value = graph.node(id).value;
    if (std::holds_alternative<Tautology>(value)) {
      np.kind = PlanKind::Tautology;
    } else if (const auto* app = std::get_if<Application>(&value)) {
      np.kind = PlanKind::Application;
      np.predicate = static_cast<std::size_t>(
          std::lower_bound(plan.predicates.begin(), plan.predicates.end(), app->predicate) -
          plan.predicates.begin());
      np.variable = model.variable_id(app->variable);
      np.fixed_inputs = predicate_fixed[np.predicate];
      np.random_output = !np.fixed_inputs;
    } else if (const auto* conj = std::get_if<Conjunction>(&value)) {
      np.kind = PlanKind::Conjunction;
      np.children = conj->children;
      for (NodeId c : np.children) {
        const auto& child = plan.nodes[c];
        std::vector<std::uint32_t> map(np.size);
        for (std::size_t i = 0; i < np.size; ++i) {
          decode(i, np.vars, n, scratch);
          map[i] = index_of(child.vars, scratch, n);
        }
        np.child_index.push_back(std::move(map));
        np.fixed_inputs = np.fixed_inputs && !child.random_output;
      }
      np.random_output = !np.fixed_inputs;
    } else {
      const auto& q = std::get<Quantifier>(value);
      np.kind = PlanKind::Quantifier;
      np.shape = &q.shape;
      np.restriction = q.restriction;
      np.body = q.body;
      np.vague = q.shape.is_vague();
      np.snap_points = q.shape.interior_breakpoints();
      np.empty_value = q.shape.empty_restriction_value(options.generic_empty_restriction);
      const auto& r = plan.nodes[q.restriction];
      const auto& b = plan.nodes[q.body];
      np.fixed_inputs = !r.random_output && !b.random_output;
      np.random_output = !np.fixed_inputs || np.vague;
      if (np.vague) plan.vague_nodes.push_back(id);

      std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, KahanSum> sums;
      std::map<std::uint32_t, KahanSum> v_mass;
      for (const auto& entry : model.joint()) {
        if (!(entry.mass > 0.0)) continue;
        const auto v = index_of(np.vars, entry.assignment, n);
        sums[{v, index_of(r.vars, entry.assignment, n), index_of(b.vars, entry.assignment, n)}].add(
            entry.mass);
        v_mass[v].add(entry.mass);
      }
      for (const auto& [key, s] : sums)
        np.terms.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), s.value()});
      np.v_mass.assign(np.size, 0.0);
      for (const auto& [v, s] : v_mass) np.v_mass[v] = s.value();
    }
  }
  return plan;
}

void quantifier_values(const Plan& plan, const NodePlan& node, const Table& restriction,
                       const Table& body, Table& out) {
  std::vector<double> num(node.size, 0.0);
  std::vector<double> den(node.size, 0.0);
  for (const auto& t : node.terms) {
    const double r = restriction[t.r];
    if (r == 0.0) continue;
    den[t.v] += t.mass * r;
    num[t.v] += t.mass * r * body[t.b];
  }
  out.resize(node.size);
  for (std::size_t v = 0; v < node.size; ++v) {
    if (!(node.v_mass[v] > 0.0) || den[v] / node.v_mass[v] < plan.denominator_guard) {
      out[v] = node.empty_value;
      continue;
    }
    double ratio = std::clamp(num[v] / den[v], 0.0, 1.0);
    for (double b : node.snap_points) {
      if (std::abs(ratio - b) <= plan.breakpoint_snap) ratio = b;
    }
    out[v] = node.shape->value(ratio);
  }
}

void conjunction_values(const NodePlan& node, const std::vector<Table>& tables, Table& out) {
  out.assign(node.size, 1.0);
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    const Table& child = tables[node.children[c]];
    const auto& map = node.child_index[c];
    for (std::size_t i = 0; i < node.size; ++i) out[i] *= child[map[i]];
  }
}

}  // namespace quantale::detail
