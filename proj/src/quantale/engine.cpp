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
#include "quantale/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "quantale/error.hpp"
#include "quantale/numeric.hpp"
#include "quantale/plan.hpp"

namespace quantale {

const char* to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::Naive: return "naive";
    case EngineKind::Exact: return "exact";
    case EngineKind::MonteCarlo: return "mc";
    case EngineKind::GenericFast: return "generic-fast";
  }
  return "exact";
}

std::optional<EngineKind> parse_engine_kind(std::string_view text) {
  if (text == "naive") return EngineKind::Naive;
  if (text == "exact") return EngineKind::Exact;
  if (text == "mc") return EngineKind::MonteCarlo;
  if (text == "generic-fast") return EngineKind::GenericFast;
  return std::nullopt;
}

namespace {

using detail::NodePlan;
using detail::Plan;
using detail::PlanKind;
using detail::Table;

void compute_node(const Plan& plan, NodeId id, std::vector<Table>& tables,
                  const std::vector<Table>& predicate_tables) {
  const NodePlan& np = plan.nodes[id];
  switch (np.kind) {
    case PlanKind::Tautology:
      tables[id].assign(1, 1.0);
      break;
    case PlanKind::Application:
      tables[id] = predicate_tables[np.predicate];
      break;
    case PlanKind::Conjunction:
      detail::conjunction_values(np, tables, tables[id]);
      break;
    case PlanKind::Quantifier:
      detail::quantifier_values(plan, np, tables[np.restriction], tables[np.body], tables[id]);
      break;
  }
}

std::vector<Table> vague_tables(const Plan& plan) {
  std::vector<Table> out;
  for (const auto* psi : plan.vague) {
    Table t(plan.pixie_count);
    for (PixieId x = 0; x < plan.pixie_count; ++x) t[x] = (*psi)(x);
    out.push_back(std::move(t));
  }
  return out;
}

double evaluate_vague_tables(const Plan& plan, std::size_t graph_size) {
  std::vector<Table> tables(graph_size);
  const auto predicate_tables = vague_tables(plan);
  for (NodeId id : plan.order) compute_node(plan, id, tables, predicate_tables);
  return tables[plan.root][0];
}

void thresholded(const Table& values, double theta, Table& out) {
  out.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] >= theta ? 1.0 : 0.0;
}

/// Depth-first enumeration of precise lexicons times threshold regions.
class ExactEnumerator {
 public:
  using Visit = std::function<void(double weight, double root, const std::vector<std::size_t>& options,
                                   const std::vector<std::pair<NodeId, ThresholdRegion>>& regions)>;

  ExactEnumerator(const Plan& plan, const LiftedLexicon& lifted, std::size_t graph_size)
      : plan_(plan), lifted_(lifted), tables_(graph_size), cache_(graph_size) {
    for (const auto& factor : lifted_.factors()) {
      std::vector<Table> opts;
      for (const auto& option : factor.options) {
        Table t(plan_.pixie_count);
        for (PixieId x = 0; x < plan_.pixie_count; ++x) t[x] = option.truth[x] ? 1.0 : 0.0;
        opts.push_back(std::move(t));
      }
      options_.push_back(std::move(opts));
    }
    current_.assign(options_.size(), 0);
    predicate_tables_.resize(options_.size());
    for (std::size_t p = 0; p < options_.size(); ++p) predicate_tables_[p] = options_[p][0];
    // nodes that are the same in every configuration
    for (NodeId id : plan_.order) {
      const NodePlan& np = plan_.nodes[id];
      if (!np.random_output) compute_node(plan_, id, tables_, predicate_tables_);
      else if (np.vague && np.fixed_inputs)
        detail::quantifier_values(plan_, np, tables_[np.restriction], tables_[np.body], cache_[id]);
    }
  }

  void run(const Visit& visit) {
    visit_ = &visit;
    const std::uint64_t count = lifted_.configuration_count();
    for (std::uint64_t c = 0; c < count; ++c) {
      double weight = 1.0;
      for (std::size_t p = 0; p < options_.size(); ++p) {
        predicate_tables_[p] = options_[p][current_[p]];
        weight *= lifted_.factors()[p].options[current_[p]].weight;
      }
      descend(0, weight);
      // odometer, last factor fastest
      for (std::size_t p = options_.size(); p-- > 0;) {
        if (++current_[p] < options_[p].size()) break;
        current_[p] = 0;
      }
    }
  }

 private:
  void descend(std::size_t pos, double weight) {
    for (std::size_t i = pos; i < plan_.order.size(); ++i) {
      const NodeId id = plan_.order[i];
      const NodePlan& np = plan_.nodes[id];
      if (!np.random_output) continue;
      if (!np.vague) {
        compute_node(plan_, id, tables_, predicate_tables_);
        continue;
      }
      Table values;
      if (np.fixed_inputs) {
        values = cache_[id];
      } else {
        detail::quantifier_values(plan_, np, tables_[np.restriction], tables_[np.body], values);
      }
      std::vector<double> cuts;
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (np.v_mass[v] > 0.0) cuts.push_back(values[v]);
      }
      for (const auto& region : threshold_partition(cuts)) {
        thresholded(values, region.upper, tables_[id]);
        regions_.emplace_back(id, region);
        descend(i + 1, weight * region.measure());
        regions_.pop_back();
      }
      return;
    }
    (*visit_)(weight, tables_[plan_.root][0], current_, regions_);
  }

  const Plan& plan_;
  const LiftedLexicon& lifted_;
  std::vector<Table> tables_;
  std::vector<Table> cache_;
  std::vector<std::vector<Table>> options_;
  std::vector<Table> predicate_tables_;
  std::vector<std::size_t> current_;
  std::vector<std::pair<NodeId, ThresholdRegion>> regions_;
  const Visit* visit_ = nullptr;
};

VagueLexicon used_lexicon(const Plan& plan) {
  VagueLexicon used;
  for (const auto* psi : plan.vague) add_predicate(used, *psi);
  return used;
}

void check_vague_cap(const Plan& plan, const EvalOptions& options) {
  if (plan.vague_nodes.size() > options.max_vague_nodes)
    throw Error(ErrorCode::ExplosionGuard,
                std::to_string(plan.vague_nodes.size()) + " vague quantifier nodes exceed the cap of " +
                    std::to_string(options.max_vague_nodes));
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64 stream for one sample. Each sample's stream depends only on
/// (seed, sample index), so splitting samples across threads cannot change
/// the draws.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) : state_(mix64(seed ^ mix64(index))) {}

  double uniform01() {
    const std::uint64_t bits = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

std::uint64_t count_hits(const Plan& plan, const std::vector<Table>& fixed_tables,
                         const std::vector<Table>& cache, LiftScheme scheme, std::uint64_t seed,
                         std::uint64_t begin, std::uint64_t end) {
  std::vector<Table> tables = fixed_tables;
  std::vector<Table> predicate_tables = vague_tables(plan);
  std::vector<bool> fixed_predicate;
  for (const auto& t : predicate_tables)
    fixed_predicate.push_back(std::all_of(t.begin(), t.end(), [](double p) { return p == 0.0 || p == 1.0; }));
  const std::vector<Table> psi = predicate_tables;
  Table values;
  std::uint64_t hits = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    SampleStream gen(seed, i);
    for (std::size_t p = 0; p < psi.size(); ++p) {
      if (fixed_predicate[p]) continue;
      Table& t = predicate_tables[p];
      if (scheme == LiftScheme::Independent) {
        for (std::size_t x = 0; x < t.size(); ++x) {
          const double q = psi[p][x];
          t[x] = (q > 0.0 && q < 1.0) ? (gen.uniform01() < q ? 1.0 : 0.0) : q;
        }
      } else {
        const double theta = 1.0 - gen.uniform01();
        for (std::size_t x = 0; x < t.size(); ++x) t[x] = psi[p][x] >= theta ? 1.0 : 0.0;
      }
    }
    for (NodeId id : plan.order) {
      const NodePlan& np = plan.nodes[id];
      if (!np.random_output) continue;
      if (!np.vague) {
        compute_node(plan, id, tables, predicate_tables);
        continue;
      }
      const Table* v = &cache[id];
      if (!np.fixed_inputs) {
        detail::quantifier_values(plan, np, tables[np.restriction], tables[np.body], values);
        v = &values;
      }
      thresholded(*v, 1.0 - gen.uniform01(), tables[id]);
    }
    if (tables[plan.root][0] != 0.0) ++hits;
  }
  return hits;
}

}  // namespace

EvalResult eval_naive(const ScopeGraph& graph, const SituationModel& model,
                      const VagueLexicon& lexicon, const EvalOptions& options) {
  const Plan plan = detail::build_plan(graph, model, lexicon, options);
  EvalResult result;
  result.engine = EngineKind::Naive;
  result.probability = evaluate_vague_tables(plan, graph.size());
  return result;
}

EvalResult eval_generic_fast(const ScopeGraph& graph, const SituationModel& model,
                             const VagueLexicon& lexicon, const EvalOptions& options) {
  const Plan plan = detail::build_plan(graph, model, lexicon, options);
  for (NodeId id : plan.order) {
    const auto* q = std::get_if<Quantifier>(&graph.node(id).value);
    if (q == nullptr || q->shape.is_vague()) continue;
    std::string where = "node " + std::to_string(id);
    if (const auto& loc = graph.node(id).location)
      where += " at line " + std::to_string(loc->line) + ", column " + std::to_string(loc->column);
    throw Error(ErrorCode::PreciseQuantifierInFastPath,
                std::string("precise quantifier '") + keyword(q->shape.kind()) + "' (" + where +
                    ") cannot use the generic fast path; use the exact engine");
  }
  EvalResult result;
  result.engine = EngineKind::GenericFast;
  result.probability = evaluate_vague_tables(plan, graph.size());
  return result;
}

EvalResult eval_exact(const ScopeGraph& graph, const SituationModel& model,
                      const VagueLexicon& lexicon, const EvalOptions& options) {
  const Plan plan = detail::build_plan(graph, model, lexicon, options);
  check_vague_cap(plan, options);
  const LiftedLexicon lifted =
      lift(used_lexicon(plan), options.scheme, model.space(), options.max_configurations);
  ExactEnumerator enumerator(plan, lifted, graph.size());
  KahanSum total;
  enumerator.run([&](double weight, double root, const auto&, const auto&) {
    if (root != 0.0) total.add(weight * root);
  });
  EvalResult result;
  result.engine = EngineKind::Exact;
  result.probability = std::clamp(total.value(), 0.0, 1.0);
  result.scheme = options.scheme;
  return result;
}

void for_each_world_configuration(
    const ScopeGraph& graph, const SituationModel& model, const VagueLexicon& lexicon,
    const EvalOptions& options,
    const std::function<void(const WorldConfiguration&, bool root_true)>& visit) {
  const Plan plan = detail::build_plan(graph, model, lexicon, options);
  check_vague_cap(plan, options);
  const LiftedLexicon lifted =
      lift(used_lexicon(plan), options.scheme, model.space(), options.max_configurations);
  ExactEnumerator enumerator(plan, lifted, graph.size());
  enumerator.run([&](double weight, double root, const std::vector<std::size_t>& chosen,
                     const std::vector<std::pair<NodeId, ThresholdRegion>>& regions) {
    WorldConfiguration config;
    config.weight = weight;
    for (std::size_t p = 0; p < chosen.size(); ++p) {
      const auto& factor = lifted.factors()[p];
      config.precise.predicates.emplace(factor.predicate, factor.options[chosen[p]].truth);
    }
    for (const auto& [id, region] : regions) config.thresholds.emplace(id, region);
    visit(config, root != 0.0);
  });
}

EvalResult eval_mc(const ScopeGraph& graph, const SituationModel& model,
                   const VagueLexicon& lexicon, const EvalOptions& options) {
  if (options.samples < 1) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least one sample");
  const Plan plan = detail::build_plan(graph, model, lexicon, options);

  std::vector<Table> fixed(graph.size());
  std::vector<Table> cache(graph.size());
  const auto psi = vague_tables(plan);
  for (NodeId id : plan.order) {
    const NodePlan& np = plan.nodes[id];
    if (!np.random_output) compute_node(plan, id, fixed, psi);
    else if (np.vague && np.fixed_inputs)
      detail::quantifier_values(plan, np, fixed[np.restriction], fixed[np.body], cache[id]);
  }

  const std::uint64_t n = options.samples;
  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, std::min<std::uint64_t>(n, 256)));
  std::uint64_t hits = 0;
  if (threads == 1) {
    hits = count_hits(plan, fixed, cache, options.scheme, options.seed, 0, n);
  } else {
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t begin = n * t / threads;
      const std::uint64_t end = n * (t + 1) / threads;
      pool.emplace_back([&, t, begin, end] {
        partial[t] = count_hits(plan, fixed, cache, options.scheme, options.seed, begin, end);
      });
    }
    for (auto& th : pool) th.join();
    for (auto h : partial) hits += h;
  }

  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  EvalResult result;
  result.engine = EngineKind::MonteCarlo;
  result.probability = p;
  result.ci = std::make_pair(std::max(0.0, p - half), std::min(1.0, p + half));
  result.samples = n;
  result.seed = options.seed;
  result.scheme = options.scheme;
  return result;
}

EvalResult evaluate(EngineKind engine, const ScopeGraph& graph, const SituationModel& model,
                    const VagueLexicon& lexicon, const EvalOptions& options) {
  switch (engine) {
    case EngineKind::Naive: return eval_naive(graph, model, lexicon, options);
    case EngineKind::Exact: return eval_exact(graph, model, lexicon, options);
    case EngineKind::MonteCarlo: return eval_mc(graph, model, lexicon, options);
    case EngineKind::GenericFast: return eval_generic_fast(graph, model, lexicon, options);
  }
  return eval_exact(graph, model, lexicon, options);
}

GenericComparison compare_generic(const ScopeGraph& graph, const SituationModel& model,
                                  const VagueLexicon& lexicon, const EvalOptions& options) {
  const ScopeAnalysis analysis = analyze(graph);
  for (NodeId id : analysis.order) {
    const auto* q = std::get_if<Quantifier>(&graph.node(id).value);
    if (q != nullptr && q->shape.kind() != QuantifierKind::Generic)
      throw Error(ErrorCode::InvalidArgument,
                  std::string("compare_generic needs generic quantifiers only; node ") +
                      std::to_string(id) + " is '" + keyword(q->shape.kind()) + "'");
  }
  GenericComparison out;
  out.exact = eval_exact(graph, model, lexicon, options).probability;
  out.fast = eval_generic_fast(graph, model, lexicon, options).probability;
  out.difference = std::abs(out.exact - out.fast);
  return out;
}

}  // namespace quantale
