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
#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "quantale/model.hpp"
#include "quantale/quant.hpp"
#include "quantale/scope.hpp"

namespace quantale {

enum class EngineKind { Naive, Exact, MonteCarlo, GenericFast };

const char* to_string(EngineKind kind);
std::optional<EngineKind> parse_engine_kind(std::string_view text);

struct EvalOptions {
  LiftScheme scheme = LiftScheme::Independent;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::uint64_t max_configurations = kDefaultMaxConfigurations;
  std::uint32_t max_vague_nodes = 4;
  std::uint64_t max_table_size = std::uint64_t{1} << 24;
  /// Conditional restriction mass below this counts as an empty restriction.
  double denominator_guard = 1e-15;
  /// Ratios this close to an interior shape breakpoint are moved onto it, so
  /// that e.g. a ratio of exactly one half summed in floating point still
  /// fails "most".
  double breakpoint_snap = 1e-12;
  double generic_empty_restriction = 1.0;
  unsigned threads = 1;
};

struct EvalResult {
  double probability = 0.0;
  EngineKind engine = EngineKind::Exact;
  std::optional<std::pair<double, double>> ci;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<LiftScheme> scheme;
};

/// Quantifier truth straight from the vague conditional probability.
/// Reproduces the trivial truth values of precise quantifiers.
EvalResult eval_naive(const ScopeGraph& graph, const SituationModel& model,
                      const VagueLexicon& lexicon, const EvalOptions& options = {});

/// Expectation over precise lexicons and, for each vague quantifier node, over
/// one uniform threshold shared by all assignments of its free variables.
/// Exact up to floating-point summation.
EvalResult eval_exact(const ScopeGraph& graph, const SituationModel& model,
                      const VagueLexicon& lexicon, const EvalOptions& options = {});

/// Sampling estimate of eval_exact with a 95% normal-approximation interval.
/// Sample i draws from a generator seeded by (seed, i), so the thread count
/// never changes the result.
EvalResult eval_mc(const ScopeGraph& graph, const SituationModel& model,
                   const VagueLexicon& lexicon, const EvalOptions& options = {});

/// Vague quantifiers evaluated on vague functions directly (the expectation
/// over precise functions taken inside the ratio). Applied node by node, so
/// nested vague quantifiers compose. Throws PreciseQuantifierInFastPath.
EvalResult eval_generic_fast(const ScopeGraph& graph, const SituationModel& model,
                             const VagueLexicon& lexicon, const EvalOptions& options = {});

EvalResult evaluate(EngineKind engine, const ScopeGraph& graph, const SituationModel& model,
                    const VagueLexicon& lexicon, const EvalOptions& options = {});

struct GenericComparison {
  double exact = 0.0;
  double fast = 0.0;
  double difference = 0.0;
};

/// Runs eval_exact and eval_generic_fast on a graph whose quantifiers are all
/// generic and reports the gap.
GenericComparison compare_generic(const ScopeGraph& graph, const SituationModel& model,
                                  const VagueLexicon& lexicon, const EvalOptions& options = {});

/// One term of the exact expectation.
struct WorldConfiguration {
  PreciseLexicon precise;
  double weight = 0.0;
  std::map<NodeId, ThresholdRegion> thresholds;
};

/// Visits every (precise lexicon, threshold region) combination eval_exact
/// sums over, with the root's truth value in it.
void for_each_world_configuration(
    const ScopeGraph& graph, const SituationModel& model, const VagueLexicon& lexicon,
    const EvalOptions& options,
    const std::function<void(const WorldConfiguration&, bool root_true)>& visit);

}  // namespace quantale
