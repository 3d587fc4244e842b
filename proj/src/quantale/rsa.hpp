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

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quantale/engine.hpp"

namespace quantale {

struct RsaState {
  std::string id;
  double prior = 0.0;
  SituationModel model;
  VagueLexicon lexicon;
  LiftScheme scheme = LiftScheme::Independent;
  /// Optional numeric label (e.g. a proportion) used by reading_selector.
  std::optional<double> value;
};

struct RsaUtterance {
  std::string id;
  ScopeGraph graph;
  double cost = 0.0;
};

struct RsaScenario {
  std::vector<RsaState> states;
  std::vector<RsaUtterance> utterances;
  double alpha = std::numeric_limits<double>::infinity();
  EngineKind engine = EngineKind::Exact;
  EvalOptions options;
};

/// Problems with priors, alpha, ids, or utterances that do not validate in
/// some state. Empty when the scenario is usable.
std::vector<std::string> scenario_problems(const RsaScenario& scenario);

struct RsaDistribution {
  std::vector<std::string> support;
  std::vector<double> probs;

  double at(std::string_view id) const;
  double entropy() const;
};

using Posterior = RsaDistribution;

/// Literal listener, pragmatic speaker and pragmatic listener over a fixed
/// scenario. Meanings M(u, s) are the engine's probabilities of truth and are
/// computed once, at construction.
class RsaModel {
 public:
  explicit RsaModel(RsaScenario scenario);

  const RsaScenario& scenario() const { return scenario_; }
  /// meaning(u, s), indexed [utterance][state].
  const std::vector<std::vector<double>>& meanings() const { return meanings_; }

  /// Throws Error(AllFalse) when the utterance is false in every state.
  Posterior literal_listener(std::string_view utterance) const;
  /// Throws Error(NoViableUtterance) when no utterance is true in the state.
  RsaDistribution pragmatic_speaker(std::string_view state) const;
  RsaDistribution pragmatic_speaker(std::string_view state, double alpha) const;
  Posterior pragmatic_listener(std::string_view utterance) const;
  Posterior pragmatic_listener(std::string_view utterance, double alpha) const;

  std::size_t state_index(std::string_view id) const;
  std::size_t utterance_index(std::string_view id) const;

 private:
  std::vector<double> literal(std::size_t u) const;  // empty when all false

  RsaScenario scenario_;
  std::vector<std::vector<double>> meanings_;
};

Posterior literal_listener(const RsaScenario& scenario, std::string_view utterance);
RsaDistribution pragmatic_speaker(const RsaScenario& scenario, std::string_view state);
Posterior pragmatic_listener(const RsaScenario& scenario, std::string_view utterance);

struct ReadingReport {
  struct SweepPoint {
    double alpha = 0.0;
    Posterior posterior;
    double entropy = 0.0;
  };

  Posterior posterior;
  double expected_value = 0.0;
  double entropy = 0.0;
  /// Posterior mass on the states carrying the largest value.
  double mass_at_max = 0.0;
  /// Smallest state value still holding posterior mass.
  double min_supported_value = 0.0;
  /// "strong" when the posterior sits entirely on the largest value,
  /// "weak" when lower values survive.
  std::string reading;
  std::vector<SweepPoint> sweep;
};

/// Pragmatic-listener view of a scenario whose states carry numeric values
/// (e.g. the proportion of owned donkeys fed). Optionally sweeps alpha.
ReadingReport reading_selector(const RsaScenario& scenario, std::string_view utterance,
                               const std::vector<double>& alphas = {});

}  // namespace quantale
