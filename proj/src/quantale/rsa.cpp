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
#include "quantale/rsa.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "quantale/error.hpp"
#include "quantale/numeric.hpp"

namespace quantale {

namespace {

constexpr double kTieTolerance = 1e-9;

std::vector<double> normalized(std::vector<double> w) {
  KahanSum s;
  for (double x : w) s.add(x);
  const double total = s.value();
  for (double& x : w) x /= total;
  return w;
}

}  // namespace

std::vector<std::string> scenario_problems(const RsaScenario& scenario) {
  std::vector<std::string> out;
  if (scenario.states.empty()) out.push_back("scenario has no states");
  if (scenario.utterances.empty()) out.push_back("scenario has no utterances");
  if (!(scenario.alpha > 0.0)) out.push_back("alpha must be positive");
  std::set<std::string> ids;
  KahanSum prior;
  for (const auto& s : scenario.states) {
    if (!ids.insert(s.id).second) out.push_back("duplicate state id '" + s.id + "'");
    if (!(s.prior >= 0.0) || !std::isfinite(s.prior))
      out.push_back("state '" + s.id + "' has a negative prior");
    prior.add(s.prior);
  }
  if (!scenario.states.empty() && std::abs(prior.value() - 1.0) > kMassTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", prior.value());
    out.push_back(std::string("state priors sum to ") + buf + ", not 1");
  }
  ids.clear();
  for (const auto& u : scenario.utterances) {
    if (!ids.insert(u.id).second) out.push_back("duplicate utterance id '" + u.id + "'");
    if (!(u.cost >= 0.0) || !std::isfinite(u.cost))
      out.push_back("utterance '" + u.id + "' has a negative cost");
    for (const auto& s : scenario.states) {
      for (const auto& d : validate(u.graph, s.model, s.lexicon))
        out.push_back("utterance '" + u.id + "' in state '" + s.id + "': " + d.message);
    }
  }
  return out;
}

double RsaDistribution::at(std::string_view id) const {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == id) return probs[i];
  }
  return 0.0;
}

double RsaDistribution::entropy() const {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

RsaModel::RsaModel(RsaScenario scenario) : scenario_(std::move(scenario)) {
  const auto problems = scenario_problems(scenario_);
  if (!problems.empty()) throw Error(ErrorCode::InvalidArgument, problems.front());
  for (const auto& u : scenario_.utterances) {
    std::vector<double> row;
    for (const auto& s : scenario_.states) {
      EvalOptions options = scenario_.options;
      options.scheme = s.scheme;
      row.push_back(evaluate(scenario_.engine, u.graph, s.model, s.lexicon, options).probability);
    }
    meanings_.push_back(std::move(row));
  }
}

std::size_t RsaModel::state_index(std::string_view id) const {
  for (std::size_t i = 0; i < scenario_.states.size(); ++i) {
    if (scenario_.states[i].id == id) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown state '" + std::string(id) + "'");
}

std::size_t RsaModel::utterance_index(std::string_view id) const {
  for (std::size_t i = 0; i < scenario_.utterances.size(); ++i) {
    if (scenario_.utterances[i].id == id) return i;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown utterance '" + std::string(id) + "'");
}

std::vector<double> RsaModel::literal(std::size_t u) const {
  std::vector<double> w;
  bool any = false;
  for (std::size_t s = 0; s < scenario_.states.size(); ++s) {
    w.push_back(scenario_.states[s].prior * meanings_[u][s]);
    any = any || w.back() > 0.0;
  }
  if (!any) return {};
  return normalized(std::move(w));
}

Posterior RsaModel::literal_listener(std::string_view utterance) const {
  const std::size_t u = utterance_index(utterance);
  auto probs = literal(u);
  if (probs.empty())
    throw Error(ErrorCode::AllFalse,
                "utterance '" + std::string(utterance) + "' is false in every state");
  Posterior out;
  for (const auto& s : scenario_.states) out.support.push_back(s.id);
  out.probs = std::move(probs);
  return out;
}

RsaDistribution RsaModel::pragmatic_speaker(std::string_view state) const {
  return pragmatic_speaker(state, scenario_.alpha);
}

RsaDistribution RsaModel::pragmatic_speaker(std::string_view state, double alpha) const {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const std::size_t s = state_index(state);
  const std::size_t n = scenario_.utterances.size();
  const double minus_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> utility(n, minus_inf);
  double best = minus_inf;
  for (std::size_t u = 0; u < n; ++u) {
    const auto l0 = literal(u);
    if (l0.empty() || !(l0[s] > 0.0)) continue;
    utility[u] = std::log(l0[s]) - scenario_.utterances[u].cost;
    best = std::max(best, utility[u]);
  }
  if (best == minus_inf)
    throw Error(ErrorCode::NoViableUtterance,
                "no utterance is true in state '" + std::string(state) + "'");

  std::vector<double> w(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    if (utility[u] == minus_inf) continue;
    if (std::isinf(alpha)) w[u] = best - utility[u] <= kTieTolerance ? 1.0 : 0.0;
    else w[u] = std::exp(alpha * (utility[u] - best));
  }
  RsaDistribution out;
  for (const auto& u : scenario_.utterances) out.support.push_back(u.id);
  out.probs = normalized(std::move(w));
  return out;
}

Posterior RsaModel::pragmatic_listener(std::string_view utterance) const {
  return pragmatic_listener(utterance, scenario_.alpha);
}

Posterior RsaModel::pragmatic_listener(std::string_view utterance, double alpha) const {
  const std::size_t u = utterance_index(utterance);
  std::vector<double> w;
  bool any = false;
  for (const auto& state : scenario_.states) {
    double speak = 0.0;
    try {
      speak = pragmatic_speaker(state.id, alpha).probs[u];
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoViableUtterance) throw;
    }
    w.push_back(state.prior * speak);
    any = any || w.back() > 0.0;
  }
  if (!any)
    throw Error(ErrorCode::AllFalse,
                "no state leads the speaker to say '" + std::string(utterance) + "'");
  Posterior out;
  for (const auto& s : scenario_.states) out.support.push_back(s.id);
  out.probs = normalized(std::move(w));
  return out;
}

Posterior literal_listener(const RsaScenario& scenario, std::string_view utterance) {
  return RsaModel(scenario).literal_listener(utterance);
}

RsaDistribution pragmatic_speaker(const RsaScenario& scenario, std::string_view state) {
  return RsaModel(scenario).pragmatic_speaker(state);
}

Posterior pragmatic_listener(const RsaScenario& scenario, std::string_view utterance) {
  return RsaModel(scenario).pragmatic_listener(utterance);
}

ReadingReport reading_selector(const RsaScenario& scenario, std::string_view utterance,
                               const std::vector<double>& alphas) {
  for (const auto& s : scenario.states) {
    if (!s.value)
      throw Error(ErrorCode::InvalidArgument, "state '" + s.id + "' carries no value");
  }
  const RsaModel model(scenario);
  ReadingReport report;
  report.posterior = model.pragmatic_listener(utterance);
  report.entropy = report.posterior.entropy();

  double max_value = -std::numeric_limits<double>::infinity();
  for (const auto& s : scenario.states) max_value = std::max(max_value, *s.value);
  report.min_supported_value = max_value;
  KahanSum expected, at_max;
  for (std::size_t i = 0; i < scenario.states.size(); ++i) {
    const double p = report.posterior.probs[i];
    const double v = *scenario.states[i].value;
    expected.add(p * v);
    if (v == max_value) at_max.add(p);
    if (p > 0.0) report.min_supported_value = std::min(report.min_supported_value, v);
  }
  report.expected_value = expected.value();
  report.mass_at_max = at_max.value();
  report.reading = report.mass_at_max >= 1.0 - kMassTolerance ? "strong" : "weak";

  for (double alpha : alphas) {
    ReadingReport::SweepPoint point;
    point.alpha = alpha;
    point.posterior = model.pragmatic_listener(utterance, alpha);
    point.entropy = point.posterior.entropy();
    report.sweep.push_back(std::move(point));
  }
  return report;
}

}  // namespace quantale
