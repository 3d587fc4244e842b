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
#include "quantale/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "quantale/error.hpp"
#include "quantale/numeric.hpp"
#include "quantale/quant.hpp"

namespace quantale {

PixieSpace::PixieSpace(std::vector<std::string> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorCode::InvalidArgument, "pixie space is empty");
  for (PixieId i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], i).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate pixie '" + elements_[i] + "'");
  }
}

std::optional<PixieId> PixieSpace::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SituationModel::SituationModel(PixieSpace space, std::vector<std::string> variables,
                               std::vector<JointEntry> joint)
    : space_(std::move(space)), variables_(std::move(variables)), joint_(std::move(joint)) {
  std::set<std::string_view> seen;
  for (const auto& v : variables_) {
    if (!seen.insert(v).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate variable '" + v + "'");
  }
  if (joint_.empty()) throw Error(ErrorCode::InvalidArgument, "joint distribution is empty");
  std::set<std::vector<PixieId>> assignments;
  KahanSum total;
  for (const auto& entry : joint_) {
    if (entry.assignment.size() != variables_.size())
      throw Error(ErrorCode::InvalidArgument, "joint entry does not assign every variable");
    for (PixieId x : entry.assignment) {
      if (x >= space_.size()) throw Error(ErrorCode::InvalidArgument, "joint entry names an unknown pixie");
    }
    if (!std::isfinite(entry.mass) || entry.mass < 0.0)
      throw Error(ErrorCode::InvalidArgument, "joint mass must be finite and non-negative");
    if (!assignments.insert(entry.assignment).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate joint assignment");
    total.add(entry.mass);
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance)
    throw Error(ErrorCode::InvalidArgument,
                "joint mass " + std::to_string(total.value()) + " does not sum to 1");
}

std::optional<VarId> SituationModel::find_variable(std::string_view name) const {
  for (VarId i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == name) return i;
  }
  return std::nullopt;
}

VarId SituationModel::variable_id(std::string_view name) const {
  if (auto id = find_variable(name)) return *id;
  throw Error(ErrorCode::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

namespace {

void check_probability(const std::string& predicate, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "predicate '" + predicate + "' has probability outside [0,1]");
}

}  // namespace

VaguePredicate::VaguePredicate(std::string name, std::vector<double> table)
    : name_(std::move(name)), table_(std::move(table)) {
  for (double p : table_) check_probability(name_, p);
}

VaguePredicate::VaguePredicate(std::string name, const PixieSpace& space,
                               const std::map<std::string, double>& entries)
    : name_(std::move(name)), table_(space.size(), 0.0) {
  for (const auto& [pixie, p] : entries) {
    auto id = space.find(pixie);
    if (!id)
      throw Error(ErrorCode::InvalidArgument,
                  "predicate '" + name_ + "' names unknown pixie '" + pixie + "'");
    check_probability(name_, p);
    table_[*id] = p;
  }
}

void add_predicate(VagueLexicon& lexicon, VaguePredicate predicate) {
  std::string key = predicate.name();
  lexicon.insert_or_assign(std::move(key), std::move(predicate));
}

bool PreciseLexicon::holds(std::string_view predicate, PixieId x) const {
  auto it = predicates.find(predicate);
  if (it == predicates.end() || x >= it->second.size()) return false;
  return it->second[x];
}

const char* to_string(LiftScheme scheme) {
  return scheme == LiftScheme::Independent ? "independent" : "coupled-threshold";
}

std::optional<LiftScheme> parse_lift_scheme(std::string_view text) {
  if (text == "independent") return LiftScheme::Independent;
  if (text == "coupled-threshold") return LiftScheme::CoupledThreshold;
  return std::nullopt;
}

LiftedLexicon::LiftedLexicon(LiftScheme scheme, std::vector<PredicateAlternatives> factors)
    : scheme_(scheme), factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if (f.options.empty())
      throw Error(ErrorCode::InvalidArgument, "predicate '" + f.predicate + "' has no alternatives");
    const std::uint64_t n = f.options.size();
    count_ = count_ > UINT64_MAX / n ? UINT64_MAX : count_ * n;
  }
}

std::pair<PreciseLexicon, double> LiftedLexicon::configuration(std::uint64_t index) const {
  if (index >= count_) throw Error(ErrorCode::InvalidArgument, "configuration index out of range");
  PreciseLexicon lexicon;
  double weight = 1.0;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    const auto& option = it->options[index % it->options.size()];
    index /= it->options.size();
    lexicon.predicates.emplace(it->predicate, option.truth);
    weight *= option.weight;
  }
  return {std::move(lexicon), weight};
}

std::vector<std::pair<PreciseLexicon, double>> LiftedLexicon::configurations() const {
  std::vector<std::pair<PreciseLexicon, double>> out;
  out.reserve(count_);
  for (std::uint64_t i = 0; i < count_; ++i) out.push_back(configuration(i));
  return out;
}

namespace {

PredicateAlternatives lift_independent(const VaguePredicate& psi, std::size_t n,
                                       std::uint64_t max_configurations) {
  std::vector<bool> base(n, false);
  std::vector<PixieId> fractional;
  for (PixieId x = 0; x < n; ++x) {
    const double p = psi(x);
    if (p >= 1.0) base[x] = true;
    else if (p > 0.0) fractional.push_back(x);
  }
  if (fractional.size() >= 63 || (std::uint64_t{1} << fractional.size()) > max_configurations)
    throw Error(ErrorCode::ExplosionGuard,
                "predicate '" + psi.name() + "' has " + std::to_string(fractional.size()) +
                    " fractional entries; configuration cap exceeded");
  PredicateAlternatives out{psi.name(), {}};
  const std::uint64_t count = std::uint64_t{1} << fractional.size();
  out.options.reserve(count);
  // Bit k clear means fractional[k] is true, so the first option is all-true.
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    PreciseAlternative alt{base, 1.0};
    for (std::size_t k = 0; k < fractional.size(); ++k) {
      const double p = psi(fractional[k]);
      const bool value = ((mask >> k) & 1u) == 0;
      alt.truth[fractional[k]] = value;
      alt.weight *= value ? p : 1.0 - p;
    }
    out.options.push_back(std::move(alt));
  }
  return out;
}

PredicateAlternatives lift_coupled(const VaguePredicate& psi, std::size_t n) {
  std::vector<double> values;
  for (PixieId x = 0; x < n; ++x) values.push_back(psi(x));
  PredicateAlternatives out{psi.name(), {}};
  for (const auto& region : threshold_partition(values)) {
    PreciseAlternative alt{std::vector<bool>(n, false), region.measure()};
    for (PixieId x = 0; x < n; ++x) alt.truth[x] = psi(x) >= region.upper;
    out.options.push_back(std::move(alt));
  }
  return out;
}

}  // namespace

LiftedLexicon lift(const VagueLexicon& lexicon, LiftScheme scheme, const PixieSpace& space,
                   std::uint64_t max_configurations) {
  std::vector<PredicateAlternatives> factors;
  std::uint64_t count = 1;
  for (const auto& [name, psi] : lexicon) {
    if (psi.table().size() > space.size())
      throw Error(ErrorCode::InvalidArgument, "predicate '" + name + "' is larger than the pixie space");
    auto factor = scheme == LiftScheme::Independent
                      ? lift_independent(psi, space.size(), max_configurations)
                      : lift_coupled(psi, space.size());
    const std::uint64_t k = factor.options.size();
    if (count > max_configurations / k)
      throw Error(ErrorCode::ExplosionGuard,
                  "lifted lexicon exceeds " + std::to_string(max_configurations) + " configurations");
    count *= k;
    factors.push_back(std::move(factor));
  }
  return LiftedLexicon(scheme, std::move(factors));
}

double Distribution::total() const {
  KahanSum s;
  for (const auto& [tuple, p] : mass) s.add(p);
  return s.value();
}

double Distribution::at(const std::vector<PixieId>& tuple) const {
  auto it = mass.find(tuple);
  return it == mass.end() ? 0.0 : it->second;
}

namespace {

Distribution project(const SituationModel& model, const std::vector<VarId>& keep,
                     const std::vector<std::pair<VarId, PixieId>>& given) {
  Distribution out;
  for (VarId v : keep) out.variables.push_back(model.variables()[v]);
  std::map<std::vector<PixieId>, KahanSum> sums;
  for (const auto& entry : model.joint()) {
    bool match = true;
    for (const auto& [v, x] : given) match = match && entry.assignment[v] == x;
    if (!match) continue;
    std::vector<PixieId> tuple;
    tuple.reserve(keep.size());
    for (VarId v : keep) tuple.push_back(entry.assignment[v]);
    sums[tuple].add(entry.mass);
  }
  for (auto& [tuple, s] : sums) out.mass.emplace(tuple, s.value());
  return out;
}

}  // namespace

Distribution marginal(const SituationModel& model, std::span<const std::string> variables) {
  if (variables.empty()) throw Error(ErrorCode::InvalidArgument, "marginal needs at least one variable");
  std::vector<VarId> keep;
  for (const auto& name : variables) {
    VarId id = model.variable_id(name);
    if (std::find(keep.begin(), keep.end(), id) != keep.end())
      throw Error(ErrorCode::InvalidArgument, "variable '" + name + "' listed twice");
    keep.push_back(id);
  }
  return project(model, keep, {});
}

Distribution conditional(const SituationModel& model,
                         const std::map<std::string, std::string>& given) {
  std::vector<std::pair<VarId, PixieId>> fixed;
  for (const auto& [var, pixie] : given) {
    VarId v = model.variable_id(var);
    auto x = model.space().find(pixie);
    if (!x) throw Error(ErrorCode::InvalidArgument, "unknown pixie '" + pixie + "'");
    fixed.emplace_back(v, *x);
  }
  std::vector<VarId> keep;
  for (VarId v = 0; v < model.variables().size(); ++v) {
    if (!given.count(model.variables()[v])) keep.push_back(v);
  }
  Distribution joint = project(model, keep, fixed);
  const double norm = joint.total();
  if (!(norm > 0.0))
    throw Error(ErrorCode::ZeroProbabilityCondition, "conditioning event has zero probability");
  for (auto& [tuple, p] : joint.mass) p /= norm;
  return joint;
}

}  // namespace quantale
