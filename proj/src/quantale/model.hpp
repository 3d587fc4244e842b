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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quantale {

using PixieId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr std::uint64_t kDefaultMaxConfigurations = std::uint64_t{1} << 20;

/// Finite, ordered set of opaque pixie identifiers.
class PixieSpace {
 public:
  explicit PixieSpace(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& name(PixieId id) const { return elements_.at(id); }
  std::optional<PixieId> find(std::string_view name) const;

 private:
  std::vector<std::string> elements_;
  std::map<std::string, PixieId, std::less<>> index_;
};

struct JointEntry {
  std::vector<PixieId> assignment;  // one pixie per declared variable
  double mass = 0.0;
};

/// Joint distribution over named pixie-valued variables.
///
/// The constructor enforces the invariants: every entry assigns every
/// variable, assignments are unique, masses are non-negative and total 1
/// within kMassTolerance.
class SituationModel {
 public:
  SituationModel(PixieSpace space, std::vector<std::string> variables,
                 std::vector<JointEntry> joint);

  const PixieSpace& space() const { return space_; }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<JointEntry>& joint() const { return joint_; }

  std::optional<VarId> find_variable(std::string_view name) const;
  /// Throws Error(UnknownVariable).
  VarId variable_id(std::string_view name) const;

 private:
  PixieSpace space_;
  std::vector<std::string> variables_;
  std::vector<JointEntry> joint_;
};

/// Probability of truth per pixie. Pixies without an entry have probability 0.
class VaguePredicate {
 public:
  VaguePredicate(std::string name, std::vector<double> table);
  VaguePredicate(std::string name, const PixieSpace& space,
                 const std::map<std::string, double>& entries);

  const std::string& name() const { return name_; }
  double operator()(PixieId x) const { return x < table_.size() ? table_[x] : 0.0; }
  const std::vector<double>& table() const { return table_; }

  friend bool operator==(const VaguePredicate&, const VaguePredicate&) = default;

 private:
  std::string name_;
  std::vector<double> table_;
};

using VagueLexicon = std::map<std::string, VaguePredicate, std::less<>>;

void add_predicate(VagueLexicon& lexicon, VaguePredicate predicate);

/// Boolean extension of each predicate over the whole pixie space.
struct PreciseLexicon {
  std::map<std::string, std::vector<bool>, std::less<>> predicates;

  bool holds(std::string_view predicate, PixieId x) const;
  friend bool operator==(const PreciseLexicon&, const PreciseLexicon&) = default;
};

enum class LiftScheme { Independent, CoupledThreshold };

const char* to_string(LiftScheme scheme);
std::optional<LiftScheme> parse_lift_scheme(std::string_view text);

struct PreciseAlternative {
  std::vector<bool> truth;
  double weight = 0.0;
};

/// The distribution over precise extensions of a single predicate.
struct PredicateAlternatives {
  std::string predicate;
  std::vector<PreciseAlternative> options;
};

/// Distribution over precise lexicons, stored factored by predicate. Predicates
/// are independent of one another under both schemes, so a configuration is
/// one option per predicate and its weight is the product of option weights.
class LiftedLexicon {
 public:
  LiftedLexicon(LiftScheme scheme, std::vector<PredicateAlternatives> factors);

  LiftScheme scheme() const { return scheme_; }
  const std::vector<PredicateAlternatives>& factors() const { return factors_; }

  std::uint64_t configuration_count() const { return count_; }
  /// Mixed-radix decoding; the last factor varies fastest.
  std::pair<PreciseLexicon, double> configuration(std::uint64_t index) const;
  std::vector<std::pair<PreciseLexicon, double>> configurations() const;

 private:
  LiftScheme scheme_;
  std::vector<PredicateAlternatives> factors_;
  std::uint64_t count_ = 1;
};

/// Turns vague predicates into a weighted enumeration of precise lexicons.
/// Independent: one Bernoulli per (predicate, pixie); pixies with psi in {0,1}
/// are fixed. CoupledThreshold: one uniform threshold per predicate, the
/// extension being the super-level set {x : psi(x) >= theta}.
/// Throws Error(ExplosionGuard) beyond max_configurations.
LiftedLexicon lift(const VagueLexicon& lexicon, LiftScheme scheme, const PixieSpace& space,
                   std::uint64_t max_configurations = kDefaultMaxConfigurations);

/// Distribution over tuples of pixies for an ordered list of variables.
struct Distribution {
  std::vector<std::string> variables;
  std::map<std::vector<PixieId>, double> mass;

  double total() const;
  double at(const std::vector<PixieId>& tuple) const;
};

Distribution marginal(const SituationModel& model, std::span<const std::string> variables);

/// P(remaining variables | given). Throws Error(ZeroProbabilityCondition)
/// when the conditioning event has no mass.
Distribution conditional(const SituationModel& model,
                         const std::map<std::string, std::string>& given);

}  // namespace quantale
