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

#include <filesystem>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quantale/dsl.hpp"
#include "quantale/error.hpp"

namespace quantale::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(QUANTALE_FIXTURE_DIR) / name;
}

inline World fixture_world(const std::string& name) {
  auto parsed = parse_world(read_text_file(fixture_path(name)).value());
  if (!parsed.ok()) throw std::runtime_error("bad fixture " + name);
  return std::move(*parsed.value);
}

inline ScopeGraph fixture_prop(const std::string& name) {
  auto parsed = parse_prop(read_text_file(fixture_path(name)).value());
  if (!parsed.ok()) throw std::runtime_error("bad fixture " + name);
  return std::move(*parsed.value);
}

inline RsaScenario fixture_scenario(const std::string& name) {
  auto parsed = parse_scenario(read_text_file(fixture_path(name)).value(),
                               fixture_path(name).parent_path());
  if (!parsed.ok()) throw std::runtime_error("bad fixture " + name);
  return std::move(*parsed.value);
}

inline ScopeGraph prop(const std::string& text) {
  auto parsed = parse_prop(text);
  if (!parsed.ok()) throw std::runtime_error("bad proposition " + text);
  return std::move(*parsed.value);
}

using Row = std::pair<std::vector<std::string>, double>;

/// Builds a world from pixie names, variable names, joint rows and
/// predicate tables keyed by pixie name.
inline World make_world(std::vector<std::string> pixies, std::vector<std::string> variables,
                        std::initializer_list<Row> rows,
                        std::map<std::string, std::map<std::string, double>> predicates) {
  PixieSpace space(std::move(pixies));
  std::vector<JointEntry> joint;
  for (const auto& [names, mass] : rows) {
    JointEntry e;
    for (const auto& n : names) e.assignment.push_back(*space.find(n));
    e.mass = mass;
    joint.push_back(std::move(e));
  }
  VagueLexicon lexicon;
  for (const auto& [name, entries] : predicates)
    add_predicate(lexicon, VaguePredicate(name, space, entries));
  return World{SituationModel(space, std::move(variables), std::move(joint)), std::move(lexicon)};
}

/// One variable x over the given pixies with uniform mass.
inline World uniform_world(std::vector<std::string> pixies,
                           std::map<std::string, std::map<std::string, double>> predicates) {
  PixieSpace space(pixies);
  std::vector<JointEntry> joint;
  for (PixieId p = 0; p < space.size(); ++p)
    joint.push_back({{p}, 1.0 / static_cast<double>(space.size())});
  VagueLexicon lexicon;
  for (const auto& [name, entries] : predicates)
    add_predicate(lexicon, VaguePredicate(name, space, entries));
  return World{SituationModel(space, {"x"}, std::move(joint)), std::move(lexicon)};
}

}  // namespace quantale::testing
