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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quantale/model.hpp"
#include "quantale/rsa.hpp"
#include "quantale/scope.hpp"

namespace quantale {

enum class Severity { Error, Warning };

const char* to_string(Severity severity);

struct SourceDiagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::size_t line = 1;
  std::size_t column = 1;
  std::string snippet;  // the offending source line
};

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<SourceDiagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

struct World {
  SituationModel model;
  VagueLexicon lexicon;
};

/// JSON world files:
///   {"pixies": [...], "variables": [...],
///    "joint": [{"assign": {var: pixie}, "prob": p}, ...],
///    "predicates": {name: {pixie: psi}}}
ParseResult<World> parse_world(std::string_view text);
/// Canonical form: sorted keys, sorted pixies, joint sorted by assignment,
/// zero psi entries omitted, two-space indentation, trailing newline.
std::string serialize_world(const World& world);

/// S-expression propositions. ";" starts a comment. A top-level
/// (let (name node)... node) introduces shared nodes referenced as #name.
ParseResult<ScopeGraph> parse_prop(std::string_view text);
/// Canonical form. Nodes with several parents are let-bound, keeping their
/// alias when they have one. Throws Error(InvalidArgument) for custom shapes,
/// which have no surface syntax.
std::string serialize_prop(const ScopeGraph& graph);

/// Scenario JSON; world and proposition paths resolve against base_dir.
ParseResult<RsaScenario> parse_scenario(std::string_view text,
                                        const std::filesystem::path& base_dir);

bool structurally_equal(const World& a, const World& b);
/// Equality up to node numbering, including which nodes are shared.
bool structurally_equal(const ScopeGraph& a, const ScopeGraph& b);

/// "name:line:column: error: message" followed by the snippet line.
std::string format_diagnostic(const SourceDiagnostic& diagnostic, std::string_view source);

std::optional<std::string> read_text_file(const std::filesystem::path& path);

}  // namespace quantale
