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

#include <string>
#include <string_view>

#include "quantale/dsl.hpp"

namespace quantale::detail {

bool is_identifier(std::string_view word);
/// Words with a meaning in the proposition grammar.
bool is_reserved(std::string_view word);

SourceLocation offset_location(std::string_view text, std::size_t offset);
std::string source_line(std::string_view text, std::size_t line);

SourceDiagnostic make_diagnostic(std::string_view text, SourceLocation where, std::string message,
                                 Severity severity = Severity::Error);

/// Diagnostic for a JSON syntax error reported at a 1-based byte position.
SourceDiagnostic json_syntax_diagnostic(std::string_view text, std::size_t byte,
                                        std::string_view what);

std::string format_number(double value);

}  // namespace quantale::detail
