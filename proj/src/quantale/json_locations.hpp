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

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quantale/scope.hpp"

namespace quantale::detail {

/// Source offsets of values and object keys in a JSON text, addressed by
/// JSON pointer ("/joint/0/prob"). nlohmann::json keeps no positions, so this
/// indexes the text separately. The text must already be known to parse.
class JsonLocationIndex {
 public:
  explicit JsonLocationIndex(std::string_view text);

  /// Location of the value at pointer, or of its nearest indexed ancestor.
  SourceLocation value(const std::string& pointer) const;
  /// Location of the key naming the member at pointer.
  SourceLocation key(const std::string& pointer) const;
  /// Number token exactly as written, or empty.
  std::string_view raw(const std::string& pointer) const;

  SourceLocation at_offset(std::size_t offset) const;
  std::string line_text(std::size_t line) const;

  static std::string escape(std::string_view token);

 private:
  void scan_value(std::size_t& pos, const std::string& pointer);
  void skip_ws(std::size_t& pos) const;
  std::string scan_string(std::size_t& pos) const;

  std::string_view text_;
  std::vector<std::size_t> line_starts_;
  std::map<std::string, std::size_t> values_;
  std::map<std::string, std::size_t> keys_;
  std::map<std::string, std::string_view> raws_;
};

/// Significant digits of a JSON number token (leading zeros excluded).
std::size_t significant_digits(std::string_view number);

}  // namespace quantale::detail
