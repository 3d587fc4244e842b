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
#include "quantale/json_locations.hpp"

#include <algorithm>
#include <cctype>

namespace quantale::detail {

JsonLocationIndex::JsonLocationIndex(std::string_view text) : text_(text) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') line_starts_.push_back(i + 1);
  }
  std::size_t pos = 0;
  skip_ws(pos);
  if (pos < text_.size()) scan_value(pos, "");
}

std::string JsonLocationIndex::escape(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

void JsonLocationIndex::skip_ws(std::size_t& pos) const {
  while (pos < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos]))) ++pos;
}

std::string JsonLocationIndex::scan_string(std::size_t& pos) const {
  // Keys are only used for pointers; escapes other than \" and \\ are kept
  // verbatim, which is enough to tell distinct keys apart.
  std::string out;
  ++pos;
  while (pos < text_.size() && text_[pos] != '"') {
    if (text_[pos] == '\\' && pos + 1 < text_.size()) {
      ++pos;
      if (text_[pos] != '"' && text_[pos] != '\\') out += '\\';
    }
    out += text_[pos++];
  }
  ++pos;
  return out;
}

void JsonLocationIndex::scan_value(std::size_t& pos, const std::string& pointer) {
  values_[pointer] = pos;
  const char c = text_[pos];
  if (c == '{') {
    ++pos;
    skip_ws(pos);
    while (pos < text_.size() && text_[pos] != '}') {
      const std::size_t key_pos = pos;
      const std::string child = pointer + "/" + escape(scan_string(pos));
      keys_[child] = key_pos;
      skip_ws(pos);
      ++pos;  // ':'
      skip_ws(pos);
      scan_value(pos, child);
      skip_ws(pos);
      if (pos < text_.size() && text_[pos] == ',') {
        ++pos;
        skip_ws(pos);
      }
    }
    ++pos;
  } else if (c == '[') {
    ++pos;
    skip_ws(pos);
    std::size_t index = 0;
    while (pos < text_.size() && text_[pos] != ']') {
      scan_value(pos, pointer + "/" + std::to_string(index++));
      skip_ws(pos);
      if (pos < text_.size() && text_[pos] == ',') {
        ++pos;
        skip_ws(pos);
      }
    }
    ++pos;
  } else if (c == '"') {
    scan_string(pos);
  } else {
    const std::size_t start = pos;
    while (pos < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos])) &&
           text_[pos] != ',' && text_[pos] != ']' && text_[pos] != '}')
      ++pos;
    raws_[pointer] = text_.substr(start, pos - start);
  }
}

SourceLocation JsonLocationIndex::value(const std::string& pointer) const {
  std::string p = pointer;
  while (true) {
    if (auto it = values_.find(p); it != values_.end()) return at_offset(it->second);
    if (p.empty()) return {1, 1};
    p.erase(p.rfind('/'));
  }
}

SourceLocation JsonLocationIndex::key(const std::string& pointer) const {
  if (auto it = keys_.find(pointer); it != keys_.end()) return at_offset(it->second);
  return value(pointer);
}

std::string_view JsonLocationIndex::raw(const std::string& pointer) const {
  auto it = raws_.find(pointer);
  return it == raws_.end() ? std::string_view{} : it->second;
}

SourceLocation JsonLocationIndex::at_offset(std::size_t offset) const {
  if (text_.empty()) return {1, 1};
  offset = std::min(offset, text_.size() - 1);
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
  return {line, offset - line_starts_[line - 1] + 1};
}

std::string JsonLocationIndex::line_text(std::size_t line) const {
  if (line == 0 || line > line_starts_.size()) return {};
  const std::size_t start = line_starts_[line - 1];
  std::size_t end = text_.find('\n', start);
  if (end == std::string_view::npos) end = text_.size();
  std::string out(text_.substr(start, end - start));
  if (!out.empty() && out.back() == '\r') out.pop_back();
  return out;
}

std::size_t significant_digits(std::string_view number) {
  std::size_t end = number.find_first_of("eE");
  if (end == std::string_view::npos) end = number.size();
  std::string digits;
  for (char c : number.substr(0, end)) {
    if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
  }
  const std::size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 1;
  digits.erase(0, first);
  if (number.find('.') != std::string_view::npos) return digits.size();
  const std::size_t last = digits.find_last_not_of('0');
  return last + 1;
}

}  // namespace quantale::detail
