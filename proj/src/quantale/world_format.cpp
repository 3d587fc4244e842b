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
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "quantale/dsl.hpp"
#include "quantale/dsl_detail.hpp"
#include "quantale/error.hpp"
#include "quantale/json_locations.hpp"
#include "quantale/numeric.hpp"

namespace quantale {

using nlohmann::json;

namespace detail {

bool is_identifier(std::string_view word) {
  if (word.empty()) return false;
  const auto first = static_cast<unsigned char>(word.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(word.begin(), word.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '\'';
  });
}

bool is_reserved(std::string_view word) {
  return word == "true" || word == "and" || word == "let" ||
         parse_quantifier_keyword(word).has_value();
}

SourceLocation offset_location(std::string_view text, std::size_t offset) {
  if (text.empty()) return {1, 1};
  // End of input points just past the last character of the last line.
  offset = std::min(offset, text.size());
  if (offset == text.size() && text.back() == '\n') offset = text.size() - 1;
  SourceLocation loc{1, 1};
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

std::string source_line(std::string_view text, std::size_t line) {
  std::size_t start = 0;
  for (std::size_t l = 1; l < line; ++l) {
    start = text.find('\n', start);
    if (start == std::string_view::npos) return {};
    ++start;
  }
  std::size_t end = text.find('\n', start);
  if (end == std::string_view::npos) end = text.size();
  std::string out(text.substr(start, end - start));
  if (!out.empty() && out.back() == '\r') out.pop_back();
  return out;
}

SourceDiagnostic make_diagnostic(std::string_view text, SourceLocation where, std::string message,
                                 Severity severity) {
  return {severity, std::move(message), where.line, where.column, source_line(text, where.line)};
}

SourceDiagnostic json_syntax_diagnostic(std::string_view text, std::size_t byte,
                                        std::string_view what) {
  std::string message(what);
  if (auto pos = message.find("parse error"); pos != std::string::npos) {
    if (auto colon = message.find(": ", pos); colon != std::string::npos)
      message = message.substr(colon + 2);
  }
  const std::size_t offset = byte == 0 ? 0 : byte - 1;
  return make_diagnostic(text, offset_location(text, offset), "JSON syntax error: " + message);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

}  // namespace detail

const char* to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string format_diagnostic(const SourceDiagnostic& d, std::string_view source) {
  std::ostringstream out;
  out << source << ':' << d.line << ':' << d.column << ": " << to_string(d.severity) << ": "
      << d.message << '\n';
  if (!d.snippet.empty()) {
    out << "  " << d.snippet << '\n' << "  " << std::string(d.column - 1, ' ') << "^\n";
  }
  return out.str();
}

std::optional<std::string> read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

constexpr std::size_t kMaxDigits = 15;

class WorldParser {
 public:
  explicit WorldParser(std::string_view text) : text_(text), index_(text) {}

  ParseResult<World> run(const json& doc);

 private:
  void error(SourceLocation where, std::string message) {
    diagnostics_.push_back(detail::make_diagnostic(text_, where, std::move(message)));
  }
  std::string ptr(const std::string& parent, std::string_view token) const {
    return parent + "/" + detail::JsonLocationIndex::escape(token);
  }
  std::string ptr(const std::string& parent, std::size_t i) const {
    return parent + "/" + std::to_string(i);
  }
  std::optional<double> number(const json& v, const std::string& pointer, const std::string& what);
  std::vector<std::string> names(const json& doc, const char* key, bool identifiers);

  std::string_view text_;
  detail::JsonLocationIndex index_;
  std::vector<SourceDiagnostic> diagnostics_;
};

std::optional<double> WorldParser::number(const json& v, const std::string& pointer,
                                          const std::string& what) {
  if (!v.is_number()) {
    error(index_.value(pointer), what + " must be a number");
    return std::nullopt;
  }
  if (detail::significant_digits(index_.raw(pointer)) > kMaxDigits) {
    error(index_.value(pointer), what + " has more than 15 significant digits");
    return std::nullopt;
  }
  return v.get<double>();
}

std::vector<std::string> WorldParser::names(const json& doc, const char* key, bool identifiers) {
  std::vector<std::string> out;
  const std::string pointer = std::string("/") + key;
  const json& arr = doc[key];
  if (!arr.is_array()) {
    error(index_.value(pointer), std::string("'") + key + "' must be an array of strings");
    return out;
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto where = index_.value(ptr(pointer, i));
    if (!arr[i].is_string() || arr[i].get<std::string>().empty()) {
      error(where, std::string("'") + key + "' entries must be non-empty strings");
      continue;
    }
    std::string name = arr[i].get<std::string>();
    if (identifiers && (!detail::is_identifier(name) || detail::is_reserved(name))) {
      error(where, "variable name '" + name + "' is not a usable identifier");
      continue;
    }
    if (!seen.insert(name).second) {
      error(where, std::string("duplicate ") + (identifiers ? "variable" : "pixie") + " '" +
                       name + "'");
      continue;
    }
    out.push_back(std::move(name));
  }
  return out;
}

ParseResult<World> WorldParser::run(const json& doc) {
  ParseResult<World> result;
  if (!doc.is_object()) {
    error(index_.value(""), "a world must be a JSON object");
    result.diagnostics = std::move(diagnostics_);
    return result;
  }
  static const std::set<std::string> allowed{"pixies", "variables", "joint", "predicates"};
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key()))
      error(index_.key(ptr("", item.key())), "unknown key '" + item.key() + "'");
  }
  bool missing = false;
  for (const char* key : {"pixies", "variables", "joint"}) {
    if (doc.contains(key)) continue;
    error(index_.value(""), std::string("missing key '") + key + "'");
    missing = true;
  }
  if (missing) {
    result.diagnostics = std::move(diagnostics_);
    return result;
  }

  const auto pixies = names(doc, "pixies", false);
  const auto variables = names(doc, "variables", true);
  if (pixies.empty() && doc["pixies"].is_array() && doc["pixies"].empty())
    error(index_.value("/pixies"), "'pixies' must not be empty");
  std::map<std::string, PixieId> pixie_ids;
  for (std::size_t i = 0; i < pixies.size(); ++i) pixie_ids[pixies[i]] = static_cast<PixieId>(i);
  std::map<std::string, VarId> var_ids;
  for (std::size_t i = 0; i < variables.size(); ++i) var_ids[variables[i]] = static_cast<VarId>(i);

  std::vector<JointEntry> joint;
  const json& jarr = doc["joint"];
  if (!jarr.is_array() || jarr.empty()) {
    error(index_.value("/joint"), "'joint' must be a non-empty array");
  } else {
    std::set<std::vector<PixieId>> seen;
    KahanSum total;
    bool complete = true;
    for (std::size_t i = 0; i < jarr.size(); ++i) {
      const std::string ep = ptr("/joint", i);
      const json& e = jarr[i];
      if (!e.is_object()) {
        error(index_.value(ep), "joint entries must be objects with 'assign' and 'prob'");
        complete = false;
        continue;
      }
      for (const auto& item : e.items()) {
        if (item.key() != "assign" && item.key() != "prob")
          error(index_.key(ptr(ep, item.key())), "unknown key '" + item.key() + "'");
      }
      if (!e.contains("assign") || !e.contains("prob")) {
        error(index_.value(ep), "joint entry needs 'assign' and 'prob'");
        complete = false;
        continue;
      }
      const auto prob = number(e["prob"], ep + "/prob", "probability");
      if (prob && (!(*prob >= 0.0) || !std::isfinite(*prob)))
        error(index_.value(ep + "/prob"), "probability " + detail::format_number(*prob) +
                                              " is negative");
      const json& assign = e["assign"];
      if (!assign.is_object()) {
        error(index_.value(ep + "/assign"), "'assign' must map variables to pixies");
        complete = false;
        continue;
      }
      JointEntry entry;
      entry.assignment.assign(variables.size(), 0);
      std::vector<bool> assigned(variables.size(), false);
      bool ok = prob.has_value();
      for (const auto& item : assign.items()) {
        const std::string ap = ptr(ep + "/assign", item.key());
        auto var = var_ids.find(item.key());
        if (var == var_ids.end()) {
          error(index_.key(ap), "unknown variable '" + item.key() + "'");
          ok = false;
          continue;
        }
        auto pixie = item.value().is_string() ? pixie_ids.find(item.value().get<std::string>())
                                              : pixie_ids.end();
        if (pixie == pixie_ids.end()) {
          error(index_.value(ap), "variable '" + item.key() + "' is assigned an unknown pixie");
          ok = false;
          continue;
        }
        entry.assignment[var->second] = pixie->second;
        assigned[var->second] = true;
      }
      for (std::size_t v = 0; v < variables.size(); ++v) {
        if (!assigned[v] && var_ids.size() == variables.size()) {
          error(index_.value(ep + "/assign"), "variable '" + variables[v] + "' is not assigned");
          ok = false;
        }
      }
      if (!ok) {
        complete = false;
        continue;
      }
      if (!seen.insert(entry.assignment).second)
        error(index_.value(ep), "duplicate assignment in joint");
      entry.mass = *prob;
      total.add(entry.mass);
      joint.push_back(std::move(entry));
    }
    if (complete && std::abs(total.value() - 1.0) > kMassTolerance)
      error(index_.value("/joint"),
            "joint mass " + detail::format_number(total.value()) + " ≠ 1");
  }

  VagueLexicon lexicon;
  std::vector<std::pair<std::string, std::map<std::string, double>>> predicates;
  if (doc.contains("predicates")) {
    const json& preds = doc["predicates"];
    if (!preds.is_object()) {
      error(index_.value("/predicates"), "'predicates' must be an object");
    } else {
      for (const auto& item : preds.items()) {
        const std::string pp = ptr("/predicates", item.key());
        if (!detail::is_identifier(item.key()) || detail::is_reserved(item.key())) {
          error(index_.key(pp), "predicate name '" + item.key() + "' is not a usable identifier");
          continue;
        }
        if (!item.value().is_object()) {
          error(index_.value(pp), "predicate '" + item.key() + "' must map pixies to numbers");
          continue;
        }
        std::map<std::string, double> entries;
        for (const auto& e : item.value().items()) {
          const std::string vp = ptr(pp, e.key());
          if (!pixie_ids.count(e.key())) {
            error(index_.key(vp), "predicate '" + item.key() + "' mentions unknown pixie '" +
                                      e.key() + "'");
            continue;
          }
          const auto p = number(e.value(), vp, "predicate value");
          if (!p) continue;
          if (!(*p >= 0.0 && *p <= 1.0)) {
            error(index_.value(vp), "predicate '" + item.key() + "' probability " +
                                        detail::format_number(*p) + " at pixie '" + e.key() +
                                        "' outside [0,1]");
            continue;
          }
          entries[e.key()] = *p;
        }
        predicates.emplace_back(item.key(), std::move(entries));
      }
    }
  }

  if (!diagnostics_.empty()) {
    result.diagnostics = std::move(diagnostics_);
    return result;
  }
  try {
    PixieSpace space(pixies);
    for (auto& [name, entries] : predicates)
      add_predicate(lexicon, VaguePredicate(name, space, entries));
    SituationModel model(std::move(space), variables, std::move(joint));
    result.value = World{std::move(model), std::move(lexicon)};
  } catch (const Error& e) {
    error(index_.value(""), e.what());
  }
  result.diagnostics = std::move(diagnostics_);
  return result;
}

}  // namespace

ParseResult<World> parse_world(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ParseResult<World> result;
    result.diagnostics.push_back(detail::json_syntax_diagnostic(text, e.byte, e.what()));
    return result;
  }
  return WorldParser(text).run(doc);
}

std::string serialize_world(const World& world) {
  const auto& model = world.model;
  const auto& space = model.space();
  json doc = json::object();

  std::vector<std::string> pixies = space.elements();
  std::sort(pixies.begin(), pixies.end());
  doc["pixies"] = pixies;
  doc["variables"] = model.variables();

  std::vector<std::pair<std::vector<std::string>, double>> rows;
  for (const auto& e : model.joint()) {
    std::vector<std::string> names;
    for (PixieId p : e.assignment) names.push_back(space.name(p));
    rows.emplace_back(std::move(names), e.mass);
  }
  std::sort(rows.begin(), rows.end());
  json joint = json::array();
  for (const auto& [names, mass] : rows) {
    json assign = json::object();
    for (std::size_t v = 0; v < names.size(); ++v) assign[model.variables()[v]] = names[v];
    joint.push_back({{"assign", assign}, {"prob", mass}});
  }
  doc["joint"] = std::move(joint);

  json preds = json::object();
  for (const auto& [name, pred] : world.lexicon) {
    json entries = json::object();
    for (PixieId p = 0; p < space.size(); ++p) {
      if (pred(p) != 0.0) entries[space.name(p)] = pred(p);
    }
    preds[name] = std::move(entries);
  }
  doc["predicates"] = std::move(preds);
  return doc.dump(2) + "\n";
}

bool structurally_equal(const World& a, const World& b) {
  const auto& sa = a.model.space();
  const auto& sb = b.model.space();
  std::set<std::string> pa(sa.elements().begin(), sa.elements().end());
  std::set<std::string> pb(sb.elements().begin(), sb.elements().end());
  if (pa != pb || a.model.variables() != b.model.variables()) return false;

  auto joint_of = [](const SituationModel& m) {
    std::map<std::vector<std::string>, double> out;
    for (const auto& e : m.joint()) {
      std::vector<std::string> names;
      for (PixieId p : e.assignment) names.push_back(m.space().name(p));
      out[names] = e.mass;
    }
    return out;
  };
  if (joint_of(a.model) != joint_of(b.model)) return false;

  if (a.lexicon.size() != b.lexicon.size()) return false;
  for (const auto& [name, pred] : a.lexicon) {
    auto it = b.lexicon.find(name);
    if (it == b.lexicon.end()) return false;
    for (PixieId p = 0; p < sa.size(); ++p) {
      if (pred(p) != it->second(*sb.find(sa.name(p)))) return false;
    }
  }
  return true;
}

}  // namespace quantale
