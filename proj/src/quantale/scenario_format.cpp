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
#include <cmath>
#include <set>

#include <json.hpp>

#include "quantale/dsl.hpp"
#include "quantale/dsl_detail.hpp"
#include "quantale/error.hpp"
#include "quantale/json_locations.hpp"
#include "quantale/numeric.hpp"

namespace quantale {

using nlohmann::json;

namespace {

bool is_inline_prop(std::string_view text) {
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return false;
  const char c = text[start];
  return c == '(' || c == '#' || text.substr(start, 4) == "true";
}

class ScenarioParser {
 public:
  ScenarioParser(std::string_view text, std::filesystem::path base)
      : text_(text), index_(text), base_(std::move(base)) {}

  ParseResult<RsaScenario> run(const json& doc);

 private:
  void error(SourceLocation where, std::string message) {
    diagnostics_.push_back(detail::make_diagnostic(text_, where, std::move(message)));
  }
  static std::string ptr(const std::string& parent, std::string_view token) {
    return parent + "/" + detail::JsonLocationIndex::escape(token);
  }
  void check_keys(const json& obj, const std::string& pointer, const std::set<std::string>& keys);
  std::optional<double> number(const json& obj, const std::string& pointer, const char* key);
  std::optional<std::string> string(const json& obj, const std::string& pointer, const char* key);
  std::string nested(const std::string& what, const std::filesystem::path& file,
                     const SourceDiagnostic& d) const;

  std::string_view text_;
  detail::JsonLocationIndex index_;
  std::filesystem::path base_;
  std::vector<SourceDiagnostic> diagnostics_;
};

void ScenarioParser::check_keys(const json& obj, const std::string& pointer,
                                const std::set<std::string>& keys) {
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key()))
      error(index_.key(ptr(pointer, item.key())), "unknown key '" + item.key() + "'");
  }
}

std::optional<double> ScenarioParser::number(const json& obj, const std::string& pointer,
                                             const char* key) {
  const std::string p = ptr(pointer, key);
  if (!obj[key].is_number()) {
    error(index_.value(p), std::string("'") + key + "' must be a number");
    return std::nullopt;
  }
  if (detail::significant_digits(index_.raw(p)) > 15) {
    error(index_.value(p), std::string("'") + key + "' has more than 15 significant digits");
    return std::nullopt;
  }
  return obj[key].get<double>();
}

std::optional<std::string> ScenarioParser::string(const json& obj, const std::string& pointer,
                                                  const char* key) {
  if (!obj.contains(key)) {
    error(index_.value(pointer), std::string("missing key '") + key + "'");
    return std::nullopt;
  }
  if (!obj[key].is_string()) {
    error(index_.value(ptr(pointer, key)), std::string("'") + key + "' must be a string");
    return std::nullopt;
  }
  return obj[key].get<std::string>();
}

std::string ScenarioParser::nested(const std::string& what, const std::filesystem::path& file,
                                   const SourceDiagnostic& d) const {
  return what + ": " + file.generic_string() + ":" + std::to_string(d.line) + ":" +
         std::to_string(d.column) + ": " + d.message;
}

ParseResult<RsaScenario> ScenarioParser::run(const json& doc) {
  ParseResult<RsaScenario> result;
  auto finish = [&]() {
    result.diagnostics = std::move(diagnostics_);
    return result;
  };
  if (!doc.is_object()) {
    error(index_.value(""), "a scenario must be a JSON object");
    return finish();
  }
  check_keys(doc, "", {"states", "utterances", "alpha", "engine", "samples", "seed", "silence"});

  RsaScenario scenario;
  if (doc.contains("alpha")) {
    const json& a = doc["alpha"];
    if (a.is_string() && (a == "inf" || a == "infinity")) {
      scenario.alpha = std::numeric_limits<double>::infinity();
    } else if (auto v = a.is_number() ? number(doc, "", "alpha") : std::nullopt; v && *v > 0.0) {
      scenario.alpha = *v;
    } else {
      error(index_.value("/alpha"), "'alpha' must be a positive number or \"inf\"");
    }
  }
  if (doc.contains("engine")) {
    auto kind = doc["engine"].is_string() ? parse_engine_kind(doc["engine"].get<std::string>())
                                          : std::nullopt;
    if (kind) scenario.engine = *kind;
    else error(index_.value("/engine"), "'engine' must be naive, exact, mc or generic-fast");
  }
  for (const char* key : {"samples", "seed"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_number_unsigned()) {
      error(index_.value(ptr("", key)), std::string("'") + key + "' must be a non-negative integer");
      continue;
    }
    (std::string(key) == "samples" ? scenario.options.samples : scenario.options.seed) =
        doc[key].get<std::uint64_t>();
  }
  bool silence = false;
  if (doc.contains("silence")) {
    if (doc["silence"].is_boolean()) silence = doc["silence"].get<bool>();
    else error(index_.value("/silence"), "'silence' must be true or false");
  }

  // States.
  std::vector<SourceLocation> state_locations;
  if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
    error(index_.value(doc.contains("states") ? "/states" : ""),
          "scenario needs a non-empty 'states' array");
  } else {
    std::set<std::string> ids;
    KahanSum prior_total;
    const json& states = doc["states"];
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string sp = "/states/" + std::to_string(i);
      const json& s = states[i];
      if (!s.is_object()) {
        error(index_.value(sp), "a state must be an object");
        continue;
      }
      check_keys(s, sp, {"id", "prior", "world", "scheme", "value"});
      auto id = string(s, sp, "id");
      auto world_path = string(s, sp, "world");
      double prior = 0.0;
      bool has_prior = false;
      if (!s.contains("prior")) {
        error(index_.value(sp), "missing key 'prior'");
      } else if (auto p = number(s, sp, "prior")) {
        if (*p >= 0.0) {
          prior = *p;
          has_prior = true;
          prior_total.add(prior);
        } else {
          error(index_.value(sp + "/prior"), "prior must be non-negative");
        }
      }
      LiftScheme scheme = LiftScheme::Independent;
      if (s.contains("scheme")) {
        auto parsed = s["scheme"].is_string() ? parse_lift_scheme(s["scheme"].get<std::string>())
                                              : std::nullopt;
        if (parsed) scheme = *parsed;
        else error(index_.value(sp + "/scheme"),
                   "'scheme' must be independent or coupled-threshold");
      }
      std::optional<double> value;
      if (s.contains("value")) value = number(s, sp, "value");
      if (id && !ids.insert(*id).second) error(index_.value(sp + "/id"), "duplicate state id '" + *id + "'");
      if (!id || !world_path || !has_prior) continue;

      const auto file = base_ / *world_path;
      const auto text = read_text_file(file);
      if (!text) {
        error(index_.value(sp + "/world"), "cannot read world file '" + file.generic_string() + "'");
        continue;
      }
      auto world = parse_world(*text);
      for (const auto& d : world.diagnostics)
        error(index_.value(sp + "/world"), nested("state '" + *id + "'", file, d));
      if (!world.ok()) continue;
      scenario.states.push_back(RsaState{*id, prior, std::move(world.value->model),
                                         std::move(world.value->lexicon), scheme, value});
      state_locations.push_back(index_.value(sp));
    }
    if (std::abs(prior_total.value() - 1.0) > kMassTolerance)
      error(index_.value("/states"),
            "state priors sum to " + detail::format_number(prior_total.value()) + ", not 1");
  }

  // Utterances.
  std::vector<SourceLocation> utterance_locations;
  if (!doc.contains("utterances") || !doc["utterances"].is_array() || doc["utterances"].empty()) {
    error(index_.value(doc.contains("utterances") ? "/utterances" : ""),
          "scenario has no utterances");
  } else {
    std::set<std::string> ids;
    const json& utterances = doc["utterances"];
    for (std::size_t i = 0; i < utterances.size(); ++i) {
      const std::string up = "/utterances/" + std::to_string(i);
      const json& u = utterances[i];
      if (!u.is_object()) {
        error(index_.value(up), "an utterance must be an object");
        continue;
      }
      check_keys(u, up, {"id", "prop", "cost"});
      auto id = string(u, up, "id");
      auto prop = string(u, up, "prop");
      double cost = 0.0;
      if (u.contains("cost")) {
        auto c = number(u, up, "cost");
        if (c && *c >= 0.0) cost = *c;
        else if (c) error(index_.value(up + "/cost"), "cost must be non-negative");
      }
      if (id && !ids.insert(*id).second)
        error(index_.value(up + "/id"), "duplicate utterance id '" + *id + "'");
      if (!id || !prop) continue;

      ParseResult<ScopeGraph> graph;
      if (is_inline_prop(*prop)) {
        graph = parse_prop(*prop);
        for (const auto& d : graph.diagnostics) {
          if (d.severity == Severity::Error)
            error(index_.value(up + "/prop"), "utterance '" + *id + "': column " +
                                                  std::to_string(d.column) + ": " + d.message);
        }
      } else {
        const auto file = base_ / *prop;
        const auto text = read_text_file(file);
        if (!text) {
          error(index_.value(up + "/prop"), "cannot read proposition file '" + file.generic_string() + "'");
          continue;
        }
        graph = parse_prop(*text);
        for (const auto& d : graph.diagnostics) {
          if (d.severity == Severity::Error)
            error(index_.value(up + "/prop"), nested("utterance '" + *id + "'", file, d));
        }
      }
      if (!graph.ok()) continue;
      scenario.utterances.push_back(RsaUtterance{*id, std::move(*graph.value), cost});
      utterance_locations.push_back(index_.value(up + "/prop"));
    }
  }
  if (silence) {
    ScopeGraph g;
    g.set_root(g.add_tautology());
    scenario.utterances.push_back(RsaUtterance{"silence", std::move(g), 0.0});
    utterance_locations.push_back(index_.value("/silence"));
  }

  // Cross-validation of every utterance in every state.
  for (std::size_t u = 0; u < scenario.utterances.size(); ++u) {
    for (const auto& s : scenario.states) {
      for (const auto& d : validate(scenario.utterances[u].graph, s.model, s.lexicon))
        error(utterance_locations[u], "utterance '" + scenario.utterances[u].id + "' in state '" +
                                          s.id + "': " + d.message);
    }
  }
  if (diagnostics_.empty()) result.value = std::move(scenario);
  return finish();
}

}  // namespace

ParseResult<RsaScenario> parse_scenario(std::string_view text,
                                        const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ParseResult<RsaScenario> result;
    result.diagnostics.push_back(detail::json_syntax_diagnostic(text, e.byte, e.what()));
    return result;
  }
  return ScenarioParser(text, base_dir).run(doc);
}

}  // namespace quantale
