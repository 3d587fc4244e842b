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
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quantale/quantale.h"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kEvalError = 2;

struct Freer {
  void operator()(qtl_world* w) const { qtl_world_free(w); }
  void operator()(qtl_prop* p) const { qtl_prop_free(p); }
  void operator()(qtl_scenario* s) const { qtl_scenario_free(s); }
  void operator()(qtl_result* r) const { qtl_result_free(r); }
  void operator()(char* s) const { qtl_string_free(s); }
};

template <class T>
using Owned = std::unique_ptr<T, Freer>;

struct Config {
  std::string world;
  std::string prop;
  std::string scenario;
  std::string engine = "exact";
  std::string scheme = "independent";
  std::string output = "json";
  std::string curve_output = "csv";
  std::string agent = "l1";
  std::string utterance;
  std::string state;
  std::string kind;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cap_configs;
  std::optional<std::uint32_t> cap_vague_nodes;
  std::vector<double> alphas;
  std::uint32_t points = 11;
  std::uint32_t threads = 1;
  bool verbose = false;
};

int input_or_eval(qtl_status status) {
  switch (status) {
    case QTL_ERR_EXPLOSION_GUARD:
    case QTL_ERR_PRECISE_IN_FAST_PATH:
    case QTL_ERR_ALL_FALSE:
    case QTL_ERR_NO_VIABLE_UTTERANCE:
    case QTL_ERR_ZERO_PROBABILITY:
    case QTL_ERR_INTERNAL:
      return kEvalError;
    default:
      return kInputError;
  }
}

int report(qtl_status status, const std::string& source = {}) {
  if (status == QTL_ERR_PARSE) {
    Owned<char> text(qtl_last_diagnostics_text(source.c_str()));
    if (text) std::cerr << text.get();
  } else {
    std::cerr << "quantale: " << qtl_status_name(status) << ": " << qtl_last_error() << '\n';
  }
  return input_or_eval(status);
}

void print_warnings(const std::string& source) {
  const json diagnostics = json::parse(qtl_last_diagnostics());
  if (diagnostics.empty()) return;
  Owned<char> text(qtl_last_diagnostics_text(source.c_str()));
  if (text) std::cerr << text.get();
}

std::optional<std::uint64_t> env_seed() {
  const char* value = std::getenv("QUANTALE_SEED");
  if (!value || !*value) return std::nullopt;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(value, &end, 10);
  if (*end != '\0') return std::nullopt;
  return parsed;
}

qtl_status load_world(const Config& c, Owned<qtl_world>& out) {
  qtl_world* w = nullptr;
  const qtl_status s = qtl_world_load(c.world.c_str(), &w);
  out.reset(w);
  return s;
}

qtl_status load_prop(const Config& c, Owned<qtl_prop>& out) {
  qtl_prop* p = nullptr;
  const qtl_status s = qtl_prop_load(c.prop.c_str(), &p);
  out.reset(p);
  if (s == QTL_OK) print_warnings(c.prop);
  return s;
}

std::optional<int> build_options(const Config& c, qtl_eval_options& o) {
  qtl_eval_options_init(&o);
  if (c.engine == "naive") o.engine = QTL_ENGINE_NAIVE;
  else if (c.engine == "exact") o.engine = QTL_ENGINE_EXACT;
  else if (c.engine == "mc") o.engine = QTL_ENGINE_MC;
  else if (c.engine == "generic-fast") o.engine = QTL_ENGINE_GENERIC_FAST;
  o.scheme = c.scheme == "coupled-threshold" ? QTL_SCHEME_COUPLED_THRESHOLD : QTL_SCHEME_INDEPENDENT;
  if (c.samples) o.samples = *c.samples;
  const auto seed = c.seed ? c.seed : env_seed();
  if (seed) o.seed = *seed;
  if (o.engine == QTL_ENGINE_MC && !seed) {
    std::cerr << "quantale: the mc engine needs --seed or QUANTALE_SEED\n";
    return kInputError;
  }
  if (o.engine == QTL_ENGINE_MC && o.samples == 0) {
    std::cerr << "quantale: --samples must be positive\n";
    return kInputError;
  }
  if (c.cap_configs) o.max_configurations = *c.cap_configs;
  if (c.cap_vague_nodes) o.max_vague_nodes = *c.cap_vague_nodes;
  o.threads = c.threads;
  return std::nullopt;
}

int load_checked(const Config& c, Owned<qtl_world>& world, Owned<qtl_prop>& prop) {
  if (auto s = load_world(c, world); s != QTL_OK) return report(s, c.world);
  if (auto s = load_prop(c, prop); s != QTL_OK) return report(s, c.prop);
  char* raw = nullptr;
  const qtl_status s = qtl_check(world.get(), prop.get(), &raw);
  Owned<char> diagnostics(raw);
  if (s == QTL_OK) return kOk;
  if (s != QTL_ERR_VALIDATION) return report(s);
  for (const auto& d : json::parse(diagnostics.get())) {
    std::cerr << c.prop;
    if (d.contains("line")) std::cerr << ':' << d["line"] << ':' << d["column"];
    std::cerr << ": error: " << d["message"].get<std::string>() << '\n';
  }
  return kInputError;
}

std::string to_csv(const json& doc) {
  std::string header, row;
  for (const char* key : {"probability", "engine", "scheme", "samples", "seed"}) {
    if (!doc.contains(key)) continue;
    header += std::string(header.empty() ? "" : ",") + key;
    const json& v = doc[key];
    row += (row.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  if (doc.contains("ci")) {
    header += ",ci_low,ci_high";
    row += "," + doc["ci"][0].dump() + "," + doc["ci"][1].dump();
  }
  return header + "\n" + row + "\n";
}

int cmd_eval(const Config& c, bool scheme_given) {
  qtl_eval_options options;
  if (auto code = build_options(c, options)) return *code;
  if (scheme_given && (c.engine == "naive" || c.engine == "generic-fast"))
    std::cerr << "quantale: warning: --scheme is ignored by the " << c.engine << " engine\n";
  Owned<qtl_world> world;
  Owned<qtl_prop> prop;
  if (int code = load_checked(c, world, prop)) return code;
  qtl_result* raw = nullptr;
  if (auto s = qtl_eval(world.get(), prop.get(), &options, &raw); s != QTL_OK) return report(s);
  Owned<qtl_result> result(raw);
  char* text = nullptr;
  if (auto s = qtl_result_json(result.get(), &text); s != QTL_OK) return report(s);
  Owned<char> owned(text);
  if (c.output == "csv") std::cout << to_csv(json::parse(owned.get()));
  else std::cout << owned.get();
  return kOk;
}

int cmd_compare(const Config& c) {
  qtl_eval_options options;
  if (auto code = build_options(c, options)) return *code;
  Owned<qtl_world> world;
  Owned<qtl_prop> prop;
  if (int code = load_checked(c, world, prop)) return code;
  char* text = nullptr;
  if (auto s = qtl_compare_generic(world.get(), prop.get(), &options, &text); s != QTL_OK)
    return report(s);
  Owned<char> owned(text);
  std::cout << owned.get();
  return kOk;
}

int cmd_check(const Config& c) {
  Owned<qtl_world> world;
  Owned<qtl_prop> prop;
  json out = json::array();
  auto add_source = [&](const char* source, const std::string& path) {
    for (auto d : json::parse(qtl_last_diagnostics())) {
      d["source"] = source;
      d["file"] = path;
      d.erase("snippet");
      out.push_back(std::move(d));
    }
  };
  bool failed = false;
  const qtl_status ws = load_world(c, world);
  if (ws == QTL_ERR_PARSE) add_source("world", c.world);
  if (ws != QTL_OK) failed = true, report(ws, c.world);
  const qtl_status ps = load_prop(c, prop);
  if (ps == QTL_ERR_PARSE) add_source("prop", c.prop);
  if (ps != QTL_OK) failed = true, report(ps, c.prop);
  if (!failed) {
    char* raw = nullptr;
    const qtl_status s = qtl_check(world.get(), prop.get(), &raw);
    Owned<char> diagnostics(raw);
    if (s != QTL_OK && s != QTL_ERR_VALIDATION) return report(s);
    for (auto d : json::parse(diagnostics.get())) {
      d["source"] = "prop";
      d["file"] = c.prop;
      std::cerr << c.prop;
      if (d.contains("line")) std::cerr << ':' << d["line"] << ':' << d["column"];
      std::cerr << ": error: " << d["message"].get<std::string>() << '\n';
      out.push_back(std::move(d));
    }
  }
  std::cout << out.dump(2) << '\n';
  return out.empty() && !failed ? kOk : kInputError;
}

int cmd_curve(const Config& c) {
  char* text = nullptr;
  if (auto s = qtl_curve_csv(c.kind.c_str(), c.points, &text); s != QTL_OK) return report(s);
  Owned<char> owned(text);
  if (c.curve_output != "json") {
    std::cout << owned.get();
    return kOk;
  }
  json rows = json::array();
  std::istringstream in(owned.get());
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.push_back({{"ratio", std::stod(line.substr(0, comma))},
                    {"value", std::stod(line.substr(comma + 1))}});
  }
  std::cout << rows.dump(2) << '\n';
  return kOk;
}

int cmd_rsa(const Config& c) {
  qtl_scenario* raw = nullptr;
  if (auto s = qtl_scenario_load(c.scenario.c_str(), &raw); s != QTL_OK)
    return report(s, c.scenario);
  Owned<qtl_scenario> scenario(raw);
  char* text = nullptr;
  qtl_status s;
  if (c.agent == "reading") {
    if (c.utterance.empty()) {
      std::cerr << "quantale: --agent reading needs --utterance\n";
      return kInputError;
    }
    s = qtl_rsa_reading(scenario.get(), c.utterance.c_str(), c.alphas.data(), c.alphas.size(),
                        &text);
  } else {
    const std::string& focus = c.agent == "s1" ? c.state : c.utterance;
    if (focus.empty()) {
      std::cerr << "quantale: --agent " << c.agent << " needs "
                << (c.agent == "s1" ? "--state" : "--utterance") << '\n';
      return kInputError;
    }
    s = qtl_rsa(scenario.get(), c.agent.c_str(), focus.c_str(), c.verbose ? 1 : 0, &text);
  }
  if (s != QTL_OK) return report(s);
  Owned<char> owned(text);
  std::cout << owned.get();
  return kOk;
}

int cmd_fmt(const Config& c) {
  char* text = nullptr;
  qtl_status s;
  if (!c.world.empty()) {
    Owned<qtl_world> world;
    if (s = load_world(c, world); s != QTL_OK) return report(s, c.world);
    s = qtl_world_serialize(world.get(), &text);
  } else if (!c.prop.empty()) {
    Owned<qtl_prop> prop;
    if (s = load_prop(c, prop); s != QTL_OK) return report(s, c.prop);
    s = qtl_prop_serialize(prop.get(), &text);
  } else {
    std::cerr << "quantale: fmt needs --world or --prop\n";
    return kInputError;
  }
  if (s != QTL_OK) return report(s);
  Owned<char> owned(text);
  std::cout << owned.get();
  return kOk;
}

void add_eval_flags(CLI::App* cmd, Config& c) {
  cmd->add_option("--world", c.world, "World file (JSON)")->required();
  cmd->add_option("--prop", c.prop, "Proposition file")->required();
  cmd->add_option("--engine", c.engine, "naive, exact, mc or generic-fast")
      ->check(CLI::IsMember({"naive", "exact", "mc", "generic-fast"}));
  cmd->add_option("--samples", c.samples, "Monte Carlo samples");
  cmd->add_option("--seed", c.seed, "Monte Carlo seed (default: QUANTALE_SEED)");
  cmd->add_option("--cap-configs", c.cap_configs, "Maximum lifted configurations");
  cmd->add_option("--cap-vague-nodes", c.cap_vague_nodes, "Maximum vague quantifier nodes");
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 256u));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic generalized quantifiers over situation models"};
  app.set_version_flag("--version", qtl_version());
  app.require_subcommand(1);
  Config c;

  auto* eval = app.add_subcommand("eval", "Probability that a proposition is true");
  add_eval_flags(eval, c);
  auto* scheme = eval->add_option("--scheme", c.scheme, "independent or coupled-threshold")
                     ->check(CLI::IsMember({"independent", "coupled-threshold"}));
  eval->add_option("--output", c.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* compare = app.add_subcommand("compare", "Exact versus fast-path generic evaluation");
  add_eval_flags(compare, c);
  compare->add_option("--scheme", c.scheme, "independent or coupled-threshold")
      ->check(CLI::IsMember({"independent", "coupled-threshold"}));

  auto* curve = app.add_subcommand("curve", "Quantifier shape as CSV rows ratio,value");
  curve->add_option("kind", c.kind, "some, every, no, most, many, few or generic")->required();
  curve->add_option("--points", c.points, "Number of evenly spaced ratios")
      ->check(CLI::Range(2u, 1000000u));
  curve->add_option("--output", c.curve_output, "csv or json")->check(CLI::IsMember({"json", "csv"}));

  auto* rsa = app.add_subcommand("rsa", "Rational Speech Acts agents over a scenario");
  rsa->add_option("scenario", c.scenario, "Scenario file (JSON)")->required();
  rsa->add_option("--agent", c.agent, "l0, s1, l1 or reading")
      ->check(CLI::IsMember({"l0", "s1", "l1", "reading"}));
  rsa->add_option("--utterance", c.utterance, "Utterance id for l0, l1 and reading");
  rsa->add_option("--state", c.state, "State id for s1");
  rsa->add_option("--alphas", c.alphas, "Alpha values swept by the reading report")
      ->delimiter(',');
  rsa->add_flag("--verbose", c.verbose, "Include the meaning matrix");

  auto* check = app.add_subcommand("check", "Parse and validate; diagnostics as JSON");
  check->add_option("--world", c.world, "World file (JSON)")->required();
  check->add_option("--prop", c.prop, "Proposition file")->required();

  auto* fmt = app.add_subcommand("fmt", "Print the canonical form of a world or proposition");
  auto* fw = fmt->add_option("--world", c.world, "World file (JSON)");
  fmt->add_option("--prop", c.prop, "Proposition file")->excludes(fw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  if (eval->parsed()) return cmd_eval(c, scheme->count() > 0);
  if (compare->parsed()) return cmd_compare(c);
  if (curve->parsed()) return cmd_curve(c);
  if (rsa->parsed()) return cmd_rsa(c);
  if (check->parsed()) return cmd_check(c);
  if (fmt->parsed()) return cmd_fmt(c);
  return kInputError;
}
