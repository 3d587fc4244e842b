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
#include "quantale/quantale.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "quantale/dsl.hpp"
#include "quantale/engine.hpp"
#include "quantale/error.hpp"
#include "quantale/rsa.hpp"

struct qtl_world {
  quantale::World world;
};

struct qtl_prop {
  quantale::ScopeGraph graph;
};

struct qtl_scenario {
  quantale::RsaScenario scenario;
};

struct qtl_result {
  quantale::EvalResult result;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;
thread_local std::vector<quantale::SourceDiagnostic> last_diagnostics;
thread_local std::string last_diagnostics_json = "[]";

void reset() {
  last_error.clear();
  last_diagnostics.clear();
  last_diagnostics_json = "[]";
}

qtl_status fail(qtl_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

void record(const std::vector<quantale::SourceDiagnostic>& diagnostics) {
  last_diagnostics = diagnostics;
  json arr = json::array();
  for (const auto& d : diagnostics) {
    arr.push_back({{"severity", quantale::to_string(d.severity)},
                   {"message", d.message},
                   {"line", d.line},
                   {"column", d.column},
                   {"snippet", d.snippet}});
  }
  last_diagnostics_json = arr.dump();
}

qtl_status status_of(quantale::ErrorCode code) {
  using quantale::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return QTL_ERR_INVALID_ARGUMENT;
    case ErrorCode::UnknownVariable: return QTL_ERR_UNKNOWN_VARIABLE;
    case ErrorCode::ZeroProbabilityCondition: return QTL_ERR_ZERO_PROBABILITY;
    case ErrorCode::ExplosionGuard: return QTL_ERR_EXPLOSION_GUARD;
    case ErrorCode::ValidationFailed: return QTL_ERR_VALIDATION;
    case ErrorCode::CycleDetected: return QTL_ERR_CYCLE;
    case ErrorCode::PreciseQuantifierInFastPath: return QTL_ERR_PRECISE_IN_FAST_PATH;
    case ErrorCode::AllFalse: return QTL_ERR_ALL_FALSE;
    case ErrorCode::NoViableUtterance: return QTL_ERR_NO_VIABLE_UTTERANCE;
    case ErrorCode::Io: return QTL_ERR_IO;
  }
  return QTL_ERR_INTERNAL;
}

template <class F>
qtl_status guarded(F&& body) {
  reset();
  try {
    return body();
  } catch (const quantale::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QTL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QTL_ERR_INTERNAL, e.what());
  }
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

quantale::EvalOptions to_options(const qtl_eval_options* o) {
  qtl_eval_options defaults;
  qtl_eval_options_init(&defaults);
  if (!o) o = &defaults;
  quantale::EvalOptions out;
  out.scheme = o->scheme == QTL_SCHEME_COUPLED_THRESHOLD ? quantale::LiftScheme::CoupledThreshold
                                                         : quantale::LiftScheme::Independent;
  out.samples = o->samples;
  out.seed = o->seed;
  out.max_configurations = o->max_configurations;
  out.max_vague_nodes = o->max_vague_nodes;
  out.threads = o->threads == 0 ? 1 : o->threads;
  out.generic_empty_restriction = o->generic_empty_restriction;
  return out;
}

quantale::EngineKind to_engine(qtl_engine engine) {
  switch (engine) {
    case QTL_ENGINE_NAIVE: return quantale::EngineKind::Naive;
    case QTL_ENGINE_EXACT: return quantale::EngineKind::Exact;
    case QTL_ENGINE_MC: return quantale::EngineKind::MonteCarlo;
    case QTL_ENGINE_GENERIC_FAST: return quantale::EngineKind::GenericFast;
  }
  throw quantale::Error(quantale::ErrorCode::InvalidArgument, "unknown engine");
}

bool has_errors(const std::vector<quantale::SourceDiagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == quantale::Severity::Error) return true;
  }
  return false;
}

qtl_status parse_failure(const char* what, const std::vector<quantale::SourceDiagnostic>& ds) {
  record(ds);
  std::string message = std::string(what) + " has errors";
  if (!ds.empty())
    message += ": " + std::to_string(ds.front().line) + ":" + std::to_string(ds.front().column) +
               ": " + ds.front().message;
  return fail(QTL_ERR_PARSE, message);
}

json distribution_json(const quantale::RsaDistribution& d) {
  return {{"support", d.support}, {"probs", d.probs}};
}

}  // namespace

extern "C" {

void qtl_eval_options_init(qtl_eval_options* options) {
  if (!options) return;
  const quantale::EvalOptions d;
  options->engine = QTL_ENGINE_EXACT;
  options->scheme = QTL_SCHEME_INDEPENDENT;
  options->samples = d.samples;
  options->seed = d.seed;
  options->max_configurations = d.max_configurations;
  options->max_vague_nodes = d.max_vague_nodes;
  options->threads = d.threads;
  options->generic_empty_restriction = d.generic_empty_restriction;
}

const char* qtl_version(void) { return "0.1.0"; }

const char* qtl_status_name(qtl_status status) {
  switch (status) {
    case QTL_OK: return "ok";
    case QTL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case QTL_ERR_PARSE: return "parse";
    case QTL_ERR_VALIDATION: return "validation";
    case QTL_ERR_IO: return "io";
    case QTL_ERR_UNKNOWN_VARIABLE: return "unknown-variable";
    case QTL_ERR_ZERO_PROBABILITY: return "zero-probability-condition";
    case QTL_ERR_EXPLOSION_GUARD: return "explosion-guard";
    case QTL_ERR_CYCLE: return "cycle";
    case QTL_ERR_PRECISE_IN_FAST_PATH: return "precise-quantifier-in-fast-path";
    case QTL_ERR_ALL_FALSE: return "all-false";
    case QTL_ERR_NO_VIABLE_UTTERANCE: return "no-viable-utterance";
    case QTL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* qtl_last_error(void) { return last_error.c_str(); }

const char* qtl_last_diagnostics(void) { return last_diagnostics_json.c_str(); }

char* qtl_last_diagnostics_text(const char* source_name) {
  try {
    std::string out;
    for (const auto& d : last_diagnostics)
      out += quantale::format_diagnostic(d, source_name ? source_name : "<input>");
    return duplicate(out);
  } catch (...) {
    return nullptr;
  }
}

void qtl_string_free(char* text) { std::free(text); }

qtl_status qtl_world_parse(const char* text, size_t length, qtl_world** out) {
  return guarded([&] {
    if (!text || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto parsed = quantale::parse_world(std::string_view(text, length));
    if (!parsed.ok()) return parse_failure("world", parsed.diagnostics);
    record(parsed.diagnostics);
    *out = new qtl_world{std::move(*parsed.value)};
    return QTL_OK;
  });
}

qtl_status qtl_world_load(const char* path, qtl_world** out) {
  return guarded([&] {
    if (!path || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const auto text = quantale::read_text_file(path);
    if (!text) return fail(QTL_ERR_IO, std::string("cannot read '") + path + "'");
    return qtl_world_parse(text->data(), text->size(), out);
  });
}

qtl_status qtl_world_serialize(const qtl_world* world, char** out) {
  return guarded([&] {
    if (!world || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = duplicate(quantale::serialize_world(world->world));
    return QTL_OK;
  });
}

void qtl_world_free(qtl_world* world) { delete world; }

qtl_status qtl_prop_parse(const char* text, size_t length, qtl_prop** out) {
  return guarded([&] {
    if (!text || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto parsed = quantale::parse_prop(std::string_view(text, length));
    if (!parsed.ok() || has_errors(parsed.diagnostics))
      return parse_failure("proposition", parsed.diagnostics);
    record(parsed.diagnostics);
    *out = new qtl_prop{std::move(*parsed.value)};
    return QTL_OK;
  });
}

qtl_status qtl_prop_load(const char* path, qtl_prop** out) {
  return guarded([&] {
    if (!path || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const auto text = quantale::read_text_file(path);
    if (!text) return fail(QTL_ERR_IO, std::string("cannot read '") + path + "'");
    return qtl_prop_parse(text->data(), text->size(), out);
  });
}

qtl_status qtl_prop_serialize(const qtl_prop* prop, char** out) {
  return guarded([&] {
    if (!prop || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = duplicate(quantale::serialize_prop(prop->graph));
    return QTL_OK;
  });
}

void qtl_prop_free(qtl_prop* prop) { delete prop; }

qtl_status qtl_check(const qtl_world* world, const qtl_prop* prop, char** diagnostics) {
  return guarded([&] {
    if (!world || !prop || !diagnostics) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const auto found =
        quantale::validate(prop->graph, world->world.model, world->world.lexicon);
    json arr = json::array();
    for (const auto& d : found) {
      json entry = {{"severity", "error"}, {"code", d.code}, {"message", d.message}};
      if (d.location) {
        entry["line"] = d.location->line;
        entry["column"] = d.location->column;
      }
      arr.push_back(std::move(entry));
    }
    *diagnostics = duplicate(arr.dump(2) + "\n");
    if (found.empty()) return QTL_OK;
    return fail(QTL_ERR_VALIDATION, found.front().message);
  });
}

qtl_status qtl_eval(const qtl_world* world, const qtl_prop* prop, const qtl_eval_options* options,
                    qtl_result** out) {
  return guarded([&] {
    if (!world || !prop || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    qtl_eval_options defaults;
    qtl_eval_options_init(&defaults);
    const qtl_eval_options& o = options ? *options : defaults;
    auto result = quantale::evaluate(to_engine(o.engine), prop->graph, world->world.model,
                                     world->world.lexicon, to_options(&o));
    *out = new qtl_result{std::move(result)};
    return QTL_OK;
  });
}

double qtl_result_probability(const qtl_result* result) {
  return result ? result->result.probability : std::nan("");
}

qtl_status qtl_result_json(const qtl_result* result, char** out) {
  return guarded([&] {
    if (!result || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const auto& r = result->result;
    json doc = {{"probability", r.probability}, {"engine", quantale::to_string(r.engine)}};
    if (r.ci) doc["ci"] = {r.ci->first, r.ci->second};
    if (r.samples) doc["samples"] = *r.samples;
    if (r.seed) doc["seed"] = *r.seed;
    if (r.scheme) doc["scheme"] = quantale::to_string(*r.scheme);
    *out = duplicate(doc.dump(2) + "\n");
    return QTL_OK;
  });
}

void qtl_result_free(qtl_result* result) { delete result; }

qtl_status qtl_compare_generic(const qtl_world* world, const qtl_prop* prop,
                               const qtl_eval_options* options, char** out) {
  return guarded([&] {
    if (!world || !prop || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const auto c = quantale::compare_generic(prop->graph, world->world.model,
                                             world->world.lexicon, to_options(options));
    json doc = {{"exact", c.exact}, {"fast", c.fast}, {"difference", c.difference}};
    *out = duplicate(doc.dump(2) + "\n");
    return QTL_OK;
  });
}

qtl_status qtl_curve_csv(const char* kind, uint32_t points, char** out) {
  return guarded([&] {
    if (!kind || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const auto parsed = quantale::parse_quantifier_keyword(kind);
    if (!parsed) return fail(QTL_ERR_INVALID_ARGUMENT, std::string("unknown quantifier '") + kind + "'");
    if (points < 2) return fail(QTL_ERR_INVALID_ARGUMENT, "a curve needs at least 2 points");
    std::string csv = "ratio,value\n";
    char line[96];
    for (uint32_t i = 0; i < points; ++i) {
      const double ratio = i + 1 == points ? 1.0 : static_cast<double>(i) / (points - 1);
      std::snprintf(line, sizeof line, "%.15g,%.15g\n", ratio,
                    quantale::shape_value(*parsed, ratio));
      csv += line;
    }
    *out = duplicate(csv);
    return QTL_OK;
  });
}

qtl_status qtl_scenario_parse(const char* text, size_t length, const char* base_dir,
                              qtl_scenario** out) {
  return guarded([&] {
    if (!text || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    auto parsed = quantale::parse_scenario(std::string_view(text, length),
                                           base_dir ? base_dir : ".");
    if (!parsed.ok()) return parse_failure("scenario", parsed.diagnostics);
    record(parsed.diagnostics);
    *out = new qtl_scenario{std::move(*parsed.value)};
    return QTL_OK;
  });
}

qtl_status qtl_scenario_load(const char* path, qtl_scenario** out) {
  return guarded([&] {
    if (!path || !out) return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const auto text = quantale::read_text_file(path);
    if (!text) return fail(QTL_ERR_IO, std::string("cannot read '") + path + "'");
    const auto base = std::filesystem::path(path).parent_path();
    return qtl_scenario_parse(text->data(), text->size(),
                              base.empty() ? "." : base.string().c_str(), out);
  });
}

void qtl_scenario_free(qtl_scenario* scenario) { delete scenario; }

qtl_status qtl_rsa(const qtl_scenario* scenario, const char* agent, const char* focus, int verbose,
                   char** out) {
  return guarded([&] {
    if (!scenario || !agent || !focus || !out)
      return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const quantale::RsaModel model(scenario->scenario);
    const std::string which = agent;
    json doc;
    if (which == "l0") doc = distribution_json(model.literal_listener(focus));
    else if (which == "s1") doc = distribution_json(model.pragmatic_speaker(focus));
    else if (which == "l1") doc = distribution_json(model.pragmatic_listener(focus));
    else return fail(QTL_ERR_INVALID_ARGUMENT, "agent must be l0, s1 or l1");
    if (verbose) {
      json states = json::array(), utterances = json::array();
      for (const auto& s : scenario->scenario.states) states.push_back(s.id);
      for (const auto& u : scenario->scenario.utterances) utterances.push_back(u.id);
      doc["meanings"] = {{"states", states}, {"utterances", utterances},
                         {"matrix", model.meanings()}};
    }
    *out = duplicate(doc.dump(2) + "\n");
    return QTL_OK;
  });
}

qtl_status qtl_rsa_reading(const qtl_scenario* scenario, const char* utterance,
                           const double* alphas, size_t count, char** out) {
  return guarded([&] {
    if (!scenario || !utterance || !out || (count && !alphas))
      return fail(QTL_ERR_INVALID_ARGUMENT, "null argument");
    const auto report = quantale::reading_selector(
        scenario->scenario, utterance, std::vector<double>(alphas, alphas + count));
    json doc = {{"posterior", distribution_json(report.posterior)},
                {"expected_value", report.expected_value},
                {"entropy", report.entropy},
                {"mass_at_max", report.mass_at_max},
                {"min_supported_value", report.min_supported_value},
                {"reading", report.reading}};
    json sweep = json::array();
    for (const auto& p : report.sweep)
      sweep.push_back({{"alpha", p.alpha}, {"entropy", p.entropy},
                       {"posterior", distribution_json(p.posterior)}});
    doc["sweep"] = std::move(sweep);
    *out = duplicate(doc.dump(2) + "\n");
    return QTL_OK;
  });
}

}  // extern "C"
