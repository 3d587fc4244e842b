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
#include "quantale/quant.hpp"

#include <algorithm>
#include <cmath>

#include "quantale/error.hpp"

namespace quantale {

const char* keyword(QuantifierKind kind) {
  switch (kind) {
    case QuantifierKind::Some: return "some";
    case QuantifierKind::Every: return "every";
    case QuantifierKind::No: return "no";
    case QuantifierKind::Most: return "most";
    case QuantifierKind::Many: return "many";
    case QuantifierKind::Few: return "few";
    case QuantifierKind::Generic: return "generic";
    case QuantifierKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<QuantifierKind> parse_quantifier_keyword(std::string_view word) {
  if (word == "some" || word == "a") return QuantifierKind::Some;
  if (word == "every") return QuantifierKind::Every;
  if (word == "no") return QuantifierKind::No;
  if (word == "most") return QuantifierKind::Most;
  if (word == "many") return QuantifierKind::Many;
  if (word == "few") return QuantifierKind::Few;
  if (word == "generic") return QuantifierKind::Generic;
  return std::nullopt;
}

bool is_vague(QuantifierKind kind) {
  return kind == QuantifierKind::Many || kind == QuantifierKind::Few ||
         kind == QuantifierKind::Generic;
}

namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "ratio " + std::to_string(ratio) + " outside [0,1]");
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }
bool is_bit(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

double shape_value(QuantifierKind kind, double ratio) {
  check_ratio(ratio);
  switch (kind) {
    case QuantifierKind::Some: return ratio > 0.0 ? 1.0 : 0.0;
    case QuantifierKind::Every: return ratio == 1.0 ? 1.0 : 0.0;
    case QuantifierKind::No: return ratio == 0.0 ? 1.0 : 0.0;
    case QuantifierKind::Most: return ratio > 0.5 ? 1.0 : 0.0;
    case QuantifierKind::Many: return ratio;
    case QuantifierKind::Few: return 1.0 - ratio;
    case QuantifierKind::Generic: return ratio;
    case QuantifierKind::Custom: break;
  }
  throw Error(ErrorCode::InvalidArgument, "custom quantifiers need an explicit shape");
}

double empty_restriction_value(QuantifierKind kind, double generic_default) {
  switch (kind) {
    case QuantifierKind::Every:
    case QuantifierKind::No:
    case QuantifierKind::Few: return 1.0;
    case QuantifierKind::Some:
    case QuantifierKind::Most:
    case QuantifierKind::Many: return 0.0;
    case QuantifierKind::Generic: return generic_default;
    case QuantifierKind::Custom: break;
  }
  throw Error(ErrorCode::InvalidArgument, "custom quantifiers carry their own empty-restriction value");
}

void ShapeSpec::validate() const {
  const std::size_t k = breakpoints.size();
  if (k < 2 || breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw Error(ErrorCode::InvalidArgument, "shape breakpoints must run from 0 to 1");
  for (std::size_t i = 1; i < k; ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "shape breakpoints must be strictly increasing");
  }
  if (point_values.size() != k || pieces.size() != k - 1)
    throw Error(ErrorCode::InvalidArgument, "shape needs one value per breakpoint and one piece per gap");
  bool ok = in_unit(empty_restriction_value);
  for (double v : point_values) ok = ok && in_unit(v);
  for (const auto& p : pieces) ok = ok && in_unit(p.left) && in_unit(p.right);
  if (!ok) throw Error(ErrorCode::InvalidArgument, "shape values must lie in [0,1]");
}

double ShapeSpec::operator()(double ratio) const {
  check_ratio(ratio);
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), ratio);
  const auto i = static_cast<std::size_t>(it - breakpoints.begin());
  if (it != breakpoints.end() && *it == ratio) return point_values[i];
  // ratio lies in the open gap (b_{i-1}, b_i)
  const double lo = breakpoints[i - 1];
  const double hi = breakpoints[i];
  const Piece& piece = pieces[i - 1];
  if (piece.left == piece.right) return piece.left;
  const double t = (ratio - lo) / (hi - lo);
  return std::clamp(piece.left + t * (piece.right - piece.left), 0.0, 1.0);
}

bool ShapeSpec::is_precise() const {
  bool ok = is_bit(empty_restriction_value);
  for (double v : point_values) ok = ok && is_bit(v);
  for (const auto& p : pieces) ok = ok && is_bit(p.left) && p.left == p.right;
  return ok;
}

bool ShapeSpec::is_nondecreasing() const {
  // walk the value sequence point, piece.left, piece.right, point, ...
  double last = point_values.front();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (double v : {pieces[i].left, pieces[i].right, point_values[i + 1]}) {
      if (v < last) return false;
      last = v;
    }
  }
  return true;
}

ShapeSpec ShapeSpec::for_kind(QuantifierKind kind) {
  ShapeSpec s;
  s.breakpoints = {0.0, 1.0};
  switch (kind) {
    case QuantifierKind::Some:
      s.point_values = {0.0, 1.0};
      s.pieces = {{1.0, 1.0}};
      break;
    case QuantifierKind::Every:
      s.point_values = {0.0, 1.0};
      s.pieces = {{0.0, 0.0}};
      break;
    case QuantifierKind::No:
      s.point_values = {1.0, 0.0};
      s.pieces = {{0.0, 0.0}};
      break;
    case QuantifierKind::Most:
      s.breakpoints = {0.0, 0.5, 1.0};
      s.point_values = {0.0, 0.0, 1.0};
      s.pieces = {{0.0, 0.0}, {1.0, 1.0}};
      break;
    case QuantifierKind::Many:
    case QuantifierKind::Generic:
      s.point_values = {0.0, 1.0};
      s.pieces = {{0.0, 1.0}};
      break;
    case QuantifierKind::Few:
      s.point_values = {1.0, 0.0};
      s.pieces = {{1.0, 0.0}};
      break;
    case QuantifierKind::Custom:
      throw Error(ErrorCode::InvalidArgument, "custom quantifiers have no built-in shape");
  }
  s.empty_restriction_value = quantale::empty_restriction_value(kind);
  return s;
}

QuantifierShape QuantifierShape::builtin(QuantifierKind kind) {
  return QuantifierShape(kind, keyword(kind), ShapeSpec::for_kind(kind));
}

QuantifierShape QuantifierShape::custom(std::string name, ShapeSpec spec) {
  spec.validate();
  return QuantifierShape(QuantifierKind::Custom, std::move(name), std::move(spec));
}

bool QuantifierShape::is_vague() const {
  return kind_ == QuantifierKind::Custom ? !spec_.is_precise() : quantale::is_vague(kind_);
}

double QuantifierShape::value(double ratio) const {
  return kind_ == QuantifierKind::Custom ? spec_(ratio) : shape_value(kind_, ratio);
}

double QuantifierShape::empty_restriction_value(double generic_default) const {
  return kind_ == QuantifierKind::Custom ? spec_.empty_restriction_value
                                         : quantale::empty_restriction_value(kind_, generic_default);
}

std::vector<double> QuantifierShape::interior_breakpoints() const {
  return {spec_.breakpoints.begin() + 1, spec_.breakpoints.end() - 1};
}

std::vector<ThresholdRegion> threshold_partition(const std::vector<double>& values) {
  std::vector<double> cuts{0.0, 1.0};
  for (double v : values) {
    if (!in_unit(v))
      throw Error(ErrorCode::InvalidArgument, "threshold value " + std::to_string(v) + " outside [0,1]");
    cuts.push_back(v);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<ThresholdRegion> regions;
  regions.reserve(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) regions.push_back({cuts[i], cuts[i + 1]});
  return regions;
}

}  // namespace quantale
