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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quantale {

enum class QuantifierKind { Some, Every, No, Most, Many, Few, Generic, Custom };

/// Canonical keyword ("some", "every", ...); "custom" for Custom.
const char* keyword(QuantifierKind kind);
/// Accepts the canonical keywords plus "a" as an alias of some.
std::optional<QuantifierKind> parse_quantifier_keyword(std::string_view word);

/// Piecewise-linear description of a quantifier shape on [0,1].
///
/// breakpoints run 0 = b_0 < b_1 < ... < b_k = 1. point_values[i] is the value
/// exactly at b_i; pieces[i] is linear on the open gap (b_i, b_{i+1}), going
/// from pieces[i].left to pieces[i].right. Step functions use constant pieces
/// and pick the endpoint through point_values.
struct ShapeSpec {
  struct Piece {
    double left = 0.0;
    double right = 0.0;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  std::vector<double> breakpoints;
  std::vector<double> point_values;
  std::vector<Piece> pieces;
  double empty_restriction_value = 0.0;

  /// Throws Error(InvalidArgument) when malformed or not valued in [0,1].
  void validate() const;
  double operator()(double ratio) const;
  /// True when every value the shape can take is 0 or 1.
  bool is_precise() const;
  bool is_nondecreasing() const;

  static ShapeSpec for_kind(QuantifierKind kind);

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

/// What a quantifier node carries: its kind and, for Custom, its shape.
class QuantifierShape {
 public:
  static QuantifierShape builtin(QuantifierKind kind);
  static QuantifierShape custom(std::string name, ShapeSpec spec);

  QuantifierKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const ShapeSpec& spec() const { return spec_; }

  bool is_vague() const;
  double value(double ratio) const;
  double empty_restriction_value(double generic_default = 1.0) const;
  /// Breakpoints strictly inside (0,1); ratios are snapped onto these.
  std::vector<double> interior_breakpoints() const;

  friend bool operator==(const QuantifierShape&, const QuantifierShape&) = default;

 private:
  QuantifierShape(QuantifierKind kind, std::string name, ShapeSpec spec)
      : kind_(kind), name_(std::move(name)), spec_(std::move(spec)) {}

  QuantifierKind kind_;
  std::string name_;
  ShapeSpec spec_;
};

bool is_vague(QuantifierKind kind);

/// f_Q for a built-in kind. Throws Error(InvalidArgument) for ratio outside
/// [0,1] or for Custom (use QuantifierShape::value).
double shape_value(QuantifierKind kind, double ratio);

/// Value used when the restriction has no mass: Every, No, Few -> 1;
/// Some, Most, Many -> 0; Generic -> generic_default.
double empty_restriction_value(QuantifierKind kind, double generic_default = 1.0);

/// A threshold interval (lower, upper] of (0,1].
struct ThresholdRegion {
  double lower = 0.0;
  double upper = 1.0;
  double measure() const { return upper - lower; }
  friend bool operator==(const ThresholdRegion&, const ThresholdRegion&) = default;
};

/// Splits (0,1] at the distinct values so that [value >= theta] is constant
/// in theta on each region, for every input value. Zero-width regions are
/// omitted. Throws Error(InvalidArgument) for values outside [0,1].
std::vector<ThresholdRegion> threshold_partition(const std::vector<double>& values);

}  // namespace quantale
