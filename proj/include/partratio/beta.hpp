/* Copyright 2026 The partratio Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PARTRATIO_BETA_HPP_
#define PARTRATIO_BETA_HPP_

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace partratio {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// An inverse temperature: either a finite real or -inf. NaN and +inf are
/// rejected at construction.
class BetaValue {
 public:
  constexpr BetaValue() = default;
  // Implicit on purpose so that literal betas read naturally at call sites.
  BetaValue(double value);  // NOLINT(google-explicit-constructor)

  static constexpr BetaValue neg_inf() { return BetaValue(kNegInf, Unchecked{}); }

  constexpr double value() const { return value_; }
  constexpr bool is_neg_inf() const { return value_ == kNegInf; }
  constexpr bool is_finite() const { return !is_neg_inf(); }

  friend constexpr auto operator<=>(BetaValue a, BetaValue b) {
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(BetaValue a, BetaValue b) {
    return a.value_ == b.value_;
  }

  /// "-inf" or the shortest round-trip decimal form.
  std::string to_string() const;

 private:
  struct Unchecked {};
  constexpr BetaValue(double value, Unchecked) : value_(value) {}

  double value_ = 0.0;
};

/// Midpoint of two betas; the midpoint of (-inf, b) is -inf.
inline BetaValue midpoint(BetaValue a, BetaValue b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return BetaValue::neg_inf();
  return BetaValue(0.5 * (a.value() + b.value()));
}

/// Bounding box of an estimation problem: the interval [beta_min, beta_max],
/// the energy bound n and the promised bound q on log Q.
class ProblemSpec {
 public:
  ProblemSpec(BetaValue beta_min, double beta_max, double n, double q);

  BetaValue beta_min() const { return beta_min_; }
  double beta_max() const { return beta_max_; }
  double n() const { return n_; }
  double q() const { return q_; }

  bool contains(BetaValue beta) const {
    return beta >= beta_min_ && beta.value() <= beta_max_;
  }

 private:
  BetaValue beta_min_;
  double beta_max_;
  double n_;
  double q_;
};

}  // namespace partratio

#endif  // PARTRATIO_BETA_HPP_
