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

#ifndef PARTRATIO_SCHEDULE_HPP_
#define PARTRATIO_SCHEDULE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "partratio/beta.hpp"

namespace partratio {

/// Betas closer than this are treated as the same schedule point.
inline constexpr double kScheduleMergeTolerance = 1e-12;

/// A cooling schedule beta_min = b_0 < b_1 < ... < b_t = beta_max.
///
/// Only the first point may be -inf. len() is t + 1, so a valid schedule
/// always has at least one adjacent pair.
class Schedule {
 public:
  /// Validates an already sorted, duplicate-free list. Throws ParameterError
  /// if the list is not strictly increasing, has fewer than two points, or
  /// has -inf anywhere but the front.
  explicit Schedule(std::vector<double> betas);

  /// Builds a schedule from an arbitrary bag of points: keeps only values in
  /// [lo, hi], sorts, merges near-duplicates and forces both endpoints in.
  static Schedule normalized(std::vector<double> points, BetaValue lo, double hi);

  std::size_t len() const { return betas_.size(); }
  std::size_t pairs() const { return betas_.size() - 1; }
  double operator[](std::size_t i) const { return betas_[i]; }
  double front() const { return betas_.front(); }
  double back() const { return betas_.back(); }
  std::span<const double> betas() const { return betas_; }
  auto begin() const { return betas_.begin(); }
  auto end() const { return betas_.end(); }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<double> betas_;
};

}  // namespace partratio

#endif  // PARTRATIO_SCHEDULE_HPP_
