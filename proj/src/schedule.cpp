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

#include "partratio/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "partratio/error.hpp"

namespace partratio {

Schedule::Schedule(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.size() < 2) {
    throw ParameterError("a schedule needs at least two points");
  }
  for (std::size_t i = 0; i < betas_.size(); ++i) {
    const double b = betas_[i];
    if (std::isnan(b) || b == std::numeric_limits<double>::infinity()) {
      throw ParameterError("schedule points must be finite or -inf");
    }
    if (i > 0 && b == kNegInf) {
      throw ParameterError("only the first schedule point may be -inf");
    }
    if (i > 0 && !(betas_[i - 1] < b)) {
      throw ParameterError("schedule points must be strictly increasing");
    }
  }
}

Schedule Schedule::normalized(std::vector<double> points, BetaValue lo,
                              double hi) {
  std::erase_if(points, [&](double b) {
    return std::isnan(b) || b <= lo.value() || b >= hi;
  });
  std::sort(points.begin(), points.end());
  std::vector<double> out;
  out.reserve(points.size() + 2);
  out.push_back(lo.value());
  for (double b : points) {
    if (b - out.back() > kScheduleMergeTolerance) out.push_back(b);
  }
  if (hi - out.back() <= kScheduleMergeTolerance && out.size() > 1) {
    out.back() = hi;
  } else {
    out.push_back(hi);
  }
  return Schedule(std::move(out));
}

}  // namespace partratio
