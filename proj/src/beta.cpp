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

#include "partratio/beta.hpp"

#include <charconv>
#include <cmath>

#include "partratio/error.hpp"

namespace partratio {

BetaValue::BetaValue(double value) : value_(value) {
  if (std::isnan(value)) throw RangeError("beta must not be NaN");
  if (value == std::numeric_limits<double>::infinity()) {
    throw RangeError("beta must not be +inf");
  }
}

std::string BetaValue::to_string() const {
  if (is_neg_inf()) return "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, end);
}

ProblemSpec::ProblemSpec(BetaValue beta_min, double beta_max, double n, double q)
    : beta_min_(beta_min), beta_max_(beta_max), n_(n), q_(q) {
  if (!std::isfinite(beta_max)) {
    throw ParameterError("beta_max must be finite");
  }
  if (!(beta_min.value() < beta_max)) {
    throw ParameterError("beta_min must be smaller than beta_max");
  }
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw ParameterError("n must be a finite real >= 2");
  }
  if (!(q >= 2.0) || !std::isfinite(q)) {
    throw ParameterError("q must be a finite real >= 2");
  }
}

}  // namespace partratio
