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

#ifndef PARTRATIO_ANALYTICS_HPP_
#define PARTRATIO_ANALYTICS_HPP_

#include <vector>

#include "partratio/beta.hpp"
#include "partratio/model.hpp"
#include "partratio/schedule.hpp"

// Exact, sampling-free quantities of a gross model. All partition arithmetic
// stays in log space; Z itself is never formed.

namespace partratio {

/// z(beta) = log Z(beta) by max-shifted log-sum-exp. z(-inf) = log c_0.
double log_partition(const GrossModel& model, BetaValue beta);

/// z'(beta) = E[X] under mu_beta. Zero at -inf.
double mean_energy(const GrossModel& model, BetaValue beta);

/// z''(beta) = Var[X] under mu_beta. Zero at -inf.
double variance_energy(const GrossModel& model, BetaValue beta);

/// z(b1, b2) = z(b2) - z(b1); requires b1 <= b2.
double log_ratio(const GrossModel& model, BetaValue b1, BetaValue b2);

/// kappa(b1, b2) = z(b1) - 2 z((b1 + b2) / 2) + z(b2); requires b1 <= b2.
/// With b1 = -inf the midpoint is -inf and kappa = z(-inf, b2).
double curvature_pair(const GrossModel& model, BetaValue b1, BetaValue b2);

struct PairStats {
  double gap = 0.0;        // z(b_i, b_{i+1})
  double curvature = 0.0;  // kappa(b_i, b_{i+1})
};

struct ScheduleStats {
  std::size_t len = 0;
  double max_width = 0.0;  // Delta(B)
  double curvature = 0.0;  // kappa(B)
  std::vector<PairStats> per_pair;
};

ScheduleStats schedule_stats(const GrossModel& model, const Schedule& schedule);

struct Widths {
  double w_minus = 0.0;  // z(B^-(x), x)
  double w_plus = 0.0;   // z(x, B^+(x))
  double w = 0.0;
};

/// Widths of the schedule interval [b_v, b_{v+1}) that contains x.
/// x must lie strictly inside (beta_min, beta_max) of the schedule.
Widths widths(const GrossModel& model, const Schedule& schedule, double x);

/// Exact log Q = z(beta_min, beta_max). Throws InconsistentSpecError when the
/// model does not fit the spec or log Q > q.
double exact_log_q(const GrossModel& model, const ProblemSpec& spec);

}  // namespace partratio

#endif  // PARTRATIO_ANALYTICS_HPP_
