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

#include "partratio/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partratio/error.hpp"

namespace partratio {
namespace {

void require_zero_atom(const GrossModel& model) {
  if (!model.has_zero_atom()) {
    throw UndefinedPartitionError(
        "Z(-inf) = c_0 = 0: the model has no x = 0 atom");
  }
}

void require_ordered(BetaValue b1, BetaValue b2) {
  if (b1 > b2) {
    std::ostringstream msg;
    msg << "expected b1 <= b2, got b1=" << b1.to_string()
        << ", b2=" << b2.to_string();
    throw OrderingError(msg.str());
  }
}

// Normalized Gibbs weights at a finite beta, plus the log-sum-exp.
struct Weights {
  std::vector<double> p;
  double log_z = 0.0;
};

Weights gibbs_weights(const GrossModel& model, double beta) {
  const auto& atoms = model.atoms();
  const auto& log_c = model.log_weights();
  Weights w;
  w.p.resize(atoms.size());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    w.p[i] = log_c[i] + beta * atoms[i].x;
    shift = std::max(shift, w.p[i]);
  }
  double total = 0.0;
  for (double& e : w.p) {
    e = std::exp(e - shift);
    total += e;
  }
  for (double& e : w.p) e /= total;
  w.log_z = shift + std::log(total);
  return w;
}

}  // namespace

double log_partition(const GrossModel& model, BetaValue beta) {
  if (beta.is_neg_inf()) {
    require_zero_atom(model);
    return model.log_weights().front();
  }
  return gibbs_weights(model, beta.value()).log_z;
}

double mean_energy(const GrossModel& model, BetaValue beta) {
  if (beta.is_neg_inf()) {
    require_zero_atom(model);
    return 0.0;
  }
  const Weights w = gibbs_weights(model, beta.value());
  double mean = 0.0;
  for (std::size_t i = 0; i < w.p.size(); ++i) {
    mean += w.p[i] * model.atoms()[i].x;
  }
  return mean;
}

double variance_energy(const GrossModel& model, BetaValue beta) {
  if (beta.is_neg_inf()) {
    require_zero_atom(model);
    return 0.0;
  }
  const Weights w = gibbs_weights(model, beta.value());
  double mean = 0.0;
  for (std::size_t i = 0; i < w.p.size(); ++i) {
    mean += w.p[i] * model.atoms()[i].x;
  }
  // Centered second moment; avoids cancellation in E[X^2] - E[X]^2.
  double var = 0.0;
  for (std::size_t i = 0; i < w.p.size(); ++i) {
    const double d = model.atoms()[i].x - mean;
    var += w.p[i] * d * d;
  }
  return var;
}

double log_ratio(const GrossModel& model, BetaValue b1, BetaValue b2) {
  require_ordered(b1, b2);
  if (b1 == b2) return 0.0;
  return log_partition(model, b2) - log_partition(model, b1);
}

double curvature_pair(const GrossModel& model, BetaValue b1, BetaValue b2) {
  require_ordered(b1, b2);
  if (b1 == b2) return 0.0;
  if (b1.is_neg_inf()) return log_ratio(model, b1, b2);
  return log_partition(model, b1) - 2.0 * log_partition(model, midpoint(b1, b2)) +
         log_partition(model, b2);
}

ScheduleStats schedule_stats(const GrossModel& model, const Schedule& schedule) {
  ScheduleStats stats;
  stats.len = schedule.len();
  stats.per_pair.reserve(schedule.pairs());
  std::vector<double> z(schedule.len());
  for (std::size_t i = 0; i < schedule.len(); ++i) {
    z[i] = log_partition(model, schedule[i]);
  }
  for (std::size_t i = 0; i < schedule.pairs(); ++i) {
    PairStats pair;
    pair.gap = z[i + 1] - z[i];
    if (schedule[i] == kNegInf) {
      pair.curvature = pair.gap;
    } else {
      const double mid = 0.5 * (schedule[i] + schedule[i + 1]);
      pair.curvature = z[i] - 2.0 * log_partition(model, mid) + z[i + 1];
    }
    stats.max_width = std::max(stats.max_width, pair.gap);
    stats.curvature += pair.curvature;
    stats.per_pair.push_back(pair);
  }
  return stats;
}

Widths widths(const GrossModel& model, const Schedule& schedule, double x) {
  if (!(x > schedule.front() && x < schedule.back())) {
    std::ostringstream msg;
    msg << "x=" << x << " is outside the open schedule interval";
    throw RangeError(msg.str());
  }
  const auto betas = schedule.betas();
  // Half-open bracketing: x in [b_v, b_{v+1}).
  const auto upper = std::upper_bound(betas.begin(), betas.end(), x);
  const double lo = *(upper - 1);
  const double hi = *upper;
  Widths w;
  w.w_minus = log_ratio(model, lo, x);
  w.w_plus = log_ratio(model, x, hi);
  w.w = w.w_minus + w.w_plus;
  return w;
}

double exact_log_q(const GrossModel& model, const ProblemSpec& spec) {
  check_compatible(model, spec);
  const double log_q = log_ratio(model, spec.beta_min(), spec.beta_max());
  if (log_q > spec.q()) {
    std::ostringstream msg;
    msg << "exact log Q = " << log_q << " exceeds the promised bound q = "
        << spec.q();
    throw InconsistentSpecError(msg.str());
  }
  return log_q;
}

}  // namespace partratio
