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

#ifndef PARTRATIO_SCHEDULES_HPP_
#define PARTRATIO_SCHEDULES_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "partratio/beta.hpp"
#include "partratio/oracle.hpp"
#include "partratio/schedule.hpp"

namespace partratio {

// ---------------------------------------------------------------------------
// Sample-free schedule.

/// One iteration of the descending static construction: the point beta_i and
/// the slope envelope s_i = min{n, q / (beta_max - beta_i)} used to step off it.
struct StaticIterate {
  double beta = 0.0;
  double envelope = 0.0;
};

struct StaticTrace {
  std::vector<StaticIterate> iterates;  // beta_0 = beta_max first
  Schedule schedule;
};

/// Walks down from beta_max in steps theta / s_i and stops once
/// s_i < theta / 2 or the next point would fall below beta_min. The returned
/// schedule has max-width <= theta for every model consistent with `spec`.
/// Throws ParameterError unless theta is in (0, 1].
StaticTrace static_schedule_trace(const ProblemSpec& spec, double theta);

Schedule static_schedule(const ProblemSpec& spec, double theta);

// ---------------------------------------------------------------------------
// Sequential TPA process.

/// Supplies the exponential variates of one TPA run; the argument is the
/// iteration index. Tests use it to replay a fixed sequence.
using EtaSource = std::function<double(std::uint64_t)>;

/// Raw TPA path: betas[0] = beta_max, descending, ending with the first
/// point <= beta_min (kept unclamped, possibly -inf).
struct TpaTrace {
  std::vector<double> betas;
};

/// One TPA execution. Each iteration is its own single-sample round.
TpaTrace tpa_trace(SamplingSession& session, std::uint64_t seed,
                   std::uint64_t run_index = 0, const EtaSource& eta = {});

/// {beta_min} plus every TPA point strictly above beta_min.
Schedule tpa_run(SamplingSession& session, std::uint64_t seed,
                 std::uint64_t run_index = 0);

/// Union of k independent TPA runs.
Schedule tpa_union(SamplingSession& session, unsigned k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Two-round PseudoTPA.

struct PseudoTpaOptions {
  unsigned subsample_draws = 2;  // d
  double coarse_theta = 0.25;    // theta'
};

struct PseudoTpaResult {
  Schedule schedule;    // B''
  Schedule coarse;      // B, the static schedule at coarse_theta
  Schedule subsampled;  // B'
  unsigned refine_draws = 0;  // k = ceil(8 / theta)
  std::uint64_t round1_samples = 0;
  std::uint64_t round2_samples = 0;
};

/// Subsamples the coarse static grid in one round, then refines around every
/// kept point with k local TPA steps in a second round.
/// Throws ParameterError unless theta is in (0, 1].
PseudoTpaResult pseudo_tpa_detailed(SamplingSession& session, double theta,
                                    std::uint64_t seed,
                                    const PseudoTpaOptions& options = {});

Schedule pseudo_tpa(SamplingSession& session, double theta, std::uint64_t seed,
                    const PseudoTpaOptions& options = {});

}  // namespace partratio

#endif  // PARTRATIO_SCHEDULES_HPP_
