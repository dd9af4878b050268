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

#ifndef PARTRATIO_VERIFY_HPP_
#define PARTRATIO_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partratio/estimators.hpp"
#include "partratio/model.hpp"
#include "partratio/schedules.hpp"

namespace partratio {

/// Absolute slack for exact analytic identities in log space.
inline constexpr double kExactTolerance = 1e-9;
/// Asymptotic one-sample Kolmogorov-Smirnov critical value at alpha = 0.01.
inline constexpr double kKsCritical01 = 1.628;

enum class CheckKind { kExact, kStatistical };

/// Outcome of one verification check. Exact checks fold their tolerance into
/// `bound`; statistical checks also carry the standard error and trial count
/// so a failure can be audited.
struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::kExact;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  std::optional<double> std_err;
  std::optional<std::uint64_t> trials;
};

CheckResult exact_check(std::string name, double observed, double bound);
/// Passes iff observed <= bound + 3 * std_err.
CheckResult upper_mean_check(std::string name, double observed, double bound,
                             double std_err, std::uint64_t trials);
/// Passes iff |observed - expected| <= 3 * std_err.
CheckResult two_sided_check(std::string name, double observed, double expected,
                            double std_err, std::uint64_t trials);

// Frequency `hits / trials` against probability p. Uses the normal 3 SE
// interval when n p (1 - p) >= kNormalApproxMinVariance, else the exact
// binomial tail at the matching level.
inline constexpr double kNormalApproxMinVariance = 9.0;
inline constexpr double kThreeSigmaTwoSided = 0.0026997960632601866;
double binomial_two_sided_p(std::uint64_t hits, std::uint64_t trials, double p);
CheckResult binomial_frequency_check(std::string name, std::uint64_t hits,
                                     std::uint64_t trials, double p);

bool all_passed(std::span<const CheckResult> results);

// ---------------------------------------------------------------------------
// Goodness of fit.

/// Kolmogorov-Smirnov statistic of `samples` against the Exp(1) CDF.
double ks_statistic_exponential(std::span<const double> samples);

/// One-sample KS test against Exp(1) at alpha = 0.01. observed is the KS
/// statistic and bound is 1.628 / sqrt(N). Needs at least 100 samples.
CheckResult ks_exponential(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Exact analytic checks on a model.

/// Mean-energy monotonicity, the moment-generating identity, the small-mean
/// bound on z(-inf, beta), the curvature bound of a pair, z'' >= 0 and
/// telescoping of schedule gaps, each over a 20-point beta grid.
std::vector<CheckResult> check_analytics_suite(const GrossModel& model,
                                               const ProblemSpec& spec);

// ---------------------------------------------------------------------------
// Exact schedule checks.

/// max_i (z'(beta_i) - s_i) <= 1e-9 over the static iterates.
CheckResult check_envelope(const GrossModel& model, const StaticTrace& trace);
/// Delta(B) <= theta.
CheckResult check_max_width(const GrossModel& model, const Schedule& schedule,
                            double theta);
/// len(B) <= 2 + q/theta + (1 + q/theta) ln(2n/theta).
CheckResult check_static_length(const ProblemSpec& spec,
                                const Schedule& schedule, double theta);
/// kappa(B) <= 4 Delta ln(n / Delta) when Delta(B) <= 1.
CheckResult check_curvature_bound(const GrossModel& model,
                                  const Schedule& schedule, double n);

std::vector<CheckResult> check_static_suite(const GrossModel& model,
                                            const ProblemSpec& spec,
                                            double theta);

// ---------------------------------------------------------------------------
// Monte Carlo suites.

struct TpaSuiteOptions {
  std::uint64_t ks_samples = 10000;  // pooled gaps
  unsigned union_k = 8;
  std::uint64_t union_trials = 1000;
  unsigned workers = 1;
};

/// Pooled TPA z-gaps against Exp(1), and the mean interior point count of
/// TPA(k) against k log Q.
std::vector<CheckResult> mc_tpa_suite(const GrossModel& model,
                                      const ProblemSpec& spec,
                                      std::uint64_t seed,
                                      const TpaSuiteOptions& options = {});

/// Pooled z-gaps of TPA runs, including the crossing step of each run.
std::vector<double> pooled_tpa_gaps(const GrossModel& model,
                                    const ProblemSpec& spec,
                                    std::uint64_t min_samples,
                                    std::uint64_t seed);

struct PseudoTpaSuiteOptions {
  std::uint64_t trials = 2000;
  std::size_t grid_points = 20;
  PseudoTpaOptions algorithm;
  unsigned workers = 1;
};

/// Inclusion probabilities of the subsampling round, mean length of B',
/// tail bounds on w+(B', x), mean width of the final schedule on a grid, and
/// round/sample accounting.
std::vector<CheckResult> mc_pseudo_tpa_suite(
    const GrossModel& model, const ProblemSpec& spec, double theta,
    std::uint64_t seed, const PseudoTpaSuiteOptions& options = {});

/// Success fraction |log Q_hat - log Q| <= epsilon over `trials` runs of
/// `pipeline`, passing iff it is >= target - 3 sqrt(target (1 - target) /
/// trials), or >= `floor` when one is given. Replica errors count as
/// failures.
CheckResult mc_estimator_success(std::string name, const Pipeline& pipeline,
                                 double exact_log_q, double epsilon,
                                 double target, std::uint64_t trials,
                                 std::uint64_t seed, unsigned workers = 1,
                                 std::optional<double> floor = std::nullopt);

struct PpeSuiteOptions {
  double theta = 0.5;
  double epsilon = 0.2;
  std::uint64_t success_trials = 500;
  std::uint64_t variance_k = 4;
  std::uint64_t variance_trials = 4000;
  unsigned workers = 1;
};

/// Success rate at the curvature-derived k, relative variance of prod U_i
/// against its exact value, and telescoping of the exact moments.
std::vector<CheckResult> mc_ppe_suite(const GrossModel& model,
                                      const ProblemSpec& spec,
                                      std::uint64_t seed,
                                      const PpeSuiteOptions& options = {});

struct EndToEndOptions {
  double epsilon = 0.25;
  std::uint64_t nonadaptive_trials = 200;
  std::uint64_t three_round_trials = 500;
  double three_round_epsilon = 0.2;
  std::uint64_t markov_trials = 1000;
  unsigned workers = 1;
};

/// The one-round pipeline at its default constants, the three-round
/// pipeline with k from each schedule's exact curvature, and the Markov step
/// on the curvature of PseudoTPA schedules.
std::vector<CheckResult> end_to_end_suite(const GrossModel& model,
                                          const ProblemSpec& spec,
                                          std::uint64_t seed,
                                          const EndToEndOptions& options = {});

/// Exact curvature kappa(B) of a schedule; convenience for kappa rules.
double exact_schedule_curvature(const GrossModel& model,
                                const Schedule& schedule);

}  // namespace partratio

#endif  // PARTRATIO_VERIFY_HPP_
