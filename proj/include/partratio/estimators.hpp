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

#ifndef PARTRATIO_ESTIMATORS_HPP_
#define PARTRATIO_ESTIMATORS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "partratio/model.hpp"
#include "partratio/oracle.hpp"
#include "partratio/schedule.hpp"

namespace partratio {

/// Result of one paired product estimate, with the two telescoping factors
/// kept apart so their fluctuations can be inspected.
struct PpeResult {
  double log_q_hat = 0.0;
  double log_u = 0.0;  // sum_i log U_i
  double log_v = 0.0;  // sum_i log V_i
  std::vector<double> log_u_pairs;
  std::vector<double> log_v_pairs;
};

/// Paired product estimate of log Q over `schedule`, k draws per side per
/// pair, all issued as a single round. Throws DegenerateEstimateError when
/// some V_i is zero.
PpeResult ppe_detailed(SamplingSession& session, const Schedule& schedule,
                       std::uint64_t k, std::uint64_t seed);

double ppe(SamplingSession& session, const Schedule& schedule, std::uint64_t k,
           std::uint64_t seed);

/// ceil(100 (e^kappa - 1) / epsilon^2), at least 1. epsilon must be in
/// (0, 1/2); throws ParameterError if the result does not fit in 64 bits.
std::uint64_t ppe_sample_size(double kappa, double epsilon);

struct PairMoments {
  double log_mean_u = 0.0;  // log E[U_i] = z(b_i, m_i)
  double log_mean_v = 0.0;  // log E[V_i] = -z(m_i, b_{i+1})
  double curvature = 0.0;   // kappa_i
};

struct ExactMoments {
  std::vector<PairMoments> pairs;
  /// Var[U] / E[U]^2 = -1 + prod_i (1 + (e^{kappa_i} - 1) / k).
  double relative_variance = 0.0;
  /// (e^{kappa(B)} - 1) / k, which dominates relative_variance.
  double relative_variance_bound = 0.0;
  /// sum_i (log E[U_i] - log E[V_i]); equals exact log Q.
  double telescoped_log_q = 0.0;
};

ExactMoments ppe_exact_moments(const GrossModel& model, const Schedule& schedule,
                               std::uint64_t k);

// ---------------------------------------------------------------------------
// Pipelines.

struct EstimateParams {
  std::string pipeline;
  double theta = 0.0;
  double epsilon = 0.0;
  std::uint64_t k = 0;
  std::optional<double> kappa_cap;
  std::uint64_t seed = 0;
};

struct BoostSummary {
  std::uint64_t replicas = 0;
  std::uint64_t failed = 0;
  std::vector<std::string> errors;
};

struct EstimateReport {
  double log_q_hat = 0.0;
  Schedule schedule{std::vector<double>{0.0, 1.0}};
  OracleStats stats;
  EstimateParams params;
  std::optional<double> exact_log_q;
  std::optional<double> abs_error;
  std::optional<BoostSummary> boost;

  /// Fills exact_log_q / abs_error.
  void attach_exact(double exact);
};

/// Options shared by the pipelines. Unset fields take the defaults of
/// each pipeline.
struct PipelineOptions {
  std::optional<double> theta;
  /// Fixed per-pair sample count; overrides every kappa rule.
  std::optional<std::uint64_t> k;
  /// Computes the curvature cap from the generated schedule (for instance
  /// its exact kappa when a model is available). Overrides kappa_cap.
  std::function<double(const Schedule&)> kappa_for_schedule;
  unsigned workers = 1;
};

/// Static schedule at theta = 1/(4 ln n) followed by one PPE round with
/// k = ppe_sample_size(kappa_cap, epsilon). One oracle round in total.
EstimateReport estimate_nonadaptive(OraclePtr oracle, const ProblemSpec& spec,
                                    double epsilon, std::uint64_t seed,
                                    const PipelineOptions& options = {},
                                    double kappa_cap = 3.0);

/// PseudoTPA at theta = 1/(4 ln n) (two rounds) followed by one PPE round
/// with k = ppe_sample_size(kappa_cap, epsilon). Three rounds in total.
EstimateReport estimate_three_round(OraclePtr oracle, const ProblemSpec& spec,
                                    double epsilon, double kappa_cap,
                                    std::uint64_t seed,
                                    const PipelineOptions& options = {});

/// Sequential baseline: union of ceil(2 / theta) TPA runs, then PPE.
EstimateReport estimate_tpa_baseline(OraclePtr oracle, const ProblemSpec& spec,
                                     double epsilon, double kappa_cap,
                                     std::uint64_t seed,
                                     const PipelineOptions& options = {});

using Pipeline = std::function<EstimateReport(std::uint64_t seed)>;

/// Number of replicas used for failure probability delta: ceil(18 ln(1/delta)).
std::uint64_t median_boost_replicas(double delta);

/// Runs independent replicas and reports the median log estimate. Replicas
/// that throw are recorded and left out of the median.
EstimateReport median_boost(const Pipeline& pipeline, double delta,
                            std::uint64_t seed, unsigned workers = 1);

}  // namespace partratio

#endif  // PARTRATIO_ESTIMATORS_HPP_
