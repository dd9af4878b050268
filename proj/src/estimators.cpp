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

#include "partratio/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partratio/analytics.hpp"
#include "partratio/error.hpp"
#include "partratio/parallel.hpp"
#include "partratio/random.hpp"
#include "partratio/schedules.hpp"

namespace partratio {
namespace {

// log((1/k) sum_j exp(e_j)) where e_j = scale * sample_j, with the
// convention scale * 0 = 0 even when scale is infinite. Returns -inf when
// every term vanishes.
double log_mean_exp_scaled(const std::vector<double>& samples, double scale) {
  const auto exponent = [scale](double x) { return x == 0.0 ? 0.0 : scale * x; };
  double shift = -std::numeric_limits<double>::infinity();
  for (double x : samples) shift = std::max(shift, exponent(x));
  if (shift == -std::numeric_limits<double>::infinity()) return shift;
  double total = 0.0;
  for (double x : samples) total += std::exp(exponent(x) - shift);
  return shift + std::log(total) - std::log(static_cast<double>(samples.size()));
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ParameterError("epsilon must be in (0, 1/2)");
  }
}

double default_theta(const ProblemSpec& spec) {
  return 1.0 / (4.0 * std::log(spec.n()));
}

// k for a schedule, honoring the override order of PipelineOptions.
std::uint64_t choose_k(const PipelineOptions& options, const Schedule& schedule,
                       double kappa_cap, double epsilon,
                       std::optional<double>& kappa_used) {
  if (options.k) {
    if (*options.k == 0) throw ParameterError("k must be >= 1");
    kappa_used.reset();
    return *options.k;
  }
  kappa_used = options.kappa_for_schedule ? options.kappa_for_schedule(schedule)
                                          : kappa_cap;
  return ppe_sample_size(*kappa_used, epsilon);
}

EstimateReport finish_report(const std::string& pipeline, double theta,
                             double epsilon, std::uint64_t k,
                             std::optional<double> kappa_used,
                             std::uint64_t seed, double log_q_hat,
                             Schedule schedule, const SamplingSession& session) {
  EstimateReport report;
  report.log_q_hat = log_q_hat;
  report.schedule = std::move(schedule);
  report.stats = session.stats();
  report.params = EstimateParams{pipeline, theta, epsilon, k, kappa_used, seed};
  return report;
}

}  // namespace

PpeResult ppe_detailed(SamplingSession& session, const Schedule& schedule,
                       std::uint64_t k, std::uint64_t seed) {
  if (k == 0) throw ParameterError("PPE needs k >= 1");
  const std::size_t pairs = schedule.pairs();
  BatchRequest request{Phase::kPpe, {}};
  request.items.reserve(2 * pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const BetaValue lo = schedule[i] == kNegInf ? BetaValue::neg_inf()
                                                : BetaValue(schedule[i]);
    request.items.push_back({lo, k, i, 0});
    request.items.push_back({schedule[i + 1], k, i, 1});
  }
  const auto draws = session.execute_batch(request, seed);

  PpeResult result;
  result.log_u_pairs.resize(pairs);
  result.log_v_pairs.resize(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const double half_gap = 0.5 * (schedule[i + 1] - schedule[i]);
    const double log_u = log_mean_exp_scaled(draws[2 * i], half_gap);
    const double log_v = log_mean_exp_scaled(draws[2 * i + 1], -half_gap);
    if (log_v == -std::numeric_limits<double>::infinity()) {
      std::ostringstream msg;
      msg << "V_" << i << " = 0: no x = 0 draw among " << k
          << " samples across the infinite gap to beta=" << schedule[i + 1];
      throw DegenerateEstimateError(i, msg.str());
    }
    result.log_u_pairs[i] = log_u;
    result.log_v_pairs[i] = log_v;
  }
  // Fixed summation order keeps the estimate bitwise reproducible.
  for (std::size_t i = 0; i < pairs; ++i) {
    result.log_u += result.log_u_pairs[i];
    result.log_v += result.log_v_pairs[i];
  }
  result.log_q_hat = result.log_u - result.log_v;
  return result;
}

double ppe(SamplingSession& session, const Schedule& schedule, std::uint64_t k,
           std::uint64_t seed) {
  return ppe_detailed(session, schedule, k, seed).log_q_hat;
}

std::uint64_t ppe_sample_size(double kappa, double epsilon) {
  require_epsilon(epsilon);
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ParameterError("kappa must be a finite value >= 0");
  }
  const double k = std::ceil(100.0 * std::expm1(kappa) / (epsilon * epsilon));
  if (k >= 0x1.0p64) {
    std::ostringstream msg;
    msg << "sample size for kappa=" << kappa << " does not fit in 64 bits";
    throw ParameterError(msg.str());
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

ExactMoments ppe_exact_moments(const GrossModel& model, const Schedule& schedule,
                               std::uint64_t k) {
  if (k == 0) throw ParameterError("k must be >= 1");
  ExactMoments moments;
  moments.pairs.reserve(schedule.pairs());
  const auto z = [&](double beta) {
    return log_partition(model, beta == kNegInf ? BetaValue::neg_inf()
                                                : BetaValue(beta));
  };
  double log_growth = 0.0;
  double total_curvature = 0.0;
  for (std::size_t i = 0; i < schedule.pairs(); ++i) {
    const double lo = schedule[i];
    const double hi = schedule[i + 1];
    const double z_lo = z(lo);
    const double z_hi = z(hi);
    const double z_mid = lo == kNegInf ? z_lo : z(0.5 * (lo + hi));
    PairMoments pair;
    pair.log_mean_u = z_mid - z_lo;
    pair.log_mean_v = z_mid - z_hi;
    pair.curvature = z_lo - 2.0 * z_mid + z_hi;
    log_growth += std::log1p(std::expm1(pair.curvature) / static_cast<double>(k));
    total_curvature += pair.curvature;
    moments.telescoped_log_q += pair.log_mean_u - pair.log_mean_v;
    moments.pairs.push_back(pair);
  }
  moments.relative_variance = std::expm1(log_growth);
  moments.relative_variance_bound =
      std::expm1(total_curvature) / static_cast<double>(k);
  return moments;
}

void EstimateReport::attach_exact(double exact) {
  exact_log_q = exact;
  abs_error = std::abs(log_q_hat - exact);
}

EstimateReport estimate_nonadaptive(OraclePtr oracle, const ProblemSpec& spec,
                                    double epsilon, std::uint64_t seed,
                                    const PipelineOptions& options,
                                    double kappa_cap) {
  require_epsilon(epsilon);
  const double theta = options.theta.value_or(default_theta(spec));
  Schedule schedule = static_schedule(spec, theta);
  std::optional<double> kappa_used;
  const std::uint64_t k =
      choose_k(options, schedule, kappa_cap, epsilon, kappa_used);
  SamplingSession session(std::move(oracle), spec, options.workers);
  const double log_q_hat = ppe(session, schedule, k, seed);
  return finish_report("nonadaptive", theta, epsilon, k, kappa_used, seed,
                       log_q_hat, std::move(schedule), session);
}

EstimateReport estimate_three_round(OraclePtr oracle, const ProblemSpec& spec,
                                    double epsilon, double kappa_cap,
                                    std::uint64_t seed,
                                    const PipelineOptions& options) {
  require_epsilon(epsilon);
  if (!(kappa_cap > 0.0)) throw ParameterError("kappa_cap must be > 0");
  if (!options.k && !options.kappa_for_schedule) {
    ppe_sample_size(kappa_cap, epsilon);  // validate before sampling
  }
  const double theta = options.theta.value_or(default_theta(spec));
  SamplingSession session(std::move(oracle), spec, options.workers);
  Schedule schedule = pseudo_tpa(session, theta, seed);
  std::optional<double> kappa_used;
  const std::uint64_t k =
      choose_k(options, schedule, kappa_cap, epsilon, kappa_used);
  const double log_q_hat = ppe(session, schedule, k, seed);
  return finish_report("three-round", theta, epsilon, k, kappa_used, seed,
                       log_q_hat, std::move(schedule), session);
}

EstimateReport estimate_tpa_baseline(OraclePtr oracle, const ProblemSpec& spec,
                                     double epsilon, double kappa_cap,
                                     std::uint64_t seed,
                                     const PipelineOptions& options) {
  require_epsilon(epsilon);
  if (!(kappa_cap > 0.0)) throw ParameterError("kappa_cap must be > 0");
  if (!options.k && !options.kappa_for_schedule) {
    ppe_sample_size(kappa_cap, epsilon);
  }
  const double theta = options.theta.value_or(default_theta(spec));
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ParameterError("theta must be in (0, 1]");
  }
  const auto runs = static_cast<unsigned>(std::ceil(2.0 / theta));
  SamplingSession session(std::move(oracle), spec, options.workers);
  Schedule schedule = tpa_union(session, runs, seed);
  std::optional<double> kappa_used;
  const std::uint64_t k =
      choose_k(options, schedule, kappa_cap, epsilon, kappa_used);
  const double log_q_hat = ppe(session, schedule, k, seed);
  return finish_report("tpa-baseline", theta, epsilon, k, kappa_used, seed,
                       log_q_hat, std::move(schedule), session);
}

std::uint64_t median_boost_replicas(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must be in (0, 1)");
  }
  return static_cast<std::uint64_t>(std::ceil(18.0 * std::log(1.0 / delta)));
}

EstimateReport median_boost(const Pipeline& pipeline, double delta,
                            std::uint64_t seed, unsigned workers) {
  const std::uint64_t m = median_boost_replicas(delta);
  std::vector<std::optional<EstimateReport>> runs(m);
  std::vector<std::string> errors(m);
  parallel_for(m, workers, [&](std::size_t i) {
    try {
      runs[i] = pipeline(derive_seed(seed, i));
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  BoostSummary summary;
  summary.replicas = m;
  std::vector<std::size_t> ok;
  OracleStats stats;
  for (std::size_t i = 0; i < m; ++i) {
    if (runs[i]) {
      ok.push_back(i);
      stats.merge(runs[i]->stats);
    } else {
      ++summary.failed;
      summary.errors.push_back("replica " + std::to_string(i) + ": " + errors[i]);
    }
  }
  if (ok.empty()) throw Error("median boost: every replica failed");

  std::stable_sort(ok.begin(), ok.end(), [&](std::size_t a, std::size_t b) {
    return runs[a]->log_q_hat < runs[b]->log_q_hat;
  });
  const std::size_t mid = (ok.size() - 1) / 2;
  EstimateReport report = *runs[ok[mid]];
  if (ok.size() % 2 == 0) {
    report.log_q_hat =
        0.5 * (runs[ok[mid]]->log_q_hat + runs[ok[mid + 1]]->log_q_hat);
  }
  report.stats = std::move(stats);
  report.params.pipeline = "median-boost(" + report.params.pipeline + ")";
  report.params.seed = seed;
  report.boost = std::move(summary);
  if (report.exact_log_q) report.attach_exact(*report.exact_log_q);
  return report;
}

}  // namespace partratio
