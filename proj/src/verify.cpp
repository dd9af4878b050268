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

#include "partratio/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "partratio/analytics.hpp"
#include "partratio/error.hpp"
#include "partratio/parallel.hpp"
#include "partratio/random.hpp"

namespace partratio {
namespace {

constexpr std::size_t kGridPoints = 20;

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(count - 1);
  }
  return out;
}

// Finite analysis window: the spec interval, or the last 4 units below
// beta_max when beta_min = -inf.
double window_low(const ProblemSpec& spec) {
  return spec.beta_min().is_finite() ? spec.beta_min().value()
                                     : spec.beta_max() - 4.0;
}

struct Moments {
  double mean = 0.0;
  double std_err = 0.0;
};

Moments mean_and_se(const std::vector<double>& values) {
  Moments m;
  const auto count = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  const double var = values.size() > 1 ? ss / (count - 1.0) : 0.0;
  m.std_err = std::sqrt(var / count);
  return m;
}

std::string fmt_name(const std::string& base, const std::string& key,
                     double value) {
  std::ostringstream out;
  out << base << "(" << key << "=" << value << ")";
  return out.str();
}

}  // namespace

CheckResult exact_check(std::string name, double observed, double bound) {
  return CheckResult{std::move(name), CheckKind::kExact, observed <= bound,
                     observed, bound, std::nullopt, std::nullopt};
}

CheckResult upper_mean_check(std::string name, double observed, double bound,
                             double std_err, std::uint64_t trials) {
  return CheckResult{std::move(name), CheckKind::kStatistical,
                     observed <= bound + 3.0 * std_err, observed, bound,
                     std_err, trials};
}

CheckResult two_sided_check(std::string name, double observed, double expected,
                            double std_err, std::uint64_t trials) {
  return CheckResult{std::move(name), CheckKind::kStatistical,
                     std::abs(observed - expected) <= 3.0 * std_err, observed,
                     expected, std_err, trials};
}

double binomial_two_sided_p(std::uint64_t hits, std::uint64_t trials,
                            double p) {
  if (p <= 0.0) return hits == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return hits == trials ? 1.0 : 0.0;
  const auto n = static_cast<double>(trials);
  const auto log_pmf = [&](std::uint64_t k) {
    const auto kk = static_cast<double>(k);
    return std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) -
           std::lgamma(n - kk + 1.0) + kk * std::log(p) +
           (n - kk) * std::log1p(-p);
  };
  double lower = 0.0;
  double upper = 0.0;
  for (std::uint64_t k = 0; k <= trials; ++k) {
    const double mass = std::exp(log_pmf(k));
    if (k <= hits) lower += mass;
    if (k >= hits) upper += mass;
  }
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

CheckResult binomial_frequency_check(std::string name, std::uint64_t hits,
                                     std::uint64_t trials, double p) {
  const auto n = static_cast<double>(trials);
  const double freq = static_cast<double>(hits) / n;
  const double se = std::sqrt(p * (1.0 - p) / n);
  CheckResult r = two_sided_check(std::move(name), freq, p, se, trials);
  if (n * p * (1.0 - p) < kNormalApproxMinVariance) {
    // Too few expected hits for the normal interval; use the exact tail at
    // the same two-sided level as 3 standard errors.
    r.passed = binomial_two_sided_p(hits, trials, p) >= kThreeSigmaTwoSided;
  }
  return r;
}

bool all_passed(std::span<const CheckResult> results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

double ks_statistic_exponential(std::span<const double> samples) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = sorted[i] <= 0.0 ? 0.0 : -std::expm1(-sorted[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, cdf - below, above - cdf});
  }
  return d;
}

CheckResult ks_exponential(std::span<const double> samples) {
  if (samples.size() < 100) {
    throw ParameterError("KS test needs at least 100 samples");
  }
  const double stat = ks_statistic_exponential(samples);
  const double critical =
      kKsCritical01 / std::sqrt(static_cast<double>(samples.size()));
  return CheckResult{"ks_exponential", CheckKind::kStatistical,
                     stat < critical, stat, critical, std::nullopt,
                     samples.size()};
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> check_analytics_suite(const GrossModel& model,
                                               const ProblemSpec& spec) {
  std::vector<CheckResult> out;
  const double lo = window_low(spec);
  const double hi = spec.beta_max();
  const auto grid = linspace(lo, hi, kGridPoints);

  double worst_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    worst_drop = std::max(worst_drop, mean_energy(model, grid[i]) -
                                          mean_energy(model, grid[i + 1]));
  }
  out.push_back(exact_check("mean_energy_monotone", worst_drop, kExactTolerance));

  // E_{mu_beta}[e^{alpha X}] by direct summation against z(alpha+beta) - z(beta).
  double worst_mgf = 0.0;
  const auto alphas = linspace(-1.0, 1.0, kGridPoints);
  for (double beta : grid) {
    const double z_beta = log_partition(model, beta);
    for (double alpha : alphas) {
      double expectation = 0.0;
      for (const Atom& a : model.atoms()) {
        const double prob = a.c * std::exp(beta * a.x - z_beta);
        expectation += prob * std::exp(alpha * a.x);
      }
      const double rhs = log_partition(model, alpha + beta) - z_beta;
      worst_mgf = std::max(worst_mgf, std::abs(std::log(expectation) - rhs));
    }
  }
  out.push_back(exact_check("mgf_identity", worst_mgf, kExactTolerance));

  // z(-inf, beta) <= 2 z'(beta) whenever z'(beta) <= 1/2. The grid reaches
  // far enough below beta_max that small means actually occur.
  double worst_small_mean = -std::numeric_limits<double>::infinity();
  if (model.has_zero_atom()) {
    for (double beta : linspace(hi - 16.0, hi, kGridPoints)) {
      const double mean = mean_energy(model, beta);
      if (mean > 0.5) continue;
      worst_small_mean =
          std::max(worst_small_mean,
                   log_ratio(model, BetaValue::neg_inf(), beta) - 2.0 * mean);
    }
  }
  // No qualifying beta (or no x = 0 atom) leaves the bound vacuous.
  if (worst_small_mean == -std::numeric_limits<double>::infinity()) {
    worst_small_mean = 0.0;
  }
  out.push_back(
      exact_check("small_mean_bound", worst_small_mean, kExactTolerance));

  double worst_pair = -std::numeric_limits<double>::infinity();
  double min_curvature = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double slope_lo = mean_energy(model, grid[i]);
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double kappa = curvature_pair(model, grid[i], grid[j]);
      min_curvature = std::min(min_curvature, kappa);
      if (!(slope_lo > 0.0)) continue;
      const double slope_hi = mean_energy(model, grid[j]);
      const double factor = std::min(1.0, std::log(slope_hi / slope_lo));
      worst_pair = std::max(
          worst_pair, kappa - log_ratio(model, grid[i], grid[j]) * factor);
    }
  }
  if (worst_pair == -std::numeric_limits<double>::infinity()) worst_pair = 0.0;
  out.push_back(
      exact_check("pair_curvature_bound", worst_pair, kExactTolerance));
  out.push_back(exact_check("curvature_nonnegative", -min_curvature, 1e-12));

  double min_variance = std::numeric_limits<double>::infinity();
  for (double beta : grid) {
    min_variance = std::min(min_variance, variance_energy(model, beta));
  }
  out.push_back(exact_check("variance_nonnegative", -min_variance,
                            kExactTolerance));

  std::vector<double> points(grid.begin(), grid.end());
  const Schedule grid_schedule =
      Schedule::normalized(points, spec.beta_min(), spec.beta_max());
  const ScheduleStats stats = schedule_stats(model, grid_schedule);
  double telescoped = 0.0;
  for (const auto& pair : stats.per_pair) telescoped += pair.gap;
  out.push_back(exact_check("gap_telescoping",
                            std::abs(telescoped - exact_log_q(model, spec)),
                            kExactTolerance));
  return out;
}

// ---------------------------------------------------------------------------

CheckResult check_envelope(const GrossModel& model, const StaticTrace& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& it : trace.iterates) {
    worst = std::max(worst, mean_energy(model, it.beta) - it.envelope);
  }
  return exact_check("static.mean_energy_envelope", worst, kExactTolerance);
}

CheckResult check_max_width(const GrossModel& model, const Schedule& schedule,
                            double theta) {
  const double width = schedule_stats(model, schedule).max_width;
  return exact_check("static.max_width", width, theta + kExactTolerance);
}

CheckResult check_static_length(const ProblemSpec& spec,
                                const Schedule& schedule, double theta) {
  const double ratio = spec.q() / theta;
  const double bound =
      2.0 + ratio + (1.0 + ratio) * std::log(2.0 * spec.n() / theta);
  return exact_check("static.length", static_cast<double>(schedule.len()),
                     bound);
}

CheckResult check_curvature_bound(const GrossModel& model,
                                  const Schedule& schedule, double n) {
  const ScheduleStats stats = schedule_stats(model, schedule);
  const double width = stats.max_width;
  if (width > 1.0) {
    // The bound only covers schedules of max-width at most 1.
    return exact_check("static.curvature_bound", stats.curvature,
                       std::numeric_limits<double>::infinity());
  }
  const double bound =
      width > 0.0 ? 4.0 * width * std::log(n / width) : 0.0;
  return exact_check("static.curvature_bound", stats.curvature,
                     bound + kExactTolerance);
}

std::vector<CheckResult> check_static_suite(const GrossModel& model,
                                            const ProblemSpec& spec,
                                            double theta) {
  check_compatible(model, spec);
  const StaticTrace trace = static_schedule_trace(spec, theta);
  return {check_envelope(model, trace),
          check_max_width(model, trace.schedule, theta),
          check_static_length(spec, trace.schedule, theta),
          check_curvature_bound(model, trace.schedule, spec.n())};
}

// ---------------------------------------------------------------------------

std::vector<double> pooled_tpa_gaps(const GrossModel& model,
                                    const ProblemSpec& spec,
                                    std::uint64_t min_samples,
                                    std::uint64_t seed) {
  // Every step of a run is kept, including the one that crosses beta_min:
  // whether a step happens depends only on earlier gaps, so the pooled
  // empirical law of the gaps is exactly the single-step law.
  //
  // A step to -inf (X = 0) can only happen when c_0 > 0, and then the gap is
  // capped at c = z(-inf, beta_i); the step occurs with probability e^{-c},
  // which is exactly the exponential tail beyond c. Such a gap is censored at
  // c and is completed as c + Exp(1) from a separate stream.
  const OraclePtr oracle = exact_sampler(model);
  std::vector<double> gaps;
  for (std::uint64_t run = 0; gaps.size() < min_samples; ++run) {
    SamplingSession session(oracle, spec);
    const TpaTrace trace = tpa_trace(session, seed, run);
    for (std::size_t i = 0; i + 1 < trace.betas.size(); ++i) {
      const double lower = trace.betas[i + 1];
      if (lower == kNegInf) {
        KeyedStream tail(seed, {Phase::kTpaCensor, run, i});
        gaps.push_back(log_ratio(model, BetaValue::neg_inf(), trace.betas[i]) +
                       tail.exponential());
      } else {
        gaps.push_back(log_ratio(model, lower, trace.betas[i]));
      }
    }
  }
  return gaps;
}

std::vector<CheckResult> mc_tpa_suite(const GrossModel& model,
                                      const ProblemSpec& spec,
                                      std::uint64_t seed,
                                      const TpaSuiteOptions& options) {
  const double log_q = exact_log_q(model, spec);
  std::vector<CheckResult> out;
  const auto gaps = pooled_tpa_gaps(model, spec, options.ks_samples,
                                    derive_seed(seed, 1));
  CheckResult ks = ks_exponential(gaps);
  ks.name = "tpa.gap_exponential_ks";
  out.push_back(ks);

  const OraclePtr oracle = exact_sampler(model);
  std::vector<double> interior(options.union_trials);
  parallel_for(options.union_trials, options.workers, [&](std::size_t t) {
    SamplingSession session(oracle, spec);
    const Schedule s = tpa_union(session, options.union_k,
                                 derive_seed(derive_seed(seed, 2), t));
    interior[t] = static_cast<double>(s.len() - 2);
  });
  const Moments m = mean_and_se(interior);
  out.push_back(two_sided_check(
      fmt_name("tpa.union_interior_count", "k", options.union_k), m.mean,
      options.union_k * log_q, m.std_err, options.union_trials));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> mc_pseudo_tpa_suite(const GrossModel& model,
                                             const ProblemSpec& spec,
                                             double theta, std::uint64_t seed,
                                             const PseudoTpaSuiteOptions& options) {
  check_compatible(model, spec);
  const std::uint64_t trials = options.trials;
  const unsigned d = options.algorithm.subsample_draws;
  const OraclePtr oracle = exact_sampler(model);
  const Schedule coarse = static_schedule(spec, options.algorithm.coarse_theta);

  const double lo = window_low(spec);
  const double hi = spec.beta_max();
  std::vector<double> grid(options.grid_points);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    grid[j] = lo + (hi - lo) * static_cast<double>(j + 1) /
                       static_cast<double>(grid.size() + 1);
  }
  const std::vector<double> tail_levels{0.5, 1.0};

  struct TrialOutcome {
    std::vector<char> included;       // per coarse interior index
    double subsampled_len = 0.0;
    std::vector<double> width;        // w(B'', x) per grid point
    std::vector<double> excess_plus;  // w+(B', x) - w+(B, x)
    std::vector<double> excess_minus;
    bool rounds_ok = false;
    bool samples_ok = false;
  };
  std::vector<TrialOutcome> outcomes(trials);

  parallel_for(trials, options.workers, [&](std::size_t t) {
    SamplingSession session(oracle, spec);
    const PseudoTpaResult r = pseudo_tpa_detailed(
        session, theta, derive_seed(seed, t), options.algorithm);
    TrialOutcome& o = outcomes[t];
    o.included.assign(coarse.len(), 0);
    for (double b : r.subsampled.betas()) {
      const auto it = std::lower_bound(coarse.begin(), coarse.end(), b);
      if (it != coarse.end() && *it == b) o.included[it - coarse.begin()] = 1;
    }
    o.subsampled_len = static_cast<double>(r.subsampled.len());
    for (double x : grid) {
      o.width.push_back(widths(model, r.schedule, x).w);
      const Widths coarse_w = widths(model, coarse, x);
      const Widths sub_w = widths(model, r.subsampled, x);
      o.excess_plus.push_back(sub_w.w_plus - coarse_w.w_plus);
      o.excess_minus.push_back(sub_w.w_minus - coarse_w.w_minus);
    }
    const OracleStats stats = session.stats();
    const std::uint64_t expected_rounds =
        (r.round1_samples > 0 ? 1 : 0) + (r.round2_samples > 0 ? 1 : 0);
    o.rounds_ok = stats.rounds == 2 && expected_rounds == 2;
    o.samples_ok =
        r.round1_samples == std::uint64_t{d} * (coarse.len() - 2) &&
        r.round2_samples == std::uint64_t{r.refine_draws} * r.subsampled.len() &&
        stats.total_samples == r.round1_samples + r.round2_samples;
  });

  std::vector<CheckResult> out;

  // Per-index inclusion frequency against 1 - (Z(b_i)/Z(b_{i+1}))^d.
  for (std::size_t i = 1; i + 1 < coarse.len(); ++i) {
    double hits = 0.0;
    for (const auto& o : outcomes) hits += o.included[i];
    const double p =
        -std::expm1(-static_cast<double>(d) *
                    log_ratio(model, coarse[i], coarse[i + 1]));
    out.push_back(binomial_frequency_check(
        fmt_name("pseudo_tpa.inclusion", "i", static_cast<double>(i)),
        static_cast<std::uint64_t>(hits), trials, p));
  }

  std::vector<double> lens;
  lens.reserve(trials);
  for (const auto& o : outcomes) lens.push_back(o.subsampled_len);
  const Moments len_m = mean_and_se(lens);
  out.push_back(upper_mean_check("pseudo_tpa.subsampled_length", len_m.mean,
                                 d * spec.q() + 2.0, len_m.std_err, trials));

  // Worst grid point (largest standardized excess) for each bound.
  const auto worst_over_grid = [&](const std::string& name, auto value_of,
                                   double bound) {
    CheckResult worst;
    double worst_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::vector<double> values;
      values.reserve(trials);
      for (const auto& o : outcomes) values.push_back(value_of(o, j));
      const Moments m = mean_and_se(values);
      const double score = (m.mean - bound) / std::max(m.std_err, 1e-300);
      if (score > worst_score) {
        worst_score = score;
        worst = upper_mean_check(fmt_name(name, "x", grid[j]), m.mean, bound,
                                 m.std_err, trials);
      }
    }
    return worst;
  };

  out.push_back(worst_over_grid(
      "pseudo_tpa.mean_width",
      [](const TrialOutcome& o, std::size_t j) { return o.width[j]; }, theta));
  // The lower-side tail is not symmetric to the upper one: the run of
  // excluded points below B^-(x) may stop one coarse gap short of s, so the
  // exact probability is only bounded by e^{-d (s - Delta(B))}.
  const double coarse_width = schedule_stats(model, coarse).max_width;
  for (double s : tail_levels) {
    const double bound = std::exp(-static_cast<double>(d) * s);
    const double bound_minus =
        std::exp(-static_cast<double>(d) * std::max(0.0, s - coarse_width));
    out.push_back(worst_over_grid(
        fmt_name("pseudo_tpa.tail_plus", "s", s),
        [s](const TrialOutcome& o, std::size_t j) {
          return o.excess_plus[j] > s ? 1.0 : 0.0;
        },
        bound));
    out.push_back(worst_over_grid(
        fmt_name("pseudo_tpa.tail_minus", "s", s),
        [s](const TrialOutcome& o, std::size_t j) {
          return o.excess_minus[j] > s ? 1.0 : 0.0;
        },
        bound_minus));
  }

  double bad_rounds = 0.0;
  double bad_samples = 0.0;
  for (const auto& o : outcomes) {
    bad_rounds += o.rounds_ok ? 0.0 : 1.0;
    bad_samples += o.samples_ok ? 0.0 : 1.0;
  }
  out.push_back(exact_check("pseudo_tpa.runs_not_two_rounds", bad_rounds, 0.0));
  out.push_back(exact_check("pseudo_tpa.sample_accounting_mismatches",
                            bad_samples, 0.0));
  return out;
}

// ---------------------------------------------------------------------------

CheckResult mc_estimator_success(std::string name, const Pipeline& pipeline,
                                 double exact, double epsilon, double target,
                                 std::uint64_t trials, std::uint64_t seed,
                                 unsigned workers, std::optional<double> floor) {
  std::vector<char> success(trials, 0);
  parallel_for(trials, workers, [&](std::size_t t) {
    try {
      const EstimateReport r = pipeline(derive_seed(seed, t));
      success[t] = std::abs(r.log_q_hat - exact) <= epsilon ? 1 : 0;
    } catch (const Error&) {
      success[t] = 0;
    }
  });
  const auto n = static_cast<double>(trials);
  const double rate =
      static_cast<double>(std::count(success.begin(), success.end(), 1)) / n;
  const double se = std::sqrt(target * (1.0 - target) / n);
  const double threshold = floor ? *floor : target - 3.0 * se;
  return CheckResult{std::move(name), CheckKind::kStatistical,
                     rate >= threshold, rate, floor ? *floor : target, se,
                     trials};
}

std::vector<CheckResult> mc_ppe_suite(const GrossModel& model,
                                      const ProblemSpec& spec,
                                      std::uint64_t seed,
                                      const PpeSuiteOptions& options) {
  const double log_q = exact_log_q(model, spec);
  const OraclePtr oracle = exact_sampler(model);
  const Schedule schedule = static_schedule(spec, options.theta);
  const double kappa = exact_schedule_curvature(model, schedule);
  const std::uint64_t k = ppe_sample_size(kappa, options.epsilon);

  std::vector<CheckResult> out;
  const Pipeline pipeline = [&](std::uint64_t s) {
    SamplingSession session(oracle, spec);
    EstimateReport r;
    r.log_q_hat = ppe(session, schedule, k, s);
    return r;
  };
  out.push_back(mc_estimator_success("ppe.success_rate", pipeline, log_q,
                                     options.epsilon, 0.8,
                                     options.success_trials,
                                     derive_seed(seed, 1), options.workers,
                                     0.78));

  const ExactMoments exact = ppe_exact_moments(model, schedule, options.variance_k);
  out.push_back(exact_check("ppe.moment_telescoping",
                            std::abs(exact.telescoped_log_q - log_q),
                            kExactTolerance));
  out.push_back(exact_check("ppe.relative_variance_bound",
                            exact.relative_variance,
                            exact.relative_variance_bound + 1e-12));

  double log_mean_u = 0.0;
  double log_mean_v = 0.0;
  for (const auto& p : exact.pairs) {
    log_mean_u += p.log_mean_u;
    log_mean_v += p.log_mean_v;
  }
  const std::uint64_t trials = options.variance_trials;
  std::vector<double> ratio_u(trials);
  std::vector<double> ratio_v(trials);
  parallel_for(trials, options.workers, [&](std::size_t t) {
    SamplingSession session(oracle, spec);
    const PpeResult r = ppe_detailed(session, schedule, options.variance_k,
                                     derive_seed(derive_seed(seed, 2), t));
    ratio_u[t] = std::exp(r.log_u - log_mean_u);
    ratio_v[t] = std::exp(r.log_v - log_mean_v);
  });
  const auto variance_check = [&](const std::string& name,
                                   const std::vector<double>& ratios) {
    // Sample variance and its standard error from the fourth central moment.
    const auto n = static_cast<double>(ratios.size());
    const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double r : ratios) {
      const double d2 = (r - mean) * (r - mean);
      m2 += d2;
      m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    const double var = m2 * n / (n - 1.0);
    const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return two_sided_check(name, var, exact.relative_variance, se, trials);
  };
  out.push_back(variance_check("ppe.relative_variance_u", ratio_u));
  out.push_back(variance_check("ppe.relative_variance_v", ratio_v));
  return out;
}

double exact_schedule_curvature(const GrossModel& model,
                                const Schedule& schedule) {
  // Rounding can leave a zero curvature a few ulps below 0.
  return std::max(0.0, schedule_stats(model, schedule).curvature);
}

std::vector<CheckResult> end_to_end_suite(const GrossModel& model,
                                          const ProblemSpec& spec,
                                          std::uint64_t seed,
                                          const EndToEndOptions& options) {
  const double log_q = exact_log_q(model, spec);
  const OraclePtr oracle = exact_sampler(model);
  std::vector<CheckResult> out;

  const Pipeline one_round = [&](std::uint64_t s) {
    return estimate_nonadaptive(oracle, spec, options.epsilon, s);
  };
  out.push_back(mc_estimator_success("nonadaptive.success_rate", one_round,
                                     log_q, options.epsilon, 0.7,
                                     options.nonadaptive_trials,
                                     derive_seed(seed, 1), options.workers));
  {
    // Round budget on a handful of fresh runs.
    double bad = 0.0;
    for (std::uint64_t t = 0; t < 3; ++t) {
      const auto r = one_round(derive_seed(derive_seed(seed, 4), t));
      const std::uint64_t expected = 2 * r.params.k * r.schedule.pairs();
      if (r.stats.rounds != 1 || r.stats.total_samples != expected) bad += 1.0;
    }
    out.push_back(exact_check("nonadaptive.round_budget_violations", bad, 0.0));
  }

  PipelineOptions exact_kappa;
  exact_kappa.kappa_for_schedule = [&](const Schedule& s) {
    return exact_schedule_curvature(model, s);
  };
  const Pipeline three_round = [&](std::uint64_t s) {
    return estimate_three_round(oracle, spec, options.three_round_epsilon, 30.0,
                                s, exact_kappa);
  };
  out.push_back(mc_estimator_success(
      "three_round.success_rate", three_round, log_q,
      options.three_round_epsilon, 0.8, options.three_round_trials,
      derive_seed(seed, 2), options.workers, 0.78));
  {
    double bad = 0.0;
    for (std::uint64_t t = 0; t < 3; ++t) {
      const auto r = three_round(derive_seed(derive_seed(seed, 5), t));
      if (r.stats.rounds != 3) bad += 1.0;
    }
    out.push_back(exact_check("three_round.round_budget_violations", bad, 0.0));
  }

  // Markov step on the curvature of PseudoTPA schedules.
  const double theta = 1.0 / (4.0 * std::log(spec.n()));
  std::vector<double> kappas(options.markov_trials);
  parallel_for(options.markov_trials, options.workers, [&](std::size_t t) {
    SamplingSession session(oracle, spec);
    const Schedule s =
        pseudo_tpa(session, theta, derive_seed(derive_seed(seed, 3), t));
    kappas[t] = exact_schedule_curvature(model, s);
  });
  const Moments km = mean_and_se(kappas);
  out.push_back(upper_mean_check("three_round.mean_curvature", km.mean,
                                 4.0 * theta * std::log(spec.n() / theta),
                                 km.std_err, options.markov_trials));
  const double cap = 10.0 * km.mean;
  const auto n = static_cast<double>(options.markov_trials);
  const double within =
      static_cast<double>(std::count_if(kappas.begin(), kappas.end(),
                                        [cap](double k) { return k <= cap + kExactTolerance; })) /
      n;
  const double se = std::sqrt(0.9 * 0.1 / n);
  out.push_back(CheckResult{"three_round.markov_curvature_cap",
                            CheckKind::kStatistical, within >= 0.9 - 3.0 * se,
                            within, 0.9, se, options.markov_trials});
  return out;
}

}  // namespace partratio
