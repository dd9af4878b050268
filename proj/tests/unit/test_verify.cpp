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

#include <doctest.h>

#include <cmath>

#include "partratio/analytics.hpp"
#include "partratio/error.hpp"
#include "partratio/io.hpp"
#include "partratio/schedules.hpp"
#include "partratio/verify.hpp"
#include "support/fixtures.hpp"

using namespace partratio;
using partratio::testing::binomial_model;
using partratio::testing::load_fixture;

namespace {

const GrossModel kZero({{0.0, 1.0}}, 4.0);
const GrossModel kTop({{4.0, 1.0}}, 4.0);

bool has_check(const std::vector<CheckResult>& rs, const std::string& prefix) {
  for (const auto& r : rs) {
    if (r.name.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("generic checks") {
  CHECK(exact_check("a", 1.0, 1.0).passed);
  CHECK_FALSE(exact_check("a", 1.0 + 1e-6, 1.0).passed);
  const CheckResult m = upper_mean_check("m", 1.2, 1.0, 0.1, 100);
  CHECK(m.passed);
  CHECK(m.kind == CheckKind::kStatistical);
  CHECK(m.trials == 100u);
  CHECK_FALSE(upper_mean_check("m", 1.31, 1.0, 0.1, 100).passed);
  CHECK(two_sided_check("t", 0.7, 1.0, 0.1, 10).passed);
  CHECK_FALSE(two_sided_check("t", 0.69, 1.0, 0.1, 10).passed);
  CHECK_FALSE(two_sided_check("t", 1.31, 1.0, 0.1, 10).passed);
}

TEST_CASE("ks statistic reference values") {
  const double t = 0.3;
  const double f = -std::expm1(-t);
  const std::vector<double> one{t};
  CHECK(ks_statistic_exponential(one) == doctest::Approx(std::max(f, 1 - f)));
  const std::vector<double> two{0.1, 2.0};
  const double f1 = -std::expm1(-0.1);
  const double f2 = -std::expm1(-2.0);
  CHECK(ks_statistic_exponential(two) ==
        doctest::Approx(std::max({f1, 0.5 - f1, f2 - 0.5, 1 - f2})));
}

TEST_CASE("ks test accepts exponential and rejects constants") {
  KeyedStream rng(31, {Phase::kTest, 0});
  std::vector<double> xs(10000);
  for (double& x : xs) x = rng.exponential();
  const CheckResult ok = ks_exponential(xs);
  CHECK(ok.passed);
  CHECK(ok.bound == doctest::Approx(1.628 / 100.0));
  CHECK_FALSE(ks_exponential(std::vector<double>(10000, 0.5)).passed);
  // Exp(2) is rejected.
  for (double& x : xs) x *= 0.5;
  CHECK_FALSE(ks_exponential(xs).passed);
  CHECK_THROWS_AS(ks_exponential(std::vector<double>(99, 1.0)), ParameterError);
}

TEST_CASE("pooled tpa gaps look exponential on a small budget") {
  const auto f = load_fixture("binomial");
  const auto gaps = pooled_tpa_gaps(f.model, f.spec, 3000, 4);
  CHECK(gaps.size() >= 3000);
  CHECK(ks_exponential(gaps).passed);
  TpaSuiteOptions options;
  options.ks_samples = 2000;
  options.union_trials = 200;
  const auto rs = mc_tpa_suite(f.model, f.spec, 8, options);
  CHECK(has_check(rs, "tpa.gap_exponential_ks"));
  CHECK(all_passed(rs));
}

TEST_CASE("pseudo tpa suite on the zero model") {
  PseudoTpaSuiteOptions options;
  options.trials = 500;
  const auto rs = mc_pseudo_tpa_suite(kZero, ProblemSpec(0, 1, 4, 4), 0.25, 1, options);
  CHECK(has_check(rs, "pseudo_tpa.subsampled_length"));
  for (const auto& r : rs) {
    CAPTURE(r.name);
    CHECK(r.passed);
    if (r.name == "pseudo_tpa.subsampled_length") CHECK(r.observed == 2.0);
  }
}

TEST_CASE("estimator success on a zero-variance model") {
  const ProblemSpec spec(0, 1, 4, 4);
  PipelineOptions options;
  options.k = 2;
  const Pipeline p = [&](std::uint64_t seed) {
    return estimate_nonadaptive(exact_sampler(kTop), spec, 0.2, seed, options);
  };
  const CheckResult r = mc_estimator_success("zero", p, 4.0, 0.2, 0.7, 200, 1);
  CHECK(r.passed);
  CHECK(r.observed == 1.0);
}

TEST_CASE("estimator success counts errors as failures") {
  const Pipeline broken = [](std::uint64_t) -> EstimateReport {
    throw DegenerateEstimateError(0, "x");
  };
  const CheckResult r = mc_estimator_success("broken", broken, 0.0, 0.2, 0.7, 200, 1);
  CHECK_FALSE(r.passed);
  CHECK(r.observed == 0.0);
}

TEST_CASE("tv perturbation smoke test") {
  const auto f = load_fixture("binomial");
  const double exact = exact_log_q(f.model, f.spec);
  const auto run = [&](double delta) {
    const Pipeline p = [&](std::uint64_t seed) {
      PipelineOptions options;
      options.kappa_for_schedule = [&](const Schedule& s) {
        return exact_schedule_curvature(f.model, s);
      };
      OraclePtr oracle = exact_sampler(f.model);
      if (delta > 0) oracle = tv_perturbed_sampler(oracle, delta);
      return estimate_nonadaptive(oracle, f.spec, 0.25, seed, options);
    };
    return mc_estimator_success("tv", p, exact, 0.25, 0.7, 200, 17);
  };
  const CheckResult clean = run(0.0);
  const CheckResult noisy = run(1e-3);
  CHECK(clean.passed);
  CHECK(noisy.passed);
  CHECK(noisy.observed >= clean.observed - 0.05);
}

TEST_CASE("suites are reproducible across worker counts") {
  const auto f = load_fixture("three_atom");
  PseudoTpaSuiteOptions a;
  a.trials = 500;
  a.workers = 1;
  PseudoTpaSuiteOptions b = a;
  b.workers = 4;
  const auto ra = io::checks_to_json(mc_pseudo_tpa_suite(f.model, f.spec, 0.25, 12, a)).dump();
  const auto rb = io::checks_to_json(mc_pseudo_tpa_suite(f.model, f.spec, 0.25, 12, b)).dump();
  CHECK(ra == rb);
}

TEST_CASE("curvature bound check can fail") {
  // Passing an n below the true energy range breaks the bound.
  const GrossModel m({{0.0, 1.0}, {8.0, 1.0}}, 8.0);
  const Schedule s({0.0, 0.1});
  CHECK(check_curvature_bound(m, s, 8.0).passed);
  CHECK_FALSE(check_curvature_bound(m, s, 0.3).passed);
  CHECK(check_curvature_bound(kTop, Schedule({0.0, 1.0}), 4.0).passed);
}

TEST_CASE("binomial frequency check") {
  // Reference values from scipy.stats.binom.
  CHECK(binomial_two_sided_p(2, 2000, 5e-5) == doctest::Approx(0.009353608282361153));
  CHECK(binomial_two_sided_p(0, 100, 0.01) == doctest::Approx(0.7320646825464591));
  CHECK(binomial_two_sided_p(30, 100, 0.2) == doctest::Approx(0.02249795744198316));
  CHECK(binomial_frequency_check("rare", 2, 2000, 5e-5).passed);
  CHECK_FALSE(binomial_frequency_check("rare", 6, 2000, 5e-5).passed);
  CHECK(binomial_frequency_check("common", 1000, 2000, 0.52).passed);
  CHECK_FALSE(binomial_frequency_check("common", 1100, 2000, 0.5).passed);
}
