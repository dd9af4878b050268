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
#include "partratio/schedules.hpp"
#include "partratio/verify.hpp"
#include "support/fixtures.hpp"

using namespace partratio;
using partratio::testing::all_fixtures;
using partratio::testing::binomial_model;

namespace {

const GrossModel kZero({{0.0, 1.0}}, 4.0);
const GrossModel kTop({{4.0, 1.0}}, 4.0);
const GrossModel kThree({{0.0, 1.0}, {1.0, 1.0}, {4.0, 2.0}}, 4.0);

}  // namespace

TEST_CASE("schedule construction") {
  CHECK_THROWS_AS(Schedule({0.0}), ParameterError);
  CHECK_THROWS_AS(Schedule({0.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(Schedule({1.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(Schedule({0.0, kNegInf}), ParameterError);
  CHECK_NOTHROW(Schedule({kNegInf, 0.0}));
  const Schedule n = Schedule::normalized({0.5, -3.0, 0.5 + 1e-14, 2.0, 0.2}, 0.0, 1.0);
  CHECK(n == Schedule({0.0, 0.2, 0.5, 1.0}));
  const Schedule inf = Schedule::normalized({kNegInf, -5.0}, BetaValue::neg_inf(), 0.0);
  CHECK(inf == Schedule({kNegInf, -5.0, 0.0}));
}

TEST_CASE("static schedule hand trace") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 2.0);
  CHECK(static_schedule(spec, 1.0) == Schedule({0.0, 0.25, 0.5, 0.75, 1.0}));
  const StaticTrace t = static_schedule_trace(spec, 1.0);
  REQUIRE(t.iterates.size() >= 4);
  CHECK(t.iterates[0].envelope == 4.0);
  CHECK(t.iterates[3].envelope == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("static schedule one-step termination") {
  CHECK(static_schedule(ProblemSpec(0.9, 1.0, 4.0, 2.0), 1.0) == Schedule({0.9, 1.0}));
}

TEST_CASE("static schedule from minus infinity") {
  const Schedule s = static_schedule(ProblemSpec(BetaValue::neg_inf(), 0.0, 4.0, 2.0), 0.5);
  CHECK(std::isinf(s.front()));
  CHECK(s.back() == 0.0);
  CHECK(s.len() > 3);
}

TEST_CASE("static schedule rejects bad theta") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 2.0);
  CHECK_THROWS_AS(static_schedule(spec, 0.0), ParameterError);
  CHECK_THROWS_AS(static_schedule(spec, 1.5), ParameterError);
}

TEST_CASE("static suite passes on all fixtures") {
  for (const auto& f : all_fixtures()) {
    for (double theta : {1.0, 0.5, 0.1}) {
      CAPTURE(f.name);
      CAPTURE(theta);
      const auto results = check_static_suite(f.model, f.spec, theta);
      CHECK(results.size() == 4);
      for (const auto& r : results) {
        CAPTURE(r.name);
        CHECK(r.passed);
      }
    }
  }
  const auto top = check_static_suite(kTop, ProblemSpec(0, 1, 4, 4), 1.0);
  CHECK(all_passed(top));
  CHECK(exact_schedule_curvature(kTop, static_schedule(ProblemSpec(0, 1, 4, 4), 1.0)) ==
        doctest::Approx(0.0));
}

TEST_CASE("static checks can fail") {
  const Schedule bad({0.0, 0.9, 1.0});
  CHECK_FALSE(check_max_width(kThree, bad, 1.0).passed);
  std::vector<double> many;
  for (int i = 0; i <= 200; ++i) many.push_back(i / 200.0);
  CHECK_FALSE(check_static_length(ProblemSpec(0, 1, 4, 2), Schedule(many), 1.0).passed);
  // Envelope fails when the model sits above what the spec promises.
  const StaticTrace t = static_schedule_trace(ProblemSpec(0, 1, 2, 2), 1.0);
  CHECK_FALSE(check_envelope(GrossModel({{4.0, 1.0}}, 4.0), t).passed);
}

TEST_CASE("tpa trace with injected eta") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 4.0);
  SamplingSession session(exact_sampler(kTop), spec);
  const std::vector<double> etas{0.5, 3.0, 1.0};
  const TpaTrace t =
      tpa_trace(session, 1, 0, [&](std::uint64_t i) { return etas.at(i); });
  REQUIRE(t.betas.size() == 4);
  CHECK(t.betas[0] == 1.0);
  CHECK(t.betas[1] == doctest::Approx(0.875));
  CHECK(t.betas[2] == doctest::Approx(0.125));
  CHECK(t.betas[3] == doctest::Approx(-0.125));
  CHECK(session.stats().rounds == 3);
  CHECK(session.stats().total_samples == 3);
}

TEST_CASE("tpa on the zero model is trivial") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 4.0);
  SamplingSession session(exact_sampler(kZero), spec);
  CHECK(tpa_run(session, 3) == Schedule({0.0, 1.0}));
  CHECK(tpa_union(session, 5, 3) == Schedule({0.0, 1.0}));
}

TEST_CASE("tpa union of one run equals the run") {
  const ProblemSpec spec(0.0, 1.0, 8.0, 5.07);
  SamplingSession a(exact_sampler(binomial_model()), spec);
  SamplingSession b(exact_sampler(binomial_model()), spec);
  CHECK(tpa_union(a, 1, 42) == tpa_run(b, 42, 0));
}

TEST_CASE("pseudo tpa on the zero model") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 4.0);
  SamplingSession session(exact_sampler(kZero), spec);
  const PseudoTpaResult r = pseudo_tpa_detailed(session, 0.5, 7);
  CHECK(r.schedule == Schedule({0.0, 1.0}));
  CHECK(r.subsampled == Schedule({0.0, 1.0}));
  CHECK(session.stats().rounds == 2);
}

TEST_CASE("pseudo tpa accounting and rounds") {
  const ProblemSpec spec(0.0, 1.0, 4.0, 4.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SamplingSession session(exact_sampler(kThree), spec);
    const PseudoTpaResult r = pseudo_tpa_detailed(session, 0.25, seed);
    const OracleStats s = session.stats();
    CHECK(s.rounds == 2);
    CHECK(r.refine_draws == 32);
    CHECK(r.round1_samples == 2 * (r.coarse.len() - 2));
    CHECK(r.round2_samples == r.refine_draws * r.subsampled.len());
    CHECK(s.total_samples == r.round1_samples + r.round2_samples);
    CHECK(r.schedule.front() == 0.0);
    CHECK(r.schedule.back() == 1.0);
    for (double b : r.subsampled) {
      bool found = false;
      for (double c : r.coarse) found = found || c == b;
      CHECK(found);
    }
  }
  SamplingSession session(exact_sampler(kThree), spec);
  CHECK_THROWS_AS(pseudo_tpa(session, 0.0, 1), ParameterError);
}

TEST_CASE("pseudo tpa is deterministic under parallel workers") {
  const ProblemSpec spec(0.0, 1.0, 8.0, 5.07);
  SamplingSession a(exact_sampler(binomial_model()), spec, 1);
  SamplingSession b(exact_sampler(binomial_model()), spec, 4);
  CHECK(pseudo_tpa(a, 0.2, 77) == pseudo_tpa(b, 0.2, 77));
}

TEST_CASE("lower-side excess tail of the subsampled schedule") {
  // Exact probability that w^-(B', x) exceeds w^-(B, x) + s: every coarse
  // point from B^-(x) down to the first one more than s below it is dropped.
  const GrossModel bin = binomial_model();
  const ProblemSpec spec(0.0, 1.0, 8.0, 5.07);
  const Schedule coarse = static_schedule(spec, 0.25);
  const double x = 1.0 / 3.0;
  const double s = 1.0;
  std::size_t v = 0;
  while (coarse[v + 1] <= x) ++v;
  std::size_t u = v;
  while (u > 1 && log_ratio(bin, coarse[u - 1], coarse[v]) <= s) --u;
  REQUIRE(u > 1);
  const double p = std::exp(-2.0 * log_ratio(bin, coarse[u], coarse[v + 1]));
  // The symmetric bound e^{-2s} does not hold here; e^{-2(s - Delta)} does.
  CHECK(p > std::exp(-2.0 * s));
  CHECK(p <= std::exp(-2.0 * (s - schedule_stats(bin, coarse).max_width)));
}
