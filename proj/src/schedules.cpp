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

#include "partratio/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "partratio/error.hpp"

namespace partratio {
namespace {

void require_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ParameterError("theta must be in (0, 1]");
  }
}

// Guards against specs whose static schedule could never fit in memory.
constexpr std::size_t kMaxStaticIterations = 50'000'000;

}  // namespace

StaticTrace static_schedule_trace(const ProblemSpec& spec, double theta) {
  require_theta(theta);
  const double beta_max = spec.beta_max();
  const double beta_min = spec.beta_min().value();
  std::vector<StaticIterate> iterates;
  double beta = beta_max;
  for (;;) {
    const double span = beta_max - beta;
    const double envelope = span > 0.0 ? std::min(spec.n(), spec.q() / span)
                                       : spec.n();
    iterates.push_back({beta, envelope});
    const double next = beta - theta / envelope;
    if (envelope < theta / 2.0 || next < beta_min) break;
    if (iterates.size() >= kMaxStaticIterations) {
      throw ParameterError("static schedule exceeds the iteration limit");
    }
    beta = next;
  }
  std::vector<double> points;
  points.reserve(iterates.size());
  for (const auto& it : iterates) points.push_back(it.beta);
  return StaticTrace{std::move(iterates),
                     Schedule::normalized(std::move(points), spec.beta_min(),
                                          beta_max)};
}

Schedule static_schedule(const ProblemSpec& spec, double theta) {
  return static_schedule_trace(spec, theta).schedule;
}

TpaTrace tpa_trace(SamplingSession& session, std::uint64_t seed,
                   std::uint64_t run_index, const EtaSource& eta) {
  const ProblemSpec& spec = session.spec();
  TpaTrace trace;
  trace.betas.push_back(spec.beta_max());
  for (std::uint64_t i = 0;; ++i) {
    const double beta = trace.betas.back();
    BatchRequest request{Phase::kTpaSample, {{beta, 1, run_index, i}}};
    const double x = session.execute_batch(request, seed)[0][0];
    const double step =
        eta ? eta(i)
            : KeyedStream(seed, StreamKey(Phase::kTpaEta, run_index, i))
                  .exponential();
    const double next = x == 0.0 ? kNegInf : beta - step / x;
    trace.betas.push_back(next);
    if (next <= spec.beta_min().value()) break;
  }
  return trace;
}

Schedule tpa_run(SamplingSession& session, std::uint64_t seed,
                 std::uint64_t run_index) {
  TpaTrace trace = tpa_trace(session, seed, run_index);
  trace.betas.pop_back();
  const ProblemSpec& spec = session.spec();
  return Schedule::normalized(std::move(trace.betas), spec.beta_min(),
                              spec.beta_max());
}

Schedule tpa_union(SamplingSession& session, unsigned k, std::uint64_t seed) {
  if (k == 0) throw ParameterError("TPA union needs k >= 1");
  std::vector<double> points;
  for (unsigned r = 0; r < k; ++r) {
    TpaTrace trace = tpa_trace(session, seed, r);
    trace.betas.pop_back();
    points.insert(points.end(), trace.betas.begin(), trace.betas.end());
  }
  const ProblemSpec& spec = session.spec();
  return Schedule::normalized(std::move(points), spec.beta_min(),
                              spec.beta_max());
}

PseudoTpaResult pseudo_tpa_detailed(SamplingSession& session, double theta,
                                    std::uint64_t seed,
                                    const PseudoTpaOptions& options) {
  require_theta(theta);
  if (options.subsample_draws == 0) {
    throw ParameterError("PseudoTPA needs at least one subsampling draw");
  }
  const ProblemSpec& spec = session.spec();
  const auto refine = static_cast<unsigned>(std::ceil(8.0 / theta));
  Schedule coarse = static_schedule(spec, options.coarse_theta);
  const std::size_t t = coarse.pairs();

  // Round one: keep interior b_i with probability 1 - exp(-(sum X)(b_{i+1} - b_i)),
  // X drawn at b_{i+1}.
  BatchRequest round1{Phase::kPseudoRound1, {}};
  for (std::size_t i = 1; i < t; ++i) {
    round1.items.push_back({coarse[i + 1], options.subsample_draws, i, 0});
  }
  const auto draws1 = session.execute_batch(round1, seed);
  std::vector<double> kept{spec.beta_min().value()};
  for (std::size_t i = 1; i < t; ++i) {
    double sum = 0.0;
    for (double x : draws1[i - 1]) sum += x;
    const double keep = -std::expm1(-sum * (coarse[i + 1] - coarse[i]));
    KeyedStream coin(seed, StreamKey(Phase::kPseudoInclusion, i));
    if (coin.uniform() < keep) kept.push_back(coarse[i]);
  }
  kept.push_back(spec.beta_max());
  Schedule subsampled(std::move(kept));

  // Round two: k local TPA steps below every kept point, endpoints included.
  BatchRequest round2{Phase::kPseudoRound2, {}};
  for (std::size_t j = 0; j < subsampled.len(); ++j) {
    round2.items.push_back({subsampled[j], refine, j, 0});
  }
  const auto draws2 = session.execute_batch(round2, seed);
  std::vector<double> points;
  points.reserve(subsampled.len() * (refine + 1));
  for (std::size_t j = 0; j < subsampled.len(); ++j) {
    const double beta = subsampled[j];
    points.push_back(beta);
    KeyedStream eta(seed, StreamKey(Phase::kPseudoEta, j));
    for (double y : draws2[j]) {
      const double step = eta.exponential();
      points.push_back(y == 0.0 ? kNegInf : beta - step / y);
    }
  }

  PseudoTpaResult result{
      Schedule::normalized(std::move(points), spec.beta_min(), spec.beta_max()),
      std::move(coarse), std::move(subsampled), refine, 0, 0};
  result.round1_samples =
      static_cast<std::uint64_t>(options.subsample_draws) * (t > 0 ? t - 1 : 0);
  result.round2_samples =
      static_cast<std::uint64_t>(refine) * result.subsampled.len();
  return result;
}

Schedule pseudo_tpa(SamplingSession& session, double theta, std::uint64_t seed,
                    const PseudoTpaOptions& options) {
  return pseudo_tpa_detailed(session, theta, seed, options).schedule;
}

}  // namespace partratio
