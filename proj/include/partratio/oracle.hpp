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

#ifndef PARTRATIO_ORACLE_HPP_
#define PARTRATIO_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "partratio/beta.hpp"
#include "partratio/model.hpp"
#include "partratio/random.hpp"

namespace partratio {

/// Black-box source of draws from the gross distribution mu_beta. Draws are
/// energy values, never configurations.
class SampleOracle {
 public:
  virtual ~SampleOracle() = default;

  /// Fills `out` with independent draws from mu_beta, consuming randomness
  /// only from `rng`. draw(-inf) yields zeros.
  virtual void draw(BetaValue beta, KeyedStream& rng,
                    std::span<double> out) const = 0;

  /// Energies with positive weight, ascending.
  virtual std::span<const double> support() const = 0;
};

using OraclePtr = std::shared_ptr<const SampleOracle>;

/// Exact inverse-CDF sampler for an explicit model.
OraclePtr exact_sampler(GrossModel model);

/// With probability `delta` each draw is replaced by a uniform pick from the
/// inner oracle's support, so the output is within TV distance delta of the
/// inner distribution. Throws ParameterError unless 0 <= delta < 1.
OraclePtr tv_perturbed_sampler(OraclePtr inner, double delta);

struct BatchItem {
  BetaValue beta;
  std::uint64_t count = 0;
  std::uint64_t index_a = 0;
  std::uint64_t index_b = 0;
};

/// One adaptivity round: no beta in the batch may depend on its own results.
struct BatchRequest {
  Phase phase = Phase::kGeneric;
  std::vector<BatchItem> items;
};

struct OracleStats {
  std::uint64_t total_samples = 0;
  std::uint64_t rounds = 0;
  std::map<double, std::uint64_t> per_beta;

  /// Adds counts from another run (used when aggregating replicas).
  void merge(const OracleStats& other);
};

/// Instrumented access to an oracle for one problem: range-checks every
/// query against the spec and counts samples and rounds.
class SamplingSession {
 public:
  SamplingSession(OraclePtr oracle, ProblemSpec spec, unsigned workers = 1);

  /// Runs one round. Item i's draws come from the substream keyed by
  /// (seed, phase, index_a, index_b), so the output does not depend on item
  /// order or worker count. Empty batches (no draws requested) are not a
  /// round. Out-of-range betas throw RangeError before anything is drawn.
  std::vector<std::vector<double>> execute_batch(const BatchRequest& request,
                                                 std::uint64_t seed);

  OracleStats stats() const;
  const ProblemSpec& spec() const { return spec_; }
  const SampleOracle& oracle() const { return *oracle_; }
  unsigned workers() const { return workers_; }

 private:
  OraclePtr oracle_;
  ProblemSpec spec_;
  unsigned workers_;
  mutable std::mutex stats_mutex_;
  OracleStats stats_;
};

}  // namespace partratio

#endif  // PARTRATIO_ORACLE_HPP_
