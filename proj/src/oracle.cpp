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

#include "partratio/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partratio/error.hpp"
#include "partratio/parallel.hpp"

namespace partratio {
namespace {

class ExactSampler final : public SampleOracle {
 public:
  explicit ExactSampler(GrossModel model)
      : model_(std::move(model)), support_(model_.energies()) {}

  void draw(BetaValue beta, KeyedStream& rng,
            std::span<double> out) const override {
    if (beta.is_neg_inf()) {
      if (!model_.has_zero_atom()) {
        throw UndefinedPartitionError(
            "mu_{-inf} is undefined: the model has no x = 0 atom");
      }
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    if (support_.size() == 1) {
      std::fill(out.begin(), out.end(), support_.front());
      return;
    }
    // Cumulative max-shifted weights; atoms whose weight underflows to zero
    // are never selected by upper_bound.
    const auto& log_c = model_.log_weights();
    std::vector<double> cdf(support_.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < support_.size(); ++i) {
      cdf[i] = log_c[i] + beta.value() * support_[i];
      shift = std::max(shift, cdf[i]);
    }
    double running = 0.0;
    for (double& c : cdf) {
      running += std::exp(c - shift);
      c = running;
    }
    for (double& x : out) {
      const double target = rng.uniform() * running;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
      if (it == cdf.end()) --it;
      x = support_[static_cast<std::size_t>(it - cdf.begin())];
    }
  }

  std::span<const double> support() const override { return support_; }

 private:
  GrossModel model_;
  std::vector<double> support_;
};

class TvPerturbedSampler final : public SampleOracle {
 public:
  TvPerturbedSampler(OraclePtr inner, double delta)
      : inner_(std::move(inner)), delta_(delta) {}

  void draw(BetaValue beta, KeyedStream& rng,
            std::span<double> out) const override {
    inner_->draw(beta, rng, out);
    if (delta_ == 0.0) return;
    const auto support = inner_->support();
    for (double& x : out) {
      if (rng.uniform() < delta_) {
        const auto pick = static_cast<std::size_t>(
            rng.uniform() * static_cast<double>(support.size()));
        x = support[std::min(pick, support.size() - 1)];
      }
    }
  }

  std::span<const double> support() const override { return inner_->support(); }

 private:
  OraclePtr inner_;
  double delta_;
};

}  // namespace

OraclePtr exact_sampler(GrossModel model) {
  return std::make_shared<ExactSampler>(std::move(model));
}

OraclePtr tv_perturbed_sampler(OraclePtr inner, double delta) {
  if (!inner) throw ParameterError("tv_perturbed_sampler needs an inner oracle");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw ParameterError("TV perturbation delta must be in [0, 1)");
  }
  return std::make_shared<TvPerturbedSampler>(std::move(inner), delta);
}

void OracleStats::merge(const OracleStats& other) {
  total_samples += other.total_samples;
  rounds += other.rounds;
  for (const auto& [beta, count] : other.per_beta) per_beta[beta] += count;
}

SamplingSession::SamplingSession(OraclePtr oracle, ProblemSpec spec,
                                 unsigned workers)
    : oracle_(std::move(oracle)), spec_(spec), workers_(std::max(1u, workers)) {
  if (!oracle_) throw ParameterError("SamplingSession needs an oracle");
}

std::vector<std::vector<double>> SamplingSession::execute_batch(
    const BatchRequest& request, std::uint64_t seed) {
  std::uint64_t requested = 0;
  for (const BatchItem& item : request.items) {
    if (!spec_.contains(item.beta)) {
      std::ostringstream msg;
      msg << "query beta=" << item.beta.to_string() << " outside ["
          << spec_.beta_min().to_string() << ", " << spec_.beta_max() << "]";
      throw RangeError(msg.str());
    }
    requested += item.count;
  }
  std::vector<std::vector<double>> out(request.items.size());
  if (requested == 0) return out;

  parallel_for(request.items.size(), workers_, [&](std::size_t i) {
    const BatchItem& item = request.items[i];
    out[i].resize(item.count);
    KeyedStream rng(seed, StreamKey(request.phase, item.index_a, item.index_b));
    oracle_->draw(item.beta, rng, out[i]);
  });

  std::lock_guard<std::mutex> lock(stats_mutex_);
  stats_.rounds += 1;
  stats_.total_samples += requested;
  for (const BatchItem& item : request.items) {
    if (item.count > 0) stats_.per_beta[item.beta.value()] += item.count;
  }
  return out;
}

OracleStats SamplingSession::stats() const {
  std::lock_guard<std::mutex> lock(stats_mutex_);
  return stats_;
}

}  // namespace partratio
