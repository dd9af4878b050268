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

#ifndef PARTRATIO_RANDOM_HPP_
#define PARTRATIO_RANDOM_HPP_

#include <cmath>
#include <cstdint>

namespace partratio {

/// Phase tags that separate the random substreams of different algorithm
/// steps. Values are part of the reproducibility contract; do not renumber.
enum class Phase : std::uint32_t {
  kGeneric = 0,
  kTpaSample = 1,
  kTpaEta = 2,
  kPseudoRound1 = 3,
  kPseudoInclusion = 4,
  kPseudoRound2 = 5,
  kPseudoEta = 6,
  kPpe = 7,
  kTrial = 8,
  kBoost = 9,
  kSuite = 10,
  kTest = 11,
  kTpaCensor = 12,
};

struct StreamKey {
  std::uint32_t phase = 0;
  std::uint64_t index_a = 0;
  std::uint64_t index_b = 0;

  StreamKey() = default;
  StreamKey(std::uint32_t phase_tag, std::uint64_t a, std::uint64_t b = 0)
      : phase(phase_tag), index_a(a), index_b(b) {}
  StreamKey(Phase phase_tag, std::uint64_t a, std::uint64_t b = 0)
      : phase(static_cast<std::uint32_t>(phase_tag)), index_a(a), index_b(b) {}
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent child seed for replica/trial `tag` of a run seeded by `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed ^ 0x2545f4914f6cdd1dULL) + tag);
}

/// Counter-based keyed generator: the i-th output is a pure function of
/// (seed, key, i), so draws never depend on evaluation order.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, StreamKey key)
      : key_(mix64(mix64(mix64(mix64(seed) ^ key.phase) ^ key.index_a) ^
                   key.index_b)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0xd1b54a32d192ed03ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unit-rate exponential by inversion.
  double exponential() { return -std::log1p(-uniform()); }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace partratio

#endif  // PARTRATIO_RANDOM_HPP_
