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

#ifndef PARTRATIO_MODEL_HPP_
#define PARTRATIO_MODEL_HPP_

#include <optional>
#include <vector>

#include "partratio/beta.hpp"

namespace partratio {

/// One energy level of the gross distribution: energy x carried by total
/// weight c (the number of states at that energy, or any positive real).
struct Atom {
  double x = 0.0;
  double c = 1.0;
};

/// Explicit finite support {(x, c_x)} of a gross Gibbs distribution
/// mu_beta(x) = c_x e^{beta x} / Z(beta).
///
/// Atoms are kept sorted by energy. Every energy is 0 or lies in [1, n], the
/// energies are distinct, and every weight is positive and finite.
class GrossModel {
 public:
  GrossModel(std::vector<Atom> atoms, double n);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double n() const { return n_; }
  double max_energy() const { return atoms_.back().x; }

  /// Weight of the zero-energy atom, or 0 when absent. Z(-inf) = c_0.
  double zero_weight() const;
  bool has_zero_atom() const { return atoms_.front().x == 0.0; }

  /// log c_x for each atom, in atom order.
  const std::vector<double>& log_weights() const { return log_weights_; }

  /// Energies in atom order.
  std::vector<double> energies() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> log_weights_;
  double n_;
};

/// Throws InconsistentSpecError unless the model fits inside the spec:
/// energies bounded by spec.n, and c_0 > 0 whenever beta_min = -inf.
void check_compatible(const GrossModel& model, const ProblemSpec& spec);

}  // namespace partratio

#endif  // PARTRATIO_MODEL_HPP_
