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

#include "partratio/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "partratio/error.hpp"

namespace partratio {

GrossModel::GrossModel(std::vector<Atom> atoms, double n)
    : atoms_(std::move(atoms)), n_(n) {
  if (atoms_.empty()) throw ModelError("model needs at least one atom");
  if (!std::isfinite(n) || n < 1.0) {
    throw ModelError("model n must be a finite real >= 1");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    std::ostringstream where;
    where << "atom x=" << a.x << ", c=" << a.c;
    if (!std::isfinite(a.x)) {
      throw ModelError(where.str() + ": energy must be finite");
    }
    if (a.x != 0.0 && (a.x < 1.0 || a.x > n)) {
      std::ostringstream msg;
      msg << "x=" << a.x << " violates H(Omega) in {0} u [1, n] with n=" << n;
      if (a.x > 0.0 && a.x < 1.0) msg << " (forbidden gap (0,1))";
      throw ModelError(msg.str());
    }
    if (!(a.c > 0.0) || !std::isfinite(a.c)) {
      throw ModelError(where.str() + ": weight must be positive and finite");
    }
    if (i > 0 && atoms_[i - 1].x == a.x) {
      throw ModelError(where.str() + ": duplicate energy");
    }
  }
  log_weights_.reserve(atoms_.size());
  for (const Atom& a : atoms_) log_weights_.push_back(std::log(a.c));
}

double GrossModel::zero_weight() const {
  return has_zero_atom() ? atoms_.front().c : 0.0;
}

std::vector<double> GrossModel::energies() const {
  std::vector<double> xs;
  xs.reserve(atoms_.size());
  for (const Atom& a : atoms_) xs.push_back(a.x);
  return xs;
}

void check_compatible(const GrossModel& model, const ProblemSpec& spec) {
  if (model.max_energy() > spec.n()) {
    std::ostringstream msg;
    msg << "model energy " << model.max_energy() << " exceeds spec n="
        << spec.n();
    throw InconsistentSpecError(msg.str());
  }
  if (spec.beta_min().is_neg_inf() && !model.has_zero_atom()) {
    throw InconsistentSpecError(
        "beta_min = -inf requires an x = 0 atom (Z(-inf) = c_0 would be 0)");
  }
}

}  // namespace partratio
