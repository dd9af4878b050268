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

#ifndef PARTRATIO_TESTS_FIXTURES_HPP_
#define PARTRATIO_TESTS_FIXTURES_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "partratio/io.hpp"
#include "partratio/model.hpp"

namespace partratio::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(PARTRATIO_FIXTURE_DIR) + "/" + name;
}

struct Fixture {
  std::string name;
  GrossModel model;
  ProblemSpec spec;
};

inline Fixture load_fixture(const std::string& name) {
  GrossModel model =
      io::model_from_json(io::read_json_file(fixture_path(name + ".model.json")));
  ProblemSpec spec = io::spec_from_json(
      io::read_json_file(fixture_path(name + ".spec.json")), model.n());
  return Fixture{name, std::move(model), spec};
}

inline std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out;
  for (const char* name :
       {"single_atom", "two_atom", "three_atom", "binomial", "random100"}) {
    out.push_back(load_fixture(name));
  }
  return out;
}

inline GrossModel binomial_model() {
  std::vector<Atom> atoms;
  double c = 1.0;
  for (int x = 0; x <= 8; ++x) {
    atoms.push_back({static_cast<double>(x), c});
    c = c * (8 - x) / (x + 1);
  }
  return GrossModel(atoms, 8.0);
}

// Reference log Z by plain long double summation, no shifting.
inline double brute_log_z(const GrossModel& model, double beta) {
  long double sum = 0.0L;
  for (const Atom& a : model.atoms()) {
    sum += static_cast<long double>(a.c) * std::exp(static_cast<long double>(beta) * a.x);
  }
  return static_cast<double>(std::log(sum));
}

}  // namespace partratio::testing

#endif  // PARTRATIO_TESTS_FIXTURES_HPP_
