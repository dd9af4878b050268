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

#ifndef PARTRATIO_ERROR_HPP_
#define PARTRATIO_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partratio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tuning parameter (theta, epsilon, k, delta, ...) is outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A beta value or query point lies outside the admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A pair (b1, b2) was passed with b1 > b2.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Z(-inf) = c_0 is zero, so the quantity requested does not exist.
class UndefinedPartitionError : public Error {
 public:
  using Error::Error;
};

/// The exact log partition ratio exceeds the promised bound q, or the model
/// does not fit inside the problem bounds.
class InconsistentSpecError : public Error {
 public:
  using Error::Error;
};

/// A gross model violates its structural invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Every Y sample of one pair missed x = 0 across an infinite gap, so the
/// pair's V mean is zero and the estimate is undefined.
class DegenerateEstimateError : public Error {
 public:
  DegenerateEstimateError(std::size_t pair_index, const std::string& what)
      : Error(what), pair_index_(pair_index) {}

  std::size_t pair_index() const noexcept { return pair_index_; }

 private:
  std::size_t pair_index_;
};

}  // namespace partratio

#endif  // PARTRATIO_ERROR_HPP_
