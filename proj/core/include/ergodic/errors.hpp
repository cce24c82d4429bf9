// Copyright 2026 The ergodic_counts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergodic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model (Hamiltonian, jump or Kraus operators) violates its invariants.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The generator (or channel) has more than one, or no, normalised fixed point.
class NonUniqueEquilibriumError : public Error {
 public:
  NonUniqueEquilibriumError(std::size_t null_dimension, const std::string& what)
      : Error(what), null_dimension_(null_dimension) {}

  std::size_t null_dimension() const noexcept { return null_dimension_; }

 private:
  std::size_t null_dimension_;
};

/// A truncated series or quadrature could not meet the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(double achieved_bound, const std::string& what)
      : Error(what), achieved_bound_(achieved_bound) {}

  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

/// Floating point breakdown (underflow of a conditional state, non-finite values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent run parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergodic
