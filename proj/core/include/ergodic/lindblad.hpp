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

#include <vector>

#include "ergodic/linalg.hpp"

namespace ergodic {

/// Largest Hilbert space dimension accepted by the dense routines.
inline constexpr Index kMaxDimension = 64;

/// Linear map on d x d operators stored as a d^2 x d^2 matrix acting on
/// column-stacked operators.
class Superoperator {
 public:
  explicit Superoperator(ComplexOperator matrix);

  static Superoperator identity(Index dim);
  static Superoperator zero(Index dim);
  /// rho -> A rho B
  static Superoperator sandwich(const ComplexOperator& left, const ComplexOperator& right);

  Index dim() const noexcept { return dim_; }
  const ComplexOperator& matrix() const noexcept { return matrix_; }

  ComplexOperator apply(const ComplexOperator& rho) const;
  ComplexVector apply(const ComplexVector& vec_rho) const { return matrix_ * vec_rho; }

  /// Row vector r with r . vec(rho) = tr(S(rho)).
  Eigen::RowVectorXcd trace_functional() const;

  /// tr(S(rho)) == tr(rho) for every rho, checked on the trace functional.
  bool preserves_trace(double tol = 1e-10) const;

  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator*(double scale) const;
  /// Composition: (a * b)(rho) = a(b(rho)).
  Superoperator operator*(const Superoperator& other) const;

 private:
  Index dim_;
  ComplexOperator matrix_;
};

/// A positive semidefinite operator, either normalised (trace one) or a
/// conditional, unnormalised state with trace in [0, 1].
class DensityMatrix {
 public:
  enum class Normalization { kNormalized, kUnnormalized };

  /// Validates hermiticity (1e-12), positivity (eigenvalues >= -1e-10) and
  /// the trace constraint, then stores the hermitian part.
  DensityMatrix(const ComplexOperator& op, Normalization normalization);

  static DensityMatrix normalized(const ComplexOperator& op) {
    return {op, Normalization::kNormalized};
  }
  static DensityMatrix unnormalized(const ComplexOperator& op) {
    return {op, Normalization::kUnnormalized};
  }
  static DensityMatrix basis_state(Index dim, Index level);
  static DensityMatrix maximally_mixed(Index dim);

  const ComplexOperator& op() const noexcept { return op_; }
  Index dim() const noexcept { return op_.rows(); }
  bool is_normalized() const noexcept { return normalized_; }
  double trace() const { return op_.trace().real(); }

  /// c * rho as an unnormalised state, 0 <= c <= 1.
  DensityMatrix scaled(double c) const;

 private:
  ComplexOperator op_;
  bool normalized_;
};

/// Hamiltonian plus the operators V_1..V_k of the dissipator.
struct LindbladModel {
  ComplexOperator hamiltonian;
  std::vector<ComplexOperator> jump_operators;

  Index dim() const noexcept { return hamiltonian.rows(); }

  /// Throws InvalidModelError unless 1 <= d <= 64, k >= 1, all operators are
  /// finite and d x d, and H is hermitian to 1e-12.
  void validate() const;
};

/// L(rho) = -i[H, rho] + sum_i (V_i rho V_i^dag - 1/2 {V_i^dag V_i, rho}).
Superoperator build_generator(const LindbladModel& model);

/// exp(t S); the identity for t == 0. Throws DomainError for t < 0.
Superoperator propagate(const Superoperator& generator, double t);

/// Unique trace-one element of the null space of `generator`.
///
/// The null space is read off the SVD with the threshold
/// 1e-10 * ||generator||. Throws NonUniqueEquilibriumError when its dimension
/// is not one, and NumericalError when the resulting state violates
/// ||generator(rho)|| <= tol.
DensityMatrix stationary_state(const Superoperator& generator, double tol = 1e-9);

/// Time mean (1/tau) int_0^tau T_t(theta) dt by the composite trapezoid rule
/// with `steps` intervals. Throws DomainError for steps < 2 or tau <= 0.
DensityMatrix cesaro_average(const Superoperator& generator, const DensityMatrix& theta,
                             double tau, int steps);

}  // namespace ergodic
