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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace ergodic {

using Complex = std::complex<double>;
using ComplexOperator = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Largest entry modulus.
double max_abs(const ComplexOperator& a);

bool all_finite(const ComplexOperator& a);

/// max |A - A^dagger| entrywise <= tol.
bool is_hermitian(const ComplexOperator& a, double tol = 1e-12);

ComplexOperator hermitian_part(const ComplexOperator& a);

/// Half the trace norm of a - b; both arguments are hermitised first.
double trace_distance(const ComplexOperator& a, const ComplexOperator& b);

/// Smallest eigenvalue of the hermitian part.
double min_eigenvalue(const ComplexOperator& a);

/// Largest singular value.
double spectral_norm(const ComplexOperator& a);

/// Column-stacking vectorisation: vec(A X B) = (B^T kron A) vec(X).
ComplexVector vectorize(const ComplexOperator& a);
ComplexOperator unvectorize(const ComplexVector& v, Index dim);

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b);

/// Trace of a column-stacked d x d operator without reshaping.
Complex vectorized_trace(const ComplexVector& v, Index dim);

/// Matrix exponential by scaling and squaring with a Taylor kernel whose
/// order is chosen from the norm of the scaled argument. exp(0) is the
/// identity exactly.
ComplexOperator expm(const ComplexOperator& a);

/// Orthonormal basis (as columns) of the numerical null space of a square
/// matrix. Singular values <= rel_threshold * (largest singular value)
/// count as zero.
ComplexOperator null_space(const ComplexOperator& a, double rel_threshold);

/// Random density matrix (Ginibre construction) from a 64-bit seed. Used
/// for property checks; deterministic for a given seed.
ComplexOperator random_density(Index dim, std::uint64_t seed);

/// Random complex matrix with standard normal real and imaginary parts.
ComplexOperator random_complex(Index rows, Index cols, std::uint64_t seed);

}  // namespace ergodic
