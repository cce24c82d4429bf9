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

#include "ergodic/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ergodic {

double max_abs(const ComplexOperator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexOperator& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

bool is_hermitian(const ComplexOperator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

ComplexOperator hermitian_part(const ComplexOperator& a) {
  return 0.5 * (a + a.adjoint());
}

double trace_distance(const ComplexOperator& a, const ComplexOperator& b) {
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(hermitian_part(a - b),
                                                        Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const ComplexOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexOperator> solver(hermitian_part(a),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double spectral_norm(const ComplexOperator& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexOperator> svd(a);
  return svd.singularValues()(0);
}

ComplexVector vectorize(const ComplexOperator& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexOperator unvectorize(const ComplexVector& v, Index dim) {
  return Eigen::Map<const ComplexOperator>(v.data(), dim, dim);
}

ComplexOperator kron(const ComplexOperator& a, const ComplexOperator& b) {
  ComplexOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex vectorized_trace(const ComplexVector& v, Index dim) {
  Complex tr = 0.0;
  for (Index i = 0; i < dim; ++i) tr += v(i * (dim + 1));
  return tr;
}

ComplexOperator expm(const ComplexOperator& a) {
  const Index n = a.rows();
  ComplexOperator identity = ComplexOperator::Identity(n, n);
  // Induced 1-norm.
  const double norm = n == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm == 0.0) return identity;

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const ComplexOperator scaled = a / std::ldexp(1.0, squarings);

  ComplexOperator sum = identity;
  ComplexOperator term = identity;
  constexpr double kEps = 1e-17;
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().colwise().sum().maxCoeff() <= kEps) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

ComplexOperator null_space(const ComplexOperator& a, double rel_threshold) {
  Eigen::JacobiSVD<ComplexOperator> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  const double cut = rel_threshold * largest;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

namespace {

double standard_normal(std::mt19937_64& engine) {
  // Box-Muller on 53-bit uniforms; stable across standard libraries.
  const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

ComplexOperator random_complex(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  ComplexOperator m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = standard_normal(engine);
      m(i, j) = Complex(re, standard_normal(engine));
    }
  }
  return m;
}

ComplexOperator random_density(Index dim, std::uint64_t seed) {
  const ComplexOperator g = random_complex(dim, dim, seed);
  ComplexOperator rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

}  // namespace ergodic
