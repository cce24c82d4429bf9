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

#include "ergodic/lindblad.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ergodic/errors.hpp"

namespace ergodic {

namespace {

Index superoperator_dim(const ComplexOperator& m) {
  if (m.rows() != m.cols()) throw DomainError("superoperator matrix must be square");
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
  if (d * d != m.rows()) {
    throw DomainError("superoperator matrix size " + std::to_string(m.rows()) +
                      " is not a square number");
  }
  return d;
}

}  // namespace

Superoperator::Superoperator(ComplexOperator matrix)
    : dim_(superoperator_dim(matrix)), matrix_(std::move(matrix)) {}

Superoperator Superoperator::identity(Index dim) {
  return Superoperator(ComplexOperator::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::zero(Index dim) {
  return Superoperator(ComplexOperator::Zero(dim * dim, dim * dim));
}

Superoperator Superoperator::sandwich(const ComplexOperator& left, const ComplexOperator& right) {
  return Superoperator(kron(right.transpose(), left));
}

ComplexOperator Superoperator::apply(const ComplexOperator& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DomainError("operator dimension does not match superoperator");
  }
  return unvectorize(matrix_ * vectorize(rho), dim_);
}

Eigen::RowVectorXcd Superoperator::trace_functional() const {
  Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(matrix_.cols());
  for (Index i = 0; i < dim_; ++i) r += matrix_.row(i * (dim_ + 1));
  return r;
}

bool Superoperator::preserves_trace(double tol) const {
  const Eigen::RowVectorXcd r = trace_functional();
  const Eigen::RowVectorXcd expected =
      vectorize(ComplexOperator::Identity(dim_, dim_)).transpose();
  return (r - expected).cwiseAbs().maxCoeff() <= tol;
}

Superoperator Superoperator::operator+(const Superoperator& other) const {
  return Superoperator(matrix_ + other.matrix_);
}

Superoperator Superoperator::operator-(const Superoperator& other) const {
  return Superoperator(matrix_ - other.matrix_);
}

Superoperator Superoperator::operator*(double scale) const {
  return Superoperator(matrix_ * scale);
}

Superoperator Superoperator::operator*(const Superoperator& other) const {
  return Superoperator(matrix_ * other.matrix_);
}

DensityMatrix::DensityMatrix(const ComplexOperator& op, Normalization normalization)
    : normalized_(normalization == Normalization::kNormalized) {
  if (op.rows() != op.cols() || op.rows() == 0) {
    throw DomainError("density matrix must be square and nonempty");
  }
  if (!all_finite(op)) throw DomainError("density matrix has non-finite entries");
  if (!is_hermitian(op, 1e-12)) throw DomainError("density matrix is not hermitian");
  op_ = hermitian_part(op);
  const double lowest = min_eigenvalue(op_);
  if (lowest < -1e-10) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << lowest;
    throw DomainError(msg.str());
  }
  const double tr = trace();
  if (normalized_ && std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "normalised density matrix has trace " << tr;
    throw DomainError(msg.str());
  }
  if (!normalized_ && (tr < -1e-12 || tr > 1.0 + 1e-10)) {
    std::ostringstream msg;
    msg << "unnormalised density matrix has trace " << tr << " outside [0, 1]";
    throw DomainError(msg.str());
  }
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index level) {
  if (level < 0 || level >= dim) throw DomainError("basis level out of range");
  ComplexOperator op = ComplexOperator::Zero(dim, dim);
  op(level, level) = 1.0;
  return normalized(op);
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return normalized(ComplexOperator::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::scaled(double c) const {
  if (!(c >= 0.0) || c * trace() > 1.0 + 1e-10) {
    throw DomainError("scale factor must keep the trace in [0, 1]");
  }
  return unnormalized(c * op_);
}

void LindbladModel::validate() const {
  const Index d = hamiltonian.rows();
  if (d < 1 || hamiltonian.cols() != d) throw InvalidModelError("hamiltonian must be square");
  if (d > kMaxDimension) {
    throw InvalidModelError("dimension " + std::to_string(d) + " exceeds the limit of " +
                            std::to_string(kMaxDimension));
  }
  if (!all_finite(hamiltonian)) throw InvalidModelError("hamiltonian has non-finite entries");
  if (!is_hermitian(hamiltonian, 1e-12)) throw InvalidModelError("hamiltonian is not hermitian");
  if (jump_operators.empty()) throw InvalidModelError("at least one jump operator is required");
  for (std::size_t i = 0; i < jump_operators.size(); ++i) {
    const auto& v = jump_operators[i];
    if (v.rows() != d || v.cols() != d) {
      throw InvalidModelError("jump operator " + std::to_string(i + 1) +
                              " does not match the hamiltonian dimension");
    }
    if (!all_finite(v)) {
      throw InvalidModelError("jump operator " + std::to_string(i + 1) +
                              " has non-finite entries");
    }
  }
}

Superoperator build_generator(const LindbladModel& model) {
  model.validate();
  const Index d = model.dim();
  const ComplexOperator id = ComplexOperator::Identity(d, d);
  ComplexOperator l = -kI * (kron(id, model.hamiltonian) - kron(model.hamiltonian.transpose(), id));
  for (const auto& v : model.jump_operators) {
    const ComplexOperator vdv = v.adjoint() * v;
    l += kron(v.conjugate(), v);
    l -= 0.5 * kron(id, vdv);
    l -= 0.5 * kron(vdv.transpose(), id);
  }
  return Superoperator(std::move(l));
}

Superoperator propagate(const Superoperator& generator, double t) {
  if (!(t >= 0.0)) throw DomainError("propagation time must be nonnegative");
  if (t == 0.0) return Superoperator::identity(generator.dim());
  return Superoperator(expm(t * generator.matrix()));
}

DensityMatrix stationary_state(const Superoperator& generator, double tol) {
  const ComplexOperator kernel = null_space(generator.matrix(), 1e-10);
  if (kernel.cols() != 1) {
    throw NonUniqueEquilibriumError(
        static_cast<std::size_t>(kernel.cols()),
        "equilibrium is not unique: null space has dimension " + std::to_string(kernel.cols()));
  }
  const Index d = generator.dim();
  ComplexOperator rho = unvectorize(kernel.col(0), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw NumericalError("null vector of the generator is traceless");
  rho = hermitian_part(rho / tr);
  const double residual = max_abs(generator.apply(rho));
  if (residual > tol) {
    std::ostringstream msg;
    msg << "stationary state residual " << residual << " exceeds " << tol;
    throw NumericalError(msg.str());
  }
  return DensityMatrix::normalized(rho);
}

DensityMatrix cesaro_average(const Superoperator& generator, const DensityMatrix& theta,
                             double tau, int steps) {
  if (steps < 2) throw DomainError("cesaro_average needs at least 2 steps");
  if (!(tau > 0.0)) throw DomainError("averaging time must be positive");
  const ComplexOperator step = propagate(generator, tau / steps).matrix();
  ComplexVector state = vectorize(theta.op());
  ComplexVector sum = 0.5 * state;
  for (int j = 1; j <= steps; ++j) {
    state = step * state;
    sum += (j == steps ? 0.5 : 1.0) * state;
  }
  const ComplexOperator mean = unvectorize(sum, theta.dim()) / static_cast<double>(steps);
  return {hermitian_part(mean), theta.is_normalized()
                                    ? DensityMatrix::Normalization::kNormalized
                                    : DensityMatrix::Normalization::kUnnormalized};
}

}  // namespace ergodic
