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

#include "ergodic/models.hpp"

#include <cmath>

namespace ergodic::models {

ComplexOperator sigma_minus() {
  ComplexOperator s = ComplexOperator::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

ComplexOperator sigma_x() {
  ComplexOperator s = ComplexOperator::Zero(2, 2);
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  return s;
}

ComplexOperator sigma_z() {
  ComplexOperator s = ComplexOperator::Zero(2, 2);
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

LindbladModel pure_decay(double gamma) {
  return {ComplexOperator::Zero(2, 2), {std::sqrt(gamma) * sigma_minus()}};
}

LindbladModel driven_atom(double omega, double gamma) {
  return {0.5 * omega * sigma_x(), {std::sqrt(gamma) * sigma_minus()}};
}

LindbladModel projective_dephasing() {
  ComplexOperator p0 = ComplexOperator::Zero(2, 2);
  ComplexOperator p1 = ComplexOperator::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  return {ComplexOperator::Zero(2, 2), {p0, p1}};
}

std::vector<ComplexOperator> amplitude_damping_kraus(double p) {
  ComplexOperator a1 = ComplexOperator::Zero(2, 2);
  a1(0, 0) = 1.0;
  a1(1, 1) = std::sqrt(1.0 - p);
  ComplexOperator a2 = ComplexOperator::Zero(2, 2);
  a2(0, 1) = std::sqrt(p);
  return {a1, a2};
}

std::vector<ComplexOperator> projective_kraus() {
  const LindbladModel m = projective_dephasing();
  return m.jump_operators;
}

std::vector<ComplexOperator> pauli_mixing_kraus() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r * sigma_x(), r * sigma_z()};
}

}  // namespace ergodic::models
