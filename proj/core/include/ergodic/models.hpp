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

#include "ergodic/lindblad.hpp"

// Reference models. Two-level systems use |0> = ground and |1> = excited, so
// the lowering operator is |0><1|.
namespace ergodic::models {

ComplexOperator sigma_minus();
ComplexOperator sigma_x();
ComplexOperator sigma_z();

/// H = 0, V = sqrt(gamma) sigma_-.
LindbladModel pure_decay(double gamma = 1.0);

/// Resonantly driven two-level atom: H = (omega/2) sigma_x, V = sqrt(gamma) sigma_-.
LindbladModel driven_atom(double omega = 1.0, double gamma = 1.0);

/// H = 0, V_1 = |0><0|, V_2 = |1><1|; every diagonal state is stationary.
LindbladModel projective_dephasing();

/// a_1 = diag(1, sqrt(1-p)), a_2 = sqrt(p) |0><1|.
std::vector<ComplexOperator> amplitude_damping_kraus(double p);

/// a_1 = |0><0|, a_2 = |1><1|.
std::vector<ComplexOperator> projective_kraus();

/// a_1 = sigma_x / sqrt 2, a_2 = sigma_z / sqrt 2; unique fixed point 1/2.
std::vector<ComplexOperator> pauli_mixing_kraus();

}  // namespace ergodic::models
