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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/lindblad.hpp"

namespace ergodic {

// Model documents look like
//
//   {"dimension": 2,
//    "hamiltonian": [[[0,0],[0.5,0]], [[0.5,0],[0,0]]],
//    "jump_operators": [ [[[0,0],[1,0]], [[0,0],[0,0]]] ],
//    "kraus_operators": [ ... ]}
//
// Complex numbers are [re, im] pairs, matrices are row-major lists of rows.
// Parse failures throw ConfigError naming the JSON pointer of the offending
// value, e.g. "/model/hamiltonian/1/0: expected [re, im] pair".

ComplexOperator parse_matrix(const nlohmann::json& value, Index dim, const std::string& path);
nlohmann::json matrix_to_json(const ComplexOperator& m);

/// Reads "dimension", "hamiltonian" (optional, defaults to zero) and
/// "jump_operators", then validates the model.
LindbladModel parse_lindblad_model(const nlohmann::json& doc, const std::string& path = "");
nlohmann::json lindblad_model_to_json(const LindbladModel& model);

/// Reads the "kraus_operators" list of a model document.
std::vector<ComplexOperator> parse_kraus_operators(const nlohmann::json& doc,
                                                   const std::string& path = "");

}  // namespace ergodic
