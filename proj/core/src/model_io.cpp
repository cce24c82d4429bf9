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

#include "ergodic/model_io.hpp"

#include "ergodic/errors.hpp"

namespace ergodic {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
}

Complex parse_complex(const json& value, const std::string& path) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
    fail(path, "expected [re, im] pair");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

Index parse_dimension(const json& doc, const std::string& path) {
  if (!doc.is_object()) fail(path, "expected a model object");
  if (!doc.contains("dimension")) fail(path + "/dimension", "missing");
  const json& d = doc["dimension"];
  if (!d.is_number_integer() || d.get<long long>() < 1) {
    fail(path + "/dimension", "expected a positive integer");
  }
  return static_cast<Index>(d.get<long long>());
}

}  // namespace

ComplexOperator parse_matrix(const json& value, Index dim, const std::string& path) {
  if (!value.is_array() || static_cast<Index>(value.size()) != dim) {
    fail(path, "expected " + std::to_string(dim) + " rows");
  }
  ComplexOperator m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    const std::string row_path = path + "/" + std::to_string(i);
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      fail(row_path, "expected " + std::to_string(dim) + " entries");
    }
    for (Index j = 0; j < dim; ++j) {
      m(i, j) = parse_complex(row[static_cast<std::size_t>(j)], row_path + "/" + std::to_string(j));
    }
  }
  return m;
}

json matrix_to_json(const ComplexOperator& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

LindbladModel parse_lindblad_model(const json& doc, const std::string& path) {
  const Index d = parse_dimension(doc, path);
  LindbladModel model;
  model.hamiltonian = doc.contains("hamiltonian")
                          ? parse_matrix(doc["hamiltonian"], d, path + "/hamiltonian")
                          : ComplexOperator::Zero(d, d);
  if (!doc.contains("jump_operators") || !doc["jump_operators"].is_array()) {
    fail(path + "/jump_operators", "expected a list of matrices");
  }
  const json& jumps = doc["jump_operators"];
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    model.jump_operators.push_back(
        parse_matrix(jumps[i], d, path + "/jump_operators/" + std::to_string(i)));
  }
  try {
    model.validate();
  } catch (const InvalidModelError& e) {
    fail(path, e.what());
  }
  return model;
}

json lindblad_model_to_json(const LindbladModel& model) {
  json doc;
  doc["dimension"] = model.dim();
  doc["hamiltonian"] = matrix_to_json(model.hamiltonian);
  doc["jump_operators"] = json::array();
  for (const auto& v : model.jump_operators) doc["jump_operators"].push_back(matrix_to_json(v));
  return doc;
}

std::vector<ComplexOperator> parse_kraus_operators(const json& doc, const std::string& path) {
  const Index d = parse_dimension(doc, path);
  if (!doc.contains("kraus_operators") || !doc["kraus_operators"].is_array() ||
      doc["kraus_operators"].empty()) {
    fail(path + "/kraus_operators", "expected a nonempty list of matrices");
  }
  std::vector<ComplexOperator> ops;
  const json& list = doc["kraus_operators"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    ops.push_back(parse_matrix(list[i], d, path + "/kraus_operators/" + std::to_string(i)));
  }
  return ops;
}

}  // namespace ergodic
