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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergodic/observables.hpp"
#include "ergodic/unraveling.hpp"

namespace ergodic::cli {

struct ResponseSpec {
  std::string kind = "exponential";
  double amplitude = 1.0;
  /// Decay time (exponential) or width (rectangular).
  double scale = 0.5;

  ResponseFunction build() const;
  friend bool operator==(const ResponseSpec&, const ResponseSpec&) = default;
};

struct EventSpec {
  std::vector<Interval> boxes;
  std::vector<int> detectors;
  bool exact = false;

  CylinderEvent build() const { return {boxes, detectors, exact}; }
  friend bool operator==(const EventSpec& a, const EventSpec& b);
};

/// M_{s+t}(F and shifted E) against M_s(E) o M_t(F).
struct MarkovPair {
  double s = 0.5;
  double t = 0.6;
  EventSpec e;
  EventSpec f;
  friend bool operator==(const MarkovPair& a, const MarkovPair& b) = default;
};

struct KrausSpec {
  int sequence_length = 3;
  /// Window statistic: indicator that the window equals this pattern.
  std::vector<int> pattern{1};
  std::size_t n_steps = 1000000;
  friend bool operator==(const KrausSpec&, const KrausSpec&) = default;
};

struct ExperimentConfig {
  /// Model document: "dimension" plus "jump_operators" and/or "kraus_operators".
  nlohmann::json model;
  /// "stationary", "ground", "excited", "maximally_mixed" or a matrix.
  nlohmann::json initial_state = "stationary";
  ResponseSpec response;
  double horizon = 100.0;
  double tau = 1e4;
  /// Defaults to the minimal burn-in of the response when absent.
  std::optional<double> burn_in;
  double dt = 0.01;
  /// Defaults to 0.01 min(response scale, 1 / ||sum V^dag V||) when absent.
  std::optional<double> dt_int;
  std::size_t n_traj = 1000;
  int n_max = 8;
  int quad_nodes = 16;
  std::uint64_t seed = 1;
  std::vector<double> times{0.0};
  double epsilon = 0.1;
  std::vector<double> lags;
  std::map<std::string, double> tolerances;
  std::vector<MarkovPair> markov;
  KrausSpec kraus;

  bool has_lindblad() const { return model.contains("jump_operators"); }
  bool has_kraus() const { return model.contains("kraus_operators"); }
  /// Named tolerance with its built-in default.
  double tolerance(const std::string& name) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError naming the JSON pointer of the offending value.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in tolerance defaults, keyed by check name.
const std::map<std::string, double>& default_tolerances();

}  // namespace ergodic::cli
