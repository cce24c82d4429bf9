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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "experiment_config.hpp"

namespace ergodic::cli {

struct Verdict {
  std::string check;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

struct RunReport {
  std::vector<Verdict> verdicts;
  std::vector<std::filesystem::path> files;

  bool all_passed() const;
};

/// Runs `command` ("simulate", "verify", "correlate", "gn" or "kraus") with
/// `topic` selecting the verify/correlate variant, writing CSV tables and a
/// verdict.json into `out_dir`. Module errors propagate as exceptions.
///
/// Every file starts with the command, the seed and the full config, and its
/// payload depends only on the config: the thread count never shows up.
RunReport run(const ExperimentConfig& config, const std::string& command,
              const std::string& topic, const std::filesystem::path& out_dir, unsigned threads);

/// Valid topics per command; empty for commands without one.
std::vector<std::string> topics(const std::string& command);

/// --threads if given, else ERGODIC_COUNTS_THREADS, else the hardware count.
unsigned resolve_threads(std::optional<unsigned> flag);

}  // namespace ergodic::cli
