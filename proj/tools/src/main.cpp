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

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "commands.hpp"
#include "ergodic/errors.hpp"

namespace {

constexpr int kChecksFailed = 1;
constexpr int kError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate quantum counting processes and check their ergodic averages."};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
  std::vector<double> times;
  std::optional<double> eps;
  std::optional<double> tau;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--out", out_dir, "Directory for result files");
  app.add_option("--threads", threads, "Worker threads (default: ERGODIC_COUNTS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--times", times, "Override the correlation times, e.g. 0,5")->delimiter(',');
  app.add_option("--eps", eps, "Override the coincidence box width")->check(CLI::PositiveNumber);
  app.add_option("--tau", tau, "Override the averaging window")->check(CLI::PositiveNumber);

  std::string topic;
  app.add_subcommand("simulate", "Sample detection records");
  auto* verify = app.add_subcommand("verify", "Run a model check");
  verify->add_option("check", topic, "Which check")
      ->required()
      ->check(CLI::IsMember(ergodic::cli::topics("verify")));
  auto* correlate = app.add_subcommand("correlate", "Compare time averages with expectations");
  correlate->add_option("statistic", topic, "Which statistic")
      ->required()
      ->check(CLI::IsMember(ergodic::cli::topics("correlate")));
  app.add_subcommand("gn", "Tabulate non-exclusive densities");
  app.add_subcommand("kraus", "Discrete-time Kraus measurement suite");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ergodic::cli::ExperimentConfig config = ergodic::cli::load_config(config_path);
    if (seed) config.seed = *seed;
    if (!times.empty()) {
      // Re-validate through the parser so overrides obey the same rules.
      nlohmann::json doc = ergodic::cli::config_to_json(config);
      doc["times"] = times;
      config = ergodic::cli::config_from_json(doc);
    }
    if (eps) config.epsilon = *eps;
    if (tau) config.tau = *tau;

    const auto report = ergodic::cli::run(config, command, topic, out_dir,
                                          ergodic::cli::resolve_threads(threads));
    for (const auto& v : report.verdicts) {
      std::cout << (v.pass ? "PASS " : "FAIL ") << v.check << " value=" << v.value
                << " tolerance=" << v.tolerance << '\n';
    }
    for (const auto& f : report.files) {
      if (f.parent_path().filename() != "records") std::cout << "wrote " << f.string() << '\n';
    }
    return report.all_passed() ? 0 : kChecksFailed;
  } catch (const ergodic::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}
