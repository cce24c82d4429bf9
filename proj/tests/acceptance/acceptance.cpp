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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ergodic/errors.hpp"
#include "ergodic/kraus.hpp"
#include "ergodic/linalg.hpp"
#include "ergodic/lindblad.hpp"
#include "ergodic/model_io.hpp"
#include "ergodic/models.hpp"
#include "ergodic/observables.hpp"
#include "ergodic/statistics.hpp"
#include "ergodic/trajectory.hpp"
#include "ergodic/unraveling.hpp"
#include "experiment_config.hpp"

using namespace ergodic;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const DensityMatrix kGround = DensityMatrix::basis_state(2, 0);
const DensityMatrix kExcited = DensityMatrix::basis_state(2, 1);
const ResponseFunction kGamma = ResponseFunction::exponential(1.0, 0.5);

Outcome normalisation() {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int m = 0; m < 100; ++m) {
    const Index d = 1 + static_cast<Index>(gen() % 4);
    const int k = 1 + static_cast<int>(gen() % 3);
    std::vector<ComplexOperator> vs;
    for (int i = 0; i < k; ++i) vs.push_back(0.5 * random_complex(d, d, gen()));
    const LindbladModel model{hermitian_part(random_complex(d, d, gen())), vs};
    const Superoperator l = build_generator(model);
    for (int s = 0; s < 50; ++s) {
      worst = std::max(worst, std::abs(l.apply(random_density(d, gen())).trace()));
    }
  }
  return {worst < 1e-10, "max |tr L(rho)| = " + fmt("%.3g", worst) + " (< 1e-10)"};
}

Outcome splitting() {
  std::vector<LindbladModel> shipped = {models::pure_decay(), models::driven_atom(),
                                        models::projective_dephasing(), models::driven_atom(2.5, 0.7)};
  for (const auto& entry : std::filesystem::directory_iterator(ERGODIC_CONFIG_DIR)) {
    const auto c = cli::load_config(entry.path());
    if (c.has_lindblad()) shipped.push_back(parse_lindblad_model(c.model, "/model"));
  }
  double worst = 0.0;
  for (const auto& m : shipped) worst = std::max(worst, unravel(m).splitting_residual());
  return {worst < 1e-12, std::to_string(shipped.size()) + " models, max |L - (L0 + sum J)| = " +
                             fmt("%.3g", worst) + " (< 1e-12)"};
}

Outcome sure_event() {
  const Unraveling u = unravel(models::driven_atom());
  QuadratureControls quad;
  quad.n_max = 8;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const DensityMatrix rho = DensityMatrix::normalized(random_density(2, 10 + s));
    for (double t : {0.5, 1.0, 1.5, 2.0}) {
      const MeasureResult r = operation_measure(u, CylinderEvent::sure(), t, rho, quad);
      worst = std::max(worst, max_abs(r.state.op() - propagate(u.generator, t).apply(rho.op())));
    }
  }
  return {worst < 1e-6, "max |M_t(all)(rho) - e^{tL} rho| = " + fmt("%.3g", worst) + " (< 1e-6)"};
}

Outcome waiting_time() {
  const Unraveling u = unravel(models::pure_decay());
  SamplingOptions options;
  options.stop_after_clicks = 1;
  const auto records = sample_ensemble(u, kExcited, 30.0, 4, 100000, options);
  std::vector<double> waits;
  for (const auto& r : records) {
    waits.push_back(r.empty() ? std::numeric_limits<double>::infinity() : r.clicks()[0].time);
  }
  const double d = ks_distance(waits, [](double t) { return 1.0 - std::exp(-t); });
  return {d < 0.006, "KS distance " + fmt("%.4g", d) + " (< 0.006) over 1e5 records"};
}

Outcome markov() {
  const Unraveling u = unravel(models::driven_atom());
  const DensityMatrix rho = stationary_state(u.generator);
  struct Pair {
    double s, t;
    CylinderEvent e, f;
  };
  const std::vector<Pair> pairs = {
      {0.5, 0.6, CylinderEvent::single_click({0.1, 0.3}), CylinderEvent::single_click({0.2, 0.5})},
      {1.0, 0.8, {{{0.0, 0.4}, {0.6, 0.9}}, {1, 1}, true}, CylinderEvent::single_click({0.3, 0.8})},
      {0.7, 1.2, CylinderEvent::no_clicks(), {{{0.1, 0.5}, {0.7, 1.1}}, {1, 1}, false}}};
  bool ok = true;
  std::string detail;
  for (const auto& p : pairs) {
    const MarkovReport r = check_markov(u, p.s, p.t, p.e, p.f, rho, {}, 1e-5);
    ok = ok && r.discrepancy <= r.error_estimate + 1e-5;
    detail += fmt("%.2g", r.discrepancy) + "<=" + fmt("%.2g", r.error_estimate + 1e-5) + " ";
  }
  return {ok, "discrepancy vs bound: " + detail};
}

// Shared by the current-average and moment criteria.
struct CurrentRuns {
  bool ran = false;
  bool pass = false;
  std::string detail;
  bool moments_pass = true;
  std::string moments_detail;
};

CurrentRuns& current_runs() {
  static CurrentRuns runs;
  return runs;
}

Outcome current_average() {
  CurrentRuns& runs = current_runs();
  runs.ran = true;
  runs.pass = true;
  const Unraveling u = unravel(models::driven_atom());
  const DensityMatrix rho = stationary_state(u.generator);
  const double analytic = nonexclusive_density(u, rho, {0.0}) * kGamma.l1_norm();
  const double tau = 1e4;
  const std::vector<double> pair_times{0.0, 0.5};
  const double burn = minimal_burn_in(kGamma);
  const std::vector<DensityMatrix> starts = {kGround, kExcited, DensityMatrix::maximally_mixed(2)};
  const char* names[] = {"ground", "excited", "mixed"};
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const DetectionRecord w = sample_record(u, starts[i], tau + pair_times.back(), {600 + i, 0});
    const TimeAverage one = time_average_current_product(w, kGamma, {0.0}, tau);
    const TimeAverage two = time_average_current_product(w, kGamma, pair_times, tau);
    const auto records =
        sample_stationary_records(u, rho, pair_times, 20000, {700 + i, 0}, burn, {});
    const MeanEstimate ens = ensemble_expectation_product(records, kGamma, pair_times, burn);
    const double z1 = std::abs(one.value - analytic) / one.std_error;
    const double z2 = z_score(two.value, two.std_error, ens.mean, ens.std_error);
    runs.pass = runs.pass && z1 <= 3.0 && z2 <= 3.0;
    runs.detail += std::string(names[i]) + ": z1=" + fmt("%.2f", z1) + " z2=" + fmt("%.2f", z2) + "; ";
    for (int n = 1; n <= 3; ++n) {
      const MeanEstimate m = ensemble_expectation_product(records, kGamma, std::vector<double>(n, 0.0), burn);
      const double bound = moment_bound(n, u.jump_norms[0], kGamma);
      runs.moments_pass = runs.moments_pass && m.mean <= bound;
      if (i == 0) {
        runs.moments_detail += "E(I^" + std::to_string(n) + ")=" + fmt("%.3g", m.mean) + "<=" +
                               fmt("%.4g", bound) + " ";
      }
    }
  }
  runs.detail += "analytic n=1 value " + fmt("%.5f", analytic);
  return {runs.pass, runs.detail};
}

Outcome coincidences() {
  const Unraveling u = unravel(models::driven_atom());
  const DensityMatrix rho = stationary_state(u.generator);
  const double tau = 1e4;
  const double eps = 0.1;
  const DetectionRecord w = sample_record(u, kGround, tau + 5.0 + eps, {800, 0});
  const TimeAverage avg = coincidence_time_average(w, {0.0, 5.0}, eps, tau);
  const QuadratureValue q = gn_box_integral(u, rho, {0.0, 5.0}, eps);
  const double z = std::abs(avg.value - q.value) / avg.std_error;
  const TimeAverage equal = equal_time_pair_average(w, eps, tau);
  const double ratio = equal.value / avg.value;
  return {z <= 3.0 && ratio < 0.05, "time average " + fmt("%.6f", avg.value) + " vs box integral " +
                                        fmt("%.6f", q.value) + " (z=" + fmt("%.2f", z) +
                                        "), equal-time/separated = " + fmt("%.4f", ratio) + " (< 0.05)"};
}

Outcome subset_sums() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_clicks = gen() % 13;
    std::vector<Click> clicks;
    for (std::size_t j = 0; j < n_clicks; ++j) clicks.push_back({4.0 * unif(gen), 1});
    std::sort(clicks.begin(), clicks.end(), [](const Click& a, const Click& b) { return a.time < b.time; });
    const std::size_t n = 1 + gen() % 3;
    const double eps = 0.1 + 0.4 * unif(gen);
    std::vector<double> times;
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      times.push_back(t);
      t += eps + 0.01 + unif(gen);
    }
    const auto r = subset_sum_identity_check(DetectionRecord(5.0, clicks), times, eps);
    if (!r.equal) ++failures;
  }
  return {failures == 0, std::to_string(1000 - failures) + "/1000 fuzzed records exact"};
}

Outcome moments() {
  const CurrentRuns& runs = current_runs();
  if (!runs.ran) return {false, "ensemble runs of the current criterion did not execute"};
  return {runs.moments_pass, runs.moments_detail + "(all three ensembles)"};
}

Outcome discrete_time() {
  const KrausFamily fam(models::amplitude_damping_kraus(0.3));
  const ChiSquareResult chi = outcome_frequency_test(fam, kExcited, 3, 100000, 900);
  const WindowFunction f = [](std::span<const int> w) { return w[0] == 2 ? 1.0 : 0.0; };
  const DiscreteAverage avg = discrete_time_average(fam, kExcited, f, 1, 1000000, {901, 0});
  const double diff = std::abs(avg.time_average - avg.stationary_expectation);
  const bool average_ok = diff <= 3.0 * avg.std_error || diff == 0.0;
  bool rejected = false;
  try {
    kraus_fixed_point(KrausFamily(models::projective_kraus()));
  } catch (const NonUniqueEquilibriumError&) {
    rejected = true;
  }
  return {chi.p_value > 0.001 && average_ok && rejected,
          "chi2 p=" + fmt("%.3g", chi.p_value) + ", time average " + fmt("%.3g", avg.time_average) +
              " vs " + fmt("%.3g", avg.stationary_expectation) + " (se " + fmt("%.2g", avg.std_error) +
              "), projective family " + (rejected ? "rejected" : "accepted")};
}

Outcome determinism() {
  auto c = cli::load_config(std::filesystem::path(ERGODIC_CONFIG_DIR) / "driven_atom.json");
  c.tau = 500.0;
  c.n_traj = 300;
  const auto base = std::filesystem::temp_directory_path() / "ergodic_acceptance_determinism";
  std::filesystem::remove_all(base);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"simulate", ""}, {"correlate", "current"}, {"correlate", "coincidence"},
      {"verify", "waiting-time"}, {"verify", "moment-bound"}};
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const auto& [cmd, topic] : runs) {
    const auto a = cli::run(c, cmd, topic, base / (cmd + topic) / "t1", 1);
    const auto b = cli::run(c, cmd, topic, base / (cmd + topic) / "t8", 8);
    if (a.files.size() != b.files.size()) return {false, cmd + " produced different file sets"};
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      std::ifstream fa(a.files[i], std::ios::binary);
      std::ifstream fb(b.files[i], std::ios::binary);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      ++compared;
      if (sa.str() != sb.str()) ++differing;
    }
  }
  std::filesystem::remove_all(base);
  return {differing == 0, std::to_string(compared) + " files compared at 1 vs 8 threads, " +
                              std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "generator normalisation", 1.0, normalisation},
      {2, "unraveling identity", 0.0, splitting},
      {3, "sure event reproduces the semigroup", 30.0, sure_event},
      {4, "first-click waiting-time law", 30.0, waiting_time},
      {5, "Markov property of the operation measure", 120.0, markov},
      {6, "current time averages", 300.0, current_average},
      {7, "coincidence time averages and antibunching", 300.0, coincidences},
      {8, "subset-sum identity", 5.0, subset_sums},
      {9, "moment bound", 0.0, moments},
      {10, "discrete-time Kraus measurement", 60.0, discrete_time},
      {11, "determinism across thread counts", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit == 0.0 || secs < c.time_limit;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s [%2d] %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs,
                in_time ? "" : (" exceeds " + fmt("%.0f", c.time_limit) + " s").c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
