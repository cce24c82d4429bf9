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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ergodic/errors.hpp"
#include "ergodic/models.hpp"
#include "ergodic/observables.hpp"
#include "support/oracles.hpp"

using namespace ergodic;

namespace {

const DensityMatrix kGround = DensityMatrix::basis_state(2, 0);
const ResponseFunction kExp = ResponseFunction::exponential(1.0, 0.5);

DetectionRecord make_record(double horizon, std::vector<double> times) {
  std::vector<Click> clicks;
  for (double t : times) clicks.push_back({t, 1});
  return {horizon, clicks};
}

const Unraveling& atom() {
  static const Unraveling u = unravel(models::driven_atom());
  return u;
}

const DensityMatrix& atom_ss() {
  static const DensityMatrix rho = stationary_state(atom().generator);
  return rho;
}

// One long driven-atom record shared by the time-average tests.
const DetectionRecord& long_record() {
  static const DetectionRecord r = sample_record(atom(), kGround, 10100.0, {2718, 0});
  return r;
}

}  // namespace

TEST_CASE("response functions") {
  CHECK(kExp(-0.1) == 0.0);
  CHECK(kExp(0.0) == 1.0);
  CHECK(kExp.l1_norm() == doctest::Approx(0.5));
  const ResponseFunction rect = ResponseFunction::rectangular(2.0, 0.3);
  CHECK(rect(0.29) == 2.0);
  CHECK(rect(0.3) == 0.0);
  CHECK(rect.l1_norm() == doctest::Approx(0.6));
  CHECK(rect.moment_scale() == 2.0);
  CHECK(kExp.tail_mass(minimal_burn_in(kExp)) <= 1e-6 * kExp.l1_norm() * (1 + 1e-9));
  CHECK_THROWS_AS(ResponseFunction::exponential(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(ResponseFunction::rectangular(-1.0, 1.0), DomainError);
}

TEST_CASE("current") {
  CHECK(current(DetectionRecord(5.0, {}), kExp, 2.0) == 0.0);
  const DetectionRecord one = make_record(5.0, {1.0});
  CHECK(std::abs(current(one, kExp, 2.0) - 0.1353352832366127) < 1e-15);
  CHECK(current(one, kExp, 0.5) == 0.0);

  const DetectionRecord& w = long_record();
  const DetectionRecord head = shift_record(w, 0.0);
  for (const auto& gamma : {kExp, ResponseFunction::rectangular(1.5, 0.7)}) {
    const auto grid = current_on_grid(head, gamma, 3.0, 0.01, 20000);
    double worst = 0.0;
    for (std::size_t m = 0; m < grid.size(); m += 7) {
      worst = std::max(worst, std::abs(grid[m] - current(head, gamma, 3.0 + 0.01 * m)));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("time_average_current_product") {
  SUBCASE("empty record") {
    CHECK(time_average_current_product(DetectionRecord(20.0, {}), kExp, {0.0}, 10.0).value == 0.0);
  }
  SUBCASE("pure decay in equilibrium never clicks") {
    const Unraveling u = unravel(models::pure_decay());
    const DetectionRecord w = sample_record(u, kGround, 200.0, {1, 1});
    CHECK(time_average_current_product(w, kExp, {0.0}, 100.0).value == 0.0);
  }
  SUBCASE("single click against the closed-form integral") {
    const double s = 3.2;
    const double tau = 10.0;
    const DetectionRecord w = make_record(tau, {s});
    const TimeAverage e = time_average_current_product(w, kExp, {0.0}, tau);
    const double expected = 0.5 * (1.0 - std::exp(-(tau - s) / 0.5)) / tau;
    // The jump of gamma at s sits on a grid point: the trapezoid overshoots by
    // half a step of height A, plus the O(dt^2) smooth-part error.
    const double dt = TimeAverageOptions{}.dt_int;
    CHECK(std::abs(e.value - expected) <= 0.5 * dt / tau + 1e-6);
    const ResponseFunction rect = ResponseFunction::rectangular(2.0, 1.0);
    const TimeAverage r = time_average_current_product(w, rect, {0.0}, tau);
    CHECK(std::abs(r.value - 2.0 / tau) < 2e-3);
  }
  SUBCASE("horizon too short") {
    CHECK_THROWS_AS(time_average_current_product(make_record(5.0, {}), kExp, {0.0, 2.0}, 4.0),
                    DomainError);
  }
  SUBCASE("driven atom mean current") {
    const double g1 = nonexclusive_density(atom(), atom_ss(), {0.0});
    const TimeAverage avg =
        time_average_current_product(shift_record(long_record(), 50.0), kExp, {0.0}, 1e4);
    CHECK(std::abs(avg.value - g1 * kExp.l1_norm()) <= 3.0 * avg.std_error);
    CHECK(avg.integration_error < avg.std_error);
  }
}

TEST_CASE("nonexclusive_density") {
  SUBCASE("pure decay in equilibrium") {
    const Unraveling u = unravel(models::pure_decay());
    CHECK(nonexclusive_density(u, kGround, {0.0}) == 0.0);
  }
  SUBCASE("driven atom") {
    const double g1 = nonexclusive_density(atom(), atom_ss(), {1.7});
    CHECK(std::abs(g1 - oracle::driven_atom_excited_population(1.0, 1.0)) < 1e-12);
    CHECK(nonexclusive_density(atom(), atom_ss(), {2.0, 2.0}) < 1e-15);
    for (double lag : {0.1, 0.5, 1.0, 3.0, 8.0}) {
      const double g2 = nonexclusive_density(atom(), atom_ss(), {1.0, 1.0 + lag});
      CHECK(std::abs(g2 / (g1 * g1) - oracle::resonance_fluorescence_g2(1.0, 1.0, lag)) < 1e-9);
    }
    const Unraveling u = unravel(models::driven_atom(2.5, 0.7));
    const DensityMatrix rho = stationary_state(u.generator);
    const double h1 = nonexclusive_density(u, rho, {0.0});
    const double h2 = nonexclusive_density(u, rho, {0.0, 1.3});
    CHECK(std::abs(h2 / (h1 * h1) - oracle::resonance_fluorescence_g2(2.5, 0.7, 1.3)) < 1e-9);
  }
  SUBCASE("bounded by powers of the jump norm") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> t(static_cast<std::size_t>(1 + trial % 4));
      for (auto& x : t) x = unif(gen);
      std::sort(t.begin(), t.end());
      const double g = nonexclusive_density(atom(), atom_ss(), t);
      CHECK(g >= 0.0);
      CHECK(g <= std::pow(atom().jump_norms[0], static_cast<double>(t.size())) + 1e-12);
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(nonexclusive_density(atom(), kGround, {0.0}), DomainError);
    const Unraveling two = unravel(models::projective_dephasing());
    CHECK_THROWS_AS(nonexclusive_density(two, DensityMatrix::maximally_mixed(2), {0.0}),
                    DomainError);
    CHECK(nonexclusive_density(two, DensityMatrix::maximally_mixed(2), {0.0, 1.0}, {1, 2}) == 0.0);
    CHECK(nonexclusive_density(two, DensityMatrix::maximally_mixed(2), {0.0, 1.0}, {2, 2}) ==
          doctest::Approx(0.5));
  }
}

TEST_CASE("click density at one time sums the exclusive densities") {
  // g_1(t_1) = f(t_1) + sum_m int f(t_1 and m further clicks) over [0, t].
  const Unraveling& u = atom();
  const DensityMatrix& rho = atom_ss();
  const double t = 2.0;
  const double t1 = 0.8;
  const int nodes = 6;
  double total = 0.0;
  for (int m = 0; m <= 4; ++m) {
    for (int before = 0; before <= m; ++before) {
      total += oracle::ordered_integral(0.0, t1, before, nodes, [&](const std::vector<double>& a) {
        return oracle::ordered_integral(t1, t, m - before, nodes, [&](const std::vector<double>& b) {
          std::vector<double> times = a;
          times.push_back(t1);
          times.insert(times.end(), b.begin(), b.end());
          return exclusive_density(u, {times, std::vector<int>(times.size(), 1)}, t, rho);
        });
      });
    }
  }
  CHECK(std::abs(total - nonexclusive_density(u, rho, {t1})) < 1e-3);
}

TEST_CASE("ensemble_expectation_product") {
  const double burn = minimal_burn_in(kExp);
  SUBCASE("zero response") {
    const ResponseFunction zero = ResponseFunction::exponential(0.0, 1.0);
    CHECK(ensemble_expectation_product(atom(), atom_ss(), zero, {1.0}, 50, {1, 0}, 0.0).mean == 0.0);
  }
  SUBCASE("mean current") {
    const MeanEstimate m =
        ensemble_expectation_product(atom(), atom_ss(), kExp, {0.0}, 20000, {3, 0}, burn);
    CHECK(std::abs(m.mean - atom().jumps[0].apply(atom_ss().op()).trace().real() * 0.5) <=
          3.0 * m.std_error);
  }
  SUBCASE("factorisation at large separation") {
    const MeanEstimate m =
        ensemble_expectation_product(atom(), atom_ss(), kExp, {0.0, 25.0}, 20000, {4, 0}, burn);
    const double g1 = 1.0 / 3.0;
    CHECK(std::abs(m.mean - g1 * g1 * 0.25) <= 3.0 * m.std_error);
  }
  SUBCASE("burn-in too short") {
    CHECK_THROWS_AS(
        ensemble_expectation_product(atom(), atom_ss(), kExp, {0.0}, 10, {1, 0}, 0.5 * burn),
        ConfigError);
  }
}

TEST_CASE("coincidences") {
  SUBCASE("empty record") {
    CHECK(coincidence_time_average(DetectionRecord(30.0, {}), {0.0, 1.0}, 0.1, 10.0).value == 0.0);
  }
  const DetectionRecord w = shift_record(long_record(), 50.0);
  const double g1 = 1.0 / 3.0;
  SUBCASE("single box measures the click rate") {
    const TimeAverage c = coincidence_time_average(w, {0.0}, 0.05, 1e4);
    CHECK(std::abs(c.value - g1 * 0.05) <= 0.1 * g1 * 0.05 + 3.0 * c.std_error);
  }
  SUBCASE("antibunching") {
    const TimeAverage equal = equal_time_pair_average(w, 0.1, 1e4);
    const TimeAverage apart = coincidence_time_average(w, {0.0, 5.0}, 0.1, 1e4);
    CHECK(equal.value < 0.05 * apart.value);
  }
  SUBCASE("coincidences match the box integral of g_2") {
    const QuadratureValue q = gn_box_integral(atom(), atom_ss(), {0.0, 5.0}, 0.1);
    const TimeAverage c = coincidence_time_average(w, {0.0, 5.0}, 0.1, 1e4);
    CHECK(std::abs(c.value - q.value) <= 3.0 * c.std_error);
  }
}

TEST_CASE("gn_box_integral") {
  SUBCASE("one box of a constant density") {
    const QuadratureValue q = gn_box_integral(atom(), atom_ss(), {2.0}, 0.3);
    CHECK(std::abs(q.value - 0.3 / 3.0) < 1e-14);
  }
  SUBCASE("two boxes against the closed form") {
    const oracle::Rule rule = oracle::golub_welsch(30);
    const double eps = 0.4;
    double expected = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      for (std::size_t j = 0; j < rule.x.size(); ++j) {
        const double lag = 2.0 + eps * (rule.x[j] - rule.x[i]);
        expected += eps * eps * rule.w[i] * rule.w[j] *
                    oracle::resonance_fluorescence_g2(1.0, 1.0, lag) / 9.0;
      }
    }
    const QuadratureValue q = gn_box_integral(atom(), atom_ss(), {0.0, 2.0}, eps);
    CHECK(std::abs(q.value - expected) < 1e-12);
    CHECK(q.error_estimate < 1e-12);
  }
  SUBCASE("small boxes approach the point density") {
    const std::vector<double> times{0.0, 1.2, 2.0};
    const double g3 = nonexclusive_density(atom(), atom_ss(), times);
    std::vector<double> gaps;
    for (double eps : {0.1, 0.05, 0.025}) {
      const double ratio = gn_box_integral(atom(), atom_ss(), times, eps).value / std::pow(eps, 3);
      gaps.push_back(std::abs(ratio - g3));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
    // g_n depends on time differences only, so the first-order terms of the
    // box average cancel and the gap shrinks like eps^2.
    CHECK(gaps[2] / gaps[1] == doctest::Approx(0.25).epsilon(0.1));
  }
  SUBCASE("boxes must not overlap") {
    CHECK_THROWS_AS(gn_box_integral(atom(), atom_ss(), {0.0, 0.05}, 0.1), DomainError);
  }
}

TEST_CASE("subset_sum_identity_check") {
  const auto one = subset_sum_identity_check(make_record(1.0, {0.5}), {0.4}, 0.2);
  CHECK(one.equal);
  CHECK(one.subset_sum == 1);
  const auto two = subset_sum_identity_check(make_record(1.0, {0.45, 0.55}), {0.4}, 0.2);
  CHECK(two.equal);
  CHECK(two.count_product == 2);

  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  int passed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> clicks(static_cast<std::size_t>(gen() % 13));
    for (auto& c : clicks) c = unif(gen);
    std::sort(clicks.begin(), clicks.end());
    const std::size_t n = 1 + gen() % 3;
    const double eps = 0.2 + 0.6 * unif(gen) / 4.0;
    std::vector<double> times;
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      times.push_back(t);
      t += eps + 0.01 + unif(gen) / 4.0;
    }
    const auto r = subset_sum_identity_check(make_record(5.0, clicks), times, eps);
    // Brute force: product of the box counts.
    std::uint64_t product = 1;
    for (double tj : times) {
      product *= static_cast<std::uint64_t>(
          std::count_if(clicks.begin(), clicks.end(), [&](double c) { return c >= tj && c <= tj + eps; }));
    }
    if (r.equal && r.count_product == product && r.subset_sum == product) ++passed;
  }
  CHECK(passed == 1000);
}

TEST_CASE("moment_bound") {
  CHECK(std::abs(moment_bound(1, 1.0, kExp) - std::exp(0.5)) < 1e-14);
  const ResponseFunction zero = ResponseFunction::exponential(0.0, 1.0);
  CHECK(moment_bound(2, 1.0, zero) == doctest::Approx(8.0));
  CHECK(moment_bound(3, 1.0, zero) == doctest::Approx(81.0));
  CHECK_THROWS_AS(moment_bound(0, 1.0, kExp), DomainError);

  const double burn = minimal_burn_in(kExp);
  const auto records =
      sample_stationary_records(atom(), atom_ss(), {0.0}, 5000, {9, 0}, burn, {});
  for (int n = 1; n <= 3; ++n) {
    const MeanEstimate m =
        ensemble_expectation_product(records, kExp, std::vector<double>(n, 0.0), burn);
    CHECK(m.mean <= moment_bound(n, atom().jump_norms[0], kExp));
  }
}

TEST_CASE("current_autocorrelation_spectrum") {
  std::vector<double> lags;
  for (int j = 0; j <= 40; ++j) lags.push_back(0.5 * j);
  SUBCASE("empty record") {
    const auto s = current_autocorrelation_spectrum(DetectionRecord(200.0, {}), kExp, lags, 100.0);
    for (double c : s.autocovariance) CHECK(c == 0.0);
    for (double p : s.power) CHECK(p == 0.0);
  }
  const DetectionRecord w = shift_record(long_record(), 50.0);
  const auto s = current_autocorrelation_spectrum(w, kExp, lags, 5000.0);
  SUBCASE("zero lag is the second moment") {
    const double second = time_average_current_product(w, kExp, {0.0, 0.0}, 5000.0).value;
    CHECK(std::abs(s.autocovariance[0] + s.mean_current * s.mean_current - second) < 1e-12);
  }
  SUBCASE("long lags decorrelate") {
    const TimeAverage at20 = time_average_current_product(w, kExp, {0.0, 20.0}, 5000.0);
    CHECK(std::abs(s.autocovariance.back()) <= 3.0 * at20.std_error + 1e-3);
  }
  SUBCASE("off-grid lags agree with the direct product") {
    const std::vector<double> odd{0.0, 0.3333, 0.6666};
    const auto t = current_autocorrelation_spectrum(w, kExp, odd, 1000.0);
    const double direct =
        time_average_current_product(w, kExp, {0.0, 0.3333}, 1000.0).value - t.mean_current * t.mean_current;
    CHECK(std::abs(t.autocovariance[1] - direct) < 1e-12);
  }
  SUBCASE("zero frequency is twice the integrated autocovariance") {
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < lags.size(); ++j) {
      integral += 0.25 * (s.autocovariance[j] + s.autocovariance[j + 1]);
    }
    CHECK(std::abs(s.power[0] - 2.0 * integral) < 1e-12);
    CHECK(s.frequencies[1] == doctest::Approx(1.0 / (2.0 * 20.0)));
  }
  SUBCASE("non-uniform lags") {
    CHECK_THROWS_AS(current_autocorrelation_spectrum(w, kExp, {0.0, 1.0, 3.0}, 100.0), DomainError);
  }
}
