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

#include "ergodic/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>

#include "ergodic/errors.hpp"
#include "quadrature.hpp"

namespace ergodic {

ResponseFunction::ResponseFunction(Kind kind, double amplitude, double scale)
    : kind_(kind), amplitude_(amplitude), scale_(scale) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("response amplitude must be finite and nonnegative");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("response time scale must be finite and positive");
  }
}

ResponseFunction ResponseFunction::exponential(double amplitude, double decay_time) {
  return {Kind::kExponential, amplitude, decay_time};
}

ResponseFunction ResponseFunction::rectangular(double amplitude, double width) {
  return {Kind::kRectangular, amplitude, width};
}

double ResponseFunction::operator()(double t) const {
  if (t < 0.0) return 0.0;
  if (kind_ == Kind::kExponential) return amplitude_ * std::exp(-t / scale_);
  return t < scale_ ? amplitude_ : 0.0;
}

double ResponseFunction::tail_mass(double b) const {
  b = std::max(b, 0.0);
  if (kind_ == Kind::kExponential) return amplitude_ * scale_ * std::exp(-b / scale_);
  return amplitude_ * std::max(0.0, scale_ - b);
}

double ResponseFunction::envelope(const std::vector<double>& times, double s) const {
  double sum = 0.0;
  for (double t : times) sum += (*this)(t - s);
  return sum;
}

double current(const DetectionRecord& omega, const ResponseFunction& gamma, double t) {
  double sum = 0.0;
  for (const Click& c : omega.clicks()) {
    if (c.time > t) break;
    sum += gamma(t - c.time);
  }
  return sum;
}

std::vector<double> current_on_grid(const DetectionRecord& omega, const ResponseFunction& gamma,
                                    double start, double step, std::size_t count) {
  std::vector<double> out(count);
  if (count == 0) return out;
  const auto& clicks = omega.clicks();
  if (gamma.kind() == ResponseFunction::Kind::kExponential) {
    const double a = gamma.amplitude();
    const double tau = gamma.scale();
    const double decay = std::exp(-step / tau);
    double value = current(omega, gamma, start);
    std::size_t next = static_cast<std::size_t>(
        std::upper_bound(clicks.begin(), clicks.end(), start,
                         [](double x, const Click& c) { return x < c.time; }) -
        clicks.begin());
    out[0] = value;
    for (std::size_t m = 1; m < count; ++m) {
      const double t = start + static_cast<double>(m) * step;
      value *= decay;
      while (next < clicks.size() && clicks[next].time <= t) {
        value += a * std::exp(-(t - clicks[next].time) / tau);
        ++next;
      }
      out[m] = value;
    }
    return out;
  }
  // Rectangular: A * #{s : t - w < s <= t}.
  const double w = gamma.scale();
  std::size_t upto = 0;   // clicks with time <= t
  std::size_t before = 0; // clicks with time <= t - w
  for (std::size_t m = 0; m < count; ++m) {
    const double t = start + static_cast<double>(m) * step;
    while (upto < clicks.size() && clicks[upto].time <= t) ++upto;
    while (before < clicks.size() && clicks[before].time <= t - w) ++before;
    out[m] = gamma.amplitude() * static_cast<double>(upto - before);
  }
  return out;
}

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw DomainError("at least one time is required");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0)) throw DomainError("times must be nonnegative");
    if (j > 0 && times[j] < times[j - 1]) throw DomainError("times must be sorted");
  }
}

struct Grid {
  std::size_t intervals;
  double step;
};

Grid make_grid(double tau, double dt_int) {
  if (!(tau > 0.0)) throw DomainError("averaging window must be positive");
  if (!(dt_int > 0.0)) throw DomainError("integration step must be positive");
  auto m = static_cast<std::size_t>(std::llround(tau / dt_int));
  m = std::max<std::size_t>(m, 2);
  if (m % 2 == 1) ++m;
  return {m, tau / static_cast<double>(m)};
}

void require_horizon(const DetectionRecord& omega, double needed) {
  if (omega.horizon() < needed * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "record horizon " << omega.horizon() << " shorter than the required " << needed;
    throw DomainError(msg.str());
  }
}

// Trapezoid mean of samples on a uniform grid, with the step-halving
// comparison and a block bootstrap error.
TimeAverage summarize(const std::vector<double>& values, const Grid& grid,
                      const TimeAverageOptions& options) {
  const std::size_t m = grid.intervals;
  TimeAverage avg;
  double fine = 0.0;
  for (double v : values) fine += v;
  fine -= 0.5 * (values.front() + values.back());
  fine /= static_cast<double>(m);
  double coarse = 0.0;
  for (std::size_t i = 0; i <= m; i += 2) coarse += values[i];
  coarse -= 0.5 * (values.front() + values.back());
  coarse /= static_cast<double>(m / 2);
  avg.value = fine;
  avg.integration_error = std::abs(fine - coarse);
  avg.samples = values.size();

  auto block = static_cast<std::size_t>(std::llround(options.block_length / grid.step));
  block = std::clamp<std::size_t>(block, 1, std::max<std::size_t>(1, values.size() / 10));
  avg.std_error =
      block_bootstrap_std_error(values, block, options.resamples, options.bootstrap_seed);
  return avg;
}

void check_stationary(const Unraveling& u, const DensityMatrix& rho) {
  if (rho.dim() != u.dim()) throw DomainError("state dimension mismatch");
  if (max_abs(u.generator.apply(rho.op())) > 1e-8) {
    throw DomainError("non-exclusive densities require a stationary state");
  }
}

void check_burn_in(const ResponseFunction& gamma, double burn_in) {
  if (gamma.tail_mass(burn_in) > 1e-6 * gamma.l1_norm() * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "burn-in " << burn_in << " leaves response tail mass " << gamma.tail_mass(burn_in)
        << " above 1e-6 of its integral; use at least " << minimal_burn_in(gamma);
    throw ConfigError(msg.str());
  }
}

}  // namespace

TimeAverage time_average_current_product(const DetectionRecord& omega,
                                         const ResponseFunction& gamma,
                                         const std::vector<double>& times, double tau,
                                         const TimeAverageOptions& options) {
  check_times(times);
  const Grid grid = make_grid(tau, options.dt_int);
  require_horizon(omega, times.back() + tau);
  std::vector<double> product(grid.intervals + 1, 1.0);
  for (double t : times) {
    const auto values = current_on_grid(omega, gamma, t, grid.step, grid.intervals + 1);
    for (std::size_t m = 0; m < product.size(); ++m) product[m] *= values[m];
  }
  return summarize(product, grid, options);
}

double nonexclusive_density(const Unraveling& u, const DensityMatrix& rho,
                            const std::vector<double>& times) {
  if (u.detectors() != 1) {
    throw DomainError("single-detector densities need k = 1; pass per-click detectors instead");
  }
  return nonexclusive_density(u, rho, times, std::vector<int>(times.size(), 1));
}

double nonexclusive_density(const Unraveling& u, const DensityMatrix& rho,
                            const std::vector<double>& times, const std::vector<int>& detectors) {
  check_times(times);
  check_stationary(u, rho);
  if (detectors.size() != times.size()) throw DomainError("one detector per time is required");
  for (int i : detectors) {
    if (i < 1 || i > u.detectors()) throw DomainError("detector index out of range");
  }
  ComplexVector v = u.jumps[static_cast<std::size_t>(detectors[0] - 1)].apply(vectorize(rho.op()));
  for (std::size_t j = 1; j < times.size(); ++j) {
    v = propagate(u.generator, times[j] - times[j - 1]).apply(v);
    v = u.jumps[static_cast<std::size_t>(detectors[j] - 1)].apply(v);
  }
  return std::max(0.0, vectorized_trace(v, u.dim()).real());
}

double minimal_burn_in(const ResponseFunction& gamma) {
  if (gamma.amplitude() == 0.0) return 0.0;
  if (gamma.kind() == ResponseFunction::Kind::kExponential) {
    return gamma.scale() * std::log(1e6);
  }
  return gamma.scale();
}

std::vector<DetectionRecord> sample_stationary_records(const Unraveling& u,
                                                       const DensityMatrix& rho_ss,
                                                       const std::vector<double>& times,
                                                       std::size_t n_traj, const RngStream& rng,
                                                       double burn_in,
                                                       const SamplingOptions& options,
                                                       unsigned threads) {
  check_times(times);
  if (!(burn_in >= 0.0)) throw DomainError("burn-in must be nonnegative");
  const double horizon = std::max(burn_in + times.back(), 2.0 * options.dt);
  return sample_ensemble(u, rho_ss, horizon, rng.master_seed, n_traj, options, threads,
                         rng.stream_index);
}

MeanEstimate ensemble_expectation_product(const std::vector<DetectionRecord>& records,
                                          const ResponseFunction& gamma,
                                          const std::vector<double>& times, double burn_in) {
  check_times(times);
  check_burn_in(gamma, burn_in);
  std::vector<double> values;
  values.reserve(records.size());
  for (const auto& record : records) {
    require_horizon(record, burn_in + times.back());
    double product = 1.0;
    for (double t : times) product *= current(record, gamma, burn_in + t);
    values.push_back(product);
  }
  return mean_with_error(values);
}

MeanEstimate ensemble_expectation_product(const Unraveling& u, const DensityMatrix& rho_ss,
                                          const ResponseFunction& gamma,
                                          const std::vector<double>& times, std::size_t n_traj,
                                          const RngStream& rng, double burn_in,
                                          const SamplingOptions& options, unsigned threads) {
  check_burn_in(gamma, burn_in);
  const auto records =
      sample_stationary_records(u, rho_ss, times, n_traj, rng, burn_in, options, threads);
  return ensemble_expectation_product(records, gamma, times, burn_in);
}

TimeAverage coincidence_time_average(const DetectionRecord& omega,
                                     const std::vector<double>& times, double epsilon,
                                     double tau, const TimeAverageOptions& options) {
  check_times(times);
  if (!(epsilon > 0.0)) throw DomainError("box width must be positive");
  const Grid grid = make_grid(tau, options.dt_int);
  require_horizon(omega, times.back() + epsilon + tau);
  std::vector<double> product(grid.intervals + 1, 1.0);
  for (std::size_t m = 0; m <= grid.intervals; ++m) {
    const double t = static_cast<double>(m) * grid.step;
    for (double tj : times) {
      product[m] *= static_cast<double>(count_in_interval(omega, tj + t, tj + t + epsilon));
      if (product[m] == 0.0) break;
    }
  }
  return summarize(product, grid, options);
}

TimeAverage equal_time_pair_average(const DetectionRecord& omega, double epsilon, double tau,
                                    const TimeAverageOptions& options) {
  if (!(epsilon > 0.0)) throw DomainError("box width must be positive");
  const Grid grid = make_grid(tau, options.dt_int);
  require_horizon(omega, epsilon + tau);
  std::vector<double> pairs(grid.intervals + 1);
  for (std::size_t m = 0; m <= grid.intervals; ++m) {
    const double t = static_cast<double>(m) * grid.step;
    const auto n = static_cast<double>(count_in_interval(omega, t, t + epsilon));
    pairs[m] = n * (n - 1.0);
  }
  return summarize(pairs, grid, options);
}

namespace {

double box_integral(const Unraveling& u, const ComplexVector& rho, const ComplexOperator& jump,
                    const std::vector<double>& times, double epsilon, int nodes) {
  // Gauss-Legendre offsets inside each box.
  const detail::GaussRule rule = detail::gauss_legendre(nodes);
  std::vector<double> x(static_cast<std::size_t>(nodes));
  std::vector<double> w(static_cast<std::size_t>(nodes));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.5 * (rule.nodes[i] + 1.0) * epsilon;
    w[i] = 0.5 * rule.weights[i] * epsilon;
  }
  const Index d = u.dim();
  std::function<double(std::size_t, double, const ComplexVector&)> recurse =
      [&](std::size_t j, double previous, const ComplexVector& v) -> double {
    double sum = 0.0;
    for (int q = 0; q < nodes; ++q) {
      const double s = times[j] + x[static_cast<std::size_t>(q)];
      ComplexVector next =
          j == 0 ? ComplexVector(jump * v)
                 : ComplexVector(jump * (expm((s - previous) * u.generator.matrix()) * v));
      const double inner = j + 1 == times.size() ? std::max(0.0, vectorized_trace(next, d).real())
                                                 : recurse(j + 1, s, next);
      sum += w[static_cast<std::size_t>(q)] * inner;
    }
    return sum;
  };
  return recurse(0, 0.0, rho);
}

}  // namespace

QuadratureValue gn_box_integral(const Unraveling& u, const DensityMatrix& rho_ss,
                                const std::vector<double>& times, double epsilon, int nodes) {
  check_times(times);
  check_stationary(u, rho_ss);
  if (u.detectors() != 1) throw DomainError("box integrals use the single-detector densities");
  if (!(epsilon > 0.0)) throw DomainError("box width must be positive");
  if (nodes < 1) throw DomainError("need at least one quadrature node");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(epsilon < times[j] - times[j - 1])) {
      throw DomainError("box width must be below every gap between times");
    }
  }
  const ComplexVector rho = vectorize(rho_ss.op());
  const ComplexOperator& jump = u.jumps.front().matrix();
  const double coarse = box_integral(u, rho, jump, times, epsilon, nodes);
  const double fine = box_integral(u, rho, jump, times, epsilon, 2 * nodes);
  return {fine, std::abs(fine - coarse)};
}

SubsetSumCheck subset_sum_identity_check(const DetectionRecord& omega,
                                         const std::vector<double>& times, double epsilon) {
  check_times(times);
  if (omega.size() > 20) throw DomainError("subset enumeration is limited to 20 clicks");
  if (!(epsilon > 0.0)) throw DomainError("box width must be positive");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j - 1] + epsilon < times[j])) throw DomainError("boxes must be disjoint");
  }
  const auto points = omega.times();
  const std::size_t n = times.size();
  // box_of[i]: index of the box containing point i, or n when none does.
  std::vector<std::size_t> box_of(points.size(), n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (times[j] <= points[i] && points[i] <= times[j] + epsilon) box_of[i] = j;
    }
  }
  SubsetSumCheck check;
  const std::uint32_t subsets = 1u << points.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
    std::vector<int> hits(n, 0);
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; ++i) {
      if ((mask >> i & 1u) == 0) continue;
      if (box_of[i] == n || ++hits[box_of[i]] > 1) ok = false;
    }
    if (ok) ++check.subset_sum;
  }
  check.count_product = 1;
  for (double t : times) check.count_product *= count_in_interval(omega, t, t + epsilon);
  check.equal = check.subset_sum == check.count_product;
  return check;
}

double moment_bound(int n, double jump_norm, const ResponseFunction& gamma) {
  if (n < 1) throw DomainError("moment order must be positive");
  const double nn = static_cast<double>(n);
  return std::pow(gamma.moment_scale(), nn) * std::pow(nn, nn + 1.0) *
         std::exp(nn * jump_norm * gamma.l1_norm());
}

AutocorrelationSpectrum current_autocorrelation_spectrum(const DetectionRecord& omega,
                                                         const ResponseFunction& gamma,
                                                         const std::vector<double>& lags,
                                                         double tau,
                                                         const TimeAverageOptions& options) {
  if (lags.size() < 2 || lags.front() != 0.0) {
    throw DomainError("lags must start at 0 and have at least two entries");
  }
  const double spacing = lags[1];
  if (!(spacing > 0.0)) throw DomainError("lags must increase");
  for (std::size_t j = 0; j < lags.size(); ++j) {
    if (std::abs(lags[j] - static_cast<double>(j) * spacing) > 1e-9 * (1.0 + lags.back())) {
      throw DomainError("lags must form a uniform grid");
    }
  }
  const Grid grid = make_grid(tau, options.dt_int);
  require_horizon(omega, lags.back() + tau);

  AutocorrelationSpectrum out;
  out.lags = lags;
  out.mean_current = time_average_current_product(omega, gamma, {0.0}, tau, options).value;

  // Lags on the integration grid reuse one long current series.
  const double ratio = spacing / grid.step;
  const bool on_grid = std::abs(ratio - std::round(ratio)) < 1e-6;
  std::vector<double> series;
  if (on_grid) {
    const auto shift = static_cast<std::size_t>(std::llround(lags.back() / grid.step));
    series = current_on_grid(omega, gamma, 0.0, grid.step, grid.intervals + 1 + shift);
  }
  for (double lag : lags) {
    double product_mean;
    if (on_grid) {
      const auto shift = static_cast<std::size_t>(std::llround(lag / grid.step));
      double sum = 0.0;
      for (std::size_t m = 0; m <= grid.intervals; ++m) sum += series[m] * series[m + shift];
      sum -= 0.5 * (series[0] * series[shift] +
                    series[grid.intervals] * series[grid.intervals + shift]);
      product_mean = sum / static_cast<double>(grid.intervals);
    } else {
      product_mean = time_average_current_product(omega, gamma, {0.0, lag}, tau, options).value;
    }
    out.autocovariance.push_back(product_mean - out.mean_current * out.mean_current);
  }

  const std::size_t m = lags.size();
  const double last = static_cast<double>(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    out.frequencies.push_back(static_cast<double>(k) / (2.0 * last * spacing));
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double weight = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
      sum += weight * out.autocovariance[j] *
             std::cos(std::numbers::pi * static_cast<double>(j * k) / last);
    }
    out.power.push_back(2.0 * spacing * sum);
  }
  return out;
}

}  // namespace ergodic
