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
#include <vector>

#include "ergodic/statistics.hpp"
#include "ergodic/trajectory.hpp"
#include "ergodic/unraveling.hpp"

namespace ergodic {

/// Causal detector response gamma: zero for t < 0, bounded and integrable.
class ResponseFunction {
 public:
  enum class Kind { kExponential, kRectangular };

  /// gamma(t) = A exp(-t / decay_time) for t >= 0.
  static ResponseFunction exponential(double amplitude, double decay_time);
  /// gamma(t) = A for 0 <= t < width.
  static ResponseFunction rectangular(double amplitude, double width);

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  /// Decay time or width.
  double scale() const noexcept { return scale_; }

  double operator()(double t) const;
  double sup_norm() const noexcept { return amplitude_; }
  double l1_norm() const noexcept { return amplitude_ * scale_; }
  /// int_B^inf gamma(t) dt.
  double tail_mass(double b) const;
  /// max(1, ||gamma||_inf)
  double moment_scale() const noexcept { return amplitude_ > 1.0 ? amplitude_ : 1.0; }
  /// phi(s) = sum_j gamma(t_j - s), the envelope used by the moment bound.
  double envelope(const std::vector<double>& times, double s) const;

 private:
  ResponseFunction(Kind kind, double amplitude, double scale);

  Kind kind_;
  double amplitude_;
  double scale_;
};

/// Controls for time averages along one record.
struct TimeAverageOptions {
  double dt_int = 0.005;
  /// Bootstrap block length in time units.
  double block_length = 50.0;
  int resamples = 200;
  std::uint64_t bootstrap_seed = 0x5eedb007u;
};

struct TimeAverage {
  double value = 0.0;
  /// |trapezoid(dt_int) - trapezoid(2 dt_int)|
  double integration_error = 0.0;
  /// Block bootstrap standard error.
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// I_t(omega) = sum_{s in omega} gamma(t - s), summed exactly over the clicks.
double current(const DetectionRecord& omega, const ResponseFunction& gamma, double t);

/// I at start, start + step, ..., exactly up to rounding (recursive for the
/// exponential kernel, sliding window for the rectangular one).
std::vector<double> current_on_grid(const DetectionRecord& omega, const ResponseFunction& gamma,
                                    double start, double step, std::size_t count);

/// (1/tau) int_0^tau I_{t_1+t} ... I_{t_n+t} dt along one record. Throws
/// DomainError if the record ends before t_n + tau.
TimeAverage time_average_current_product(const DetectionRecord& omega,
                                         const ResponseFunction& gamma,
                                         const std::vector<double>& times, double tau,
                                         const TimeAverageOptions& options = {});

/// g_n(t_1..t_n) = tr(J T_{t_n - t_{n-1}} J ... T_{t_2 - t_1} J rho) for a
/// single-detector unraveling and a stationary rho. Clamped at 0.
double nonexclusive_density(const Unraveling& u, const DensityMatrix& rho,
                            const std::vector<double>& times);

/// Extension to several detectors: J_{i_j} at each time in place of J.
double nonexclusive_density(const Unraveling& u, const DensityMatrix& rho,
                            const std::vector<double>& times, const std::vector<int>& detectors);

/// Minimal burn-in B with gamma tail mass beyond B <= 1e-6 ||gamma||_1.
double minimal_burn_in(const ResponseFunction& gamma);

/// Samples n_traj records started in rho_ss at time -burn_in and running to
/// max(times); the returned records are in that shifted time frame (click
/// time s corresponds to physical time s - burn_in).
std::vector<DetectionRecord> sample_stationary_records(const Unraveling& u,
                                                       const DensityMatrix& rho_ss,
                                                       const std::vector<double>& times,
                                                       std::size_t n_traj, const RngStream& rng,
                                                       double burn_in,
                                                       const SamplingOptions& options,
                                                       unsigned threads = 1);

/// Ensemble estimate of E~(I_{t_1} ... I_{t_n}) from records made by
/// sample_stationary_records. Throws ConfigError if burn_in is too short for
/// gamma's tail.
MeanEstimate ensemble_expectation_product(const std::vector<DetectionRecord>& records,
                                          const ResponseFunction& gamma,
                                          const std::vector<double>& times, double burn_in);

/// Samples the records and evaluates the product in one call.
MeanEstimate ensemble_expectation_product(const Unraveling& u, const DensityMatrix& rho_ss,
                                          const ResponseFunction& gamma,
                                          const std::vector<double>& times, std::size_t n_traj,
                                          const RngStream& rng, double burn_in,
                                          const SamplingOptions& options = {},
                                          unsigned threads = 1);

/// (1/tau) int_0^tau prod_j N_[t_j + t, t_j + t + eps](omega) dt.
TimeAverage coincidence_time_average(const DetectionRecord& omega,
                                     const std::vector<double>& times, double epsilon,
                                     double tau, const TimeAverageOptions& options = {});

/// (1/tau) int_0^tau N(N - 1) dt with N = N_[t, t + eps]: ordered pairs of
/// distinct clicks sharing one window (the equal-time coincidence rate).
TimeAverage equal_time_pair_average(const DetectionRecord& omega, double epsilon, double tau,
                                    const TimeAverageOptions& options = {});

struct QuadratureValue {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// int over the boxes [t_j, t_j + eps] of g_n by tensor-product
/// Gauss-Legendre; the error estimate compares `nodes` with 2 * `nodes`.
/// Requires eps smaller than every gap t_{j+1} - t_j.
QuadratureValue gn_box_integral(const Unraveling& u, const DensityMatrix& rho_ss,
                                const std::vector<double>& times, double epsilon,
                                int nodes = 16);

struct SubsetSumCheck {
  bool equal = false;
  std::uint64_t subset_sum = 0;
  std::uint64_t count_product = 0;
};

/// Enumerates all subsets alpha of the click times and compares
/// sum_alpha K(alpha), K = [alpha has exactly one point in each box], with
/// prod_j N_[t_j, t_j + eps]. At most 20 clicks.
SubsetSumCheck subset_sum_identity_check(const DetectionRecord& omega,
                                         const std::vector<double>& times, double epsilon);

/// M^n n^(n+1) exp(n ||J|| ||gamma||_1) with M = max(1, ||gamma||_inf).
double moment_bound(int n, double jump_norm, const ResponseFunction& gamma);

struct AutocorrelationSpectrum {
  double mean_current = 0.0;
  std::vector<double> lags;
  /// Time average of I_t I_{t+lag} minus the squared mean current.
  std::vector<double> autocovariance;
  std::vector<double> frequencies;
  /// One-sided power 2 int_0^T C(lag) cos(2 pi f lag) d lag by the
  /// trapezoidal cosine transform (DCT-I) of the tabulated lags.
  std::vector<double> power;
};

/// `lags` must be a uniform grid starting at 0 with at least two entries.
AutocorrelationSpectrum current_autocorrelation_spectrum(const DetectionRecord& omega,
                                                         const ResponseFunction& gamma,
                                                         const std::vector<double>& lags,
                                                         double tau,
                                                         const TimeAverageOptions& options = {});

}  // namespace ergodic
