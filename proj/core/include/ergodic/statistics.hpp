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
#include <functional>
#include <span>
#include <vector>

namespace ergodic {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Sample mean and standard error from the unbiased sample variance.
MeanEstimate mean_with_error(std::span<const double> values);

/// Standard error of the mean of an autocorrelated series by the
/// non-overlapping block bootstrap: blocks of `block_size` consecutive values
/// are resampled with replacement `resamples` times.
double block_bootstrap_std_error(std::span<const double> values, std::size_t block_size,
                                 int resamples, std::uint64_t seed);

/// Standard error from the spread of `batches` consecutive batch means.
double batch_means_std_error(std::span<const double> values, std::size_t batches);

/// sup_x |F_n(x) - F(x)| for samples (sorted internally). Samples equal to
/// +infinity count as censored: they enter n but never the empirical steps.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson test of observed counts against expected probabilities. Cells
/// with zero expectation must be empty; otherwise the p-value is 0.
ChiSquareResult chi_square_test(std::span<const std::size_t> observed,
                                std::span<const double> expected_probability);

/// Number of standard errors separating two independent estimates.
double z_score(double a, double se_a, double b, double se_b);

}  // namespace ergodic
