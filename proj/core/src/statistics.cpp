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

#include "ergodic/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "ergodic/errors.hpp"

namespace ergodic {

MeanEstimate mean_with_error(std::span<const double> values) {
  MeanEstimate est;
  est.samples = values.size();
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double n = static_cast<double>(values.size());
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

double block_bootstrap_std_error(std::span<const double> values, std::size_t block_size,
                                 int resamples, std::uint64_t seed) {
  if (block_size == 0) throw DomainError("bootstrap block size must be positive");
  const std::size_t blocks = values.size() / block_size;
  if (blocks < 2) throw DomainError("series too short for two bootstrap blocks");
  std::vector<double> block_means(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < block_size; ++i) sum += values[b * block_size + i];
    block_means[b] = sum / static_cast<double>(block_size);
  }
  std::mt19937_64 engine(seed);
  std::vector<double> replicate_means(static_cast<std::size_t>(resamples));
  for (auto& m : replicate_means) {
    double sum = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) sum += block_means[engine() % blocks];
    m = sum / static_cast<double>(blocks);
  }
  return mean_with_error(replicate_means).std_error *
         std::sqrt(static_cast<double>(replicate_means.size()));
}

double batch_means_std_error(std::span<const double> values, std::size_t batches) {
  if (batches < 2 || values.size() < batches) throw DomainError("not enough values for batches");
  const std::size_t size = values.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) sum += values[b * size + i];
    means[b] = sum / static_cast<double>(size);
  }
  return mean_with_error(means).std_error;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::isinf(samples[i])) break;
    const double f = cdf(samples[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i + 1) / n - f),
                      std::abs(f - static_cast<double>(i) / n)});
  }
  return worst;
}

ChiSquareResult chi_square_test(std::span<const std::size_t> observed,
                                std::span<const double> expected_probability) {
  if (observed.size() != expected_probability.size()) throw DomainError("cell count mismatch");
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult result;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = expected_probability[i] * total;
    if (expected_probability[i] <= 1e-15) {
      if (observed[i] != 0) {
        result.statistic = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        return result;
      }
      continue;
    }
    const double diff = static_cast<double>(observed[i]) - expected;
    result.statistic += diff * diff / expected;
    ++cells;
  }
  result.degrees_of_freedom = std::max(0, cells - 1);
  if (result.degrees_of_freedom == 0) {
    result.p_value = 1.0;
    return result;
  }
  const boost::math::chi_squared dist(result.degrees_of_freedom);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

double z_score(double a, double se_a, double b, double se_b) {
  const double diff = std::abs(a - b);
  const double se = std::sqrt(se_a * se_a + se_b * se_b);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

}  // namespace ergodic
