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

#include <functional>
#include <span>
#include <vector>

#include "ergodic/lindblad.hpp"
#include "ergodic/statistics.hpp"
#include "ergodic/trajectory.hpp"

namespace ergodic {

/// Repeated Kraus measurement: outcome i maps rho to a_i rho a_i^dag.
/// Outcomes are numbered 1..k.
class KrausFamily {
 public:
  /// Throws InvalidModelError unless sum_i a_i^dag a_i = 1 to 1e-10.
  explicit KrausFamily(std::vector<ComplexOperator> ops);

  Index dim() const noexcept { return dim_; }
  int outcomes() const noexcept { return static_cast<int>(ops_.size()); }
  const std::vector<ComplexOperator>& ops() const noexcept { return ops_; }

  /// T(rho) = sum_i a_i rho a_i^dag.
  Superoperator channel() const;

 private:
  Index dim_;
  std::vector<ComplexOperator> ops_;
};

struct OutcomeSequence {
  std::vector<int> outcomes;

  std::size_t size() const noexcept { return outcomes.size(); }
};

/// tr(a_{i_m} ... a_{i_1} theta a_{i_1}^dag ... a_{i_m}^dag).
double sequence_probability(const KrausFamily& family, const DensityMatrix& theta,
                            const OutcomeSequence& sequence);

/// All k^m sequences of length m in lexicographic order.
std::vector<OutcomeSequence> enumerate_sequences(int outcomes, int length);

OutcomeSequence sample_outcomes(const KrausFamily& family, const DensityMatrix& theta,
                                std::size_t length, const RngStream& rng);

/// Unique fixed point of T, from the null space of T - id. Throws
/// NonUniqueEquilibriumError otherwise.
DensityMatrix kraus_fixed_point(const KrausFamily& family);

using WindowFunction = std::function<double(std::span<const int>)>;

struct DiscreteAverage {
  /// (1/n) sum_j f(i_j .. i_{j+w-1}) along one sampled sequence.
  double time_average = 0.0;
  /// Batch-means standard error of the time average.
  double std_error = 0.0;
  /// sum over length-w sequences of f(seq) P_fix(seq).
  double stationary_expectation = 0.0;
  std::size_t windows = 0;
};

/// Ergodic average of a window statistic along one sequence of n_steps
/// outcomes started from theta, with its stationary counterpart.
DiscreteAverage discrete_time_average(const KrausFamily& family, const DensityMatrix& theta,
                                      const WindowFunction& f, int window, std::size_t n_steps,
                                      const RngStream& rng);

/// Counts of n_samples sampled length-m sequences per cell, cells in the
/// order of enumerate_sequences. Sample s uses stream (seed, s).
std::vector<std::size_t> outcome_counts(const KrausFamily& family, const DensityMatrix& theta,
                                        int length, std::size_t n_samples, std::uint64_t seed,
                                        unsigned threads = 1);

/// Chi-square comparison of n_samples sampled length-m sequences with
/// sequence_probability over all k^m cells.
ChiSquareResult outcome_frequency_test(const KrausFamily& family, const DensityMatrix& theta,
                                       int length, std::size_t n_samples, std::uint64_t seed,
                                       unsigned threads = 1);

}  // namespace ergodic
