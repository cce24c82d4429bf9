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

#include "ergodic/kraus.hpp"

#include <cmath>
#include <sstream>

#include "ergodic/errors.hpp"
#include "ergodic/parallel.hpp"

namespace ergodic {

KrausFamily::KrausFamily(std::vector<ComplexOperator> ops) : dim_(0), ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidModelError("a Kraus family needs at least one operator");
  dim_ = ops_.front().rows();
  if (dim_ < 1 || dim_ > kMaxDimension) throw InvalidModelError("Kraus dimension out of range");
  ComplexOperator sum = ComplexOperator::Zero(dim_, dim_);
  for (const auto& a : ops_) {
    if (a.rows() != dim_ || a.cols() != dim_) {
      throw InvalidModelError("Kraus operators must share one square dimension");
    }
    if (!all_finite(a)) throw InvalidModelError("Kraus operator has non-finite entries");
    sum += a.adjoint() * a;
  }
  const double defect = max_abs(sum - ComplexOperator::Identity(dim_, dim_));
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "Kraus operators are not complete: |sum a^dag a - 1| = " << defect;
    throw InvalidModelError(msg.str());
  }
}

Superoperator KrausFamily::channel() const {
  Superoperator t = Superoperator::zero(dim_);
  for (const auto& a : ops_) t = t + Superoperator::sandwich(a, a.adjoint());
  return t;
}

double sequence_probability(const KrausFamily& family, const DensityMatrix& theta,
                            const OutcomeSequence& sequence) {
  if (theta.dim() != family.dim()) throw DomainError("state dimension mismatch");
  ComplexOperator rho = theta.op();
  for (int i : sequence.outcomes) {
    if (i < 1 || i > family.outcomes()) {
      throw DomainError("outcome " + std::to_string(i) + " out of range");
    }
    const auto& a = family.ops()[static_cast<std::size_t>(i - 1)];
    rho = a * rho * a.adjoint();
  }
  return std::clamp(rho.trace().real(), 0.0, 1.0);
}

std::vector<OutcomeSequence> enumerate_sequences(int outcomes, int length) {
  if (outcomes < 1 || length < 0) throw DomainError("invalid enumeration size");
  std::vector<OutcomeSequence> all;
  std::vector<int> current(static_cast<std::size_t>(length), 1);
  while (true) {
    all.push_back({current});
    int pos = length - 1;
    while (pos >= 0 && current[static_cast<std::size_t>(pos)] == outcomes) {
      current[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
  }
  return all;
}

namespace {

// Draws outcomes into `out` starting from the normalised theta.
void draw_outcomes(const KrausFamily& family, const DensityMatrix& theta, std::size_t length,
                   std::mt19937_64& engine, std::vector<int>& out) {
  const auto& ops = family.ops();
  std::vector<ComplexOperator> effects;
  for (const auto& a : ops) effects.push_back(a.adjoint() * a);
  ComplexOperator rho = theta.op() / theta.trace();
  std::vector<double> p(ops.size());
  out.resize(length);
  for (std::size_t step = 0; step < length; ++step) {
    double total = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      p[i] = std::max(0.0, (effects[i] * rho).trace().real());
      total += p[i];
    }
    const double pick = uniform_closed_open(engine) * total;
    std::size_t chosen = ops.size() - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      cumulative += p[i];
      if (pick < cumulative) {
        chosen = i;
        break;
      }
    }
    rho = ops[chosen] * rho * ops[chosen].adjoint();
    const double norm = rho.trace().real();
    if (!(norm > 1e-300)) throw NumericalError("post-measurement state underflow");
    rho /= norm;
    out[step] = static_cast<int>(chosen) + 1;
  }
}

}  // namespace

OutcomeSequence sample_outcomes(const KrausFamily& family, const DensityMatrix& theta,
                                std::size_t length, const RngStream& rng) {
  if (theta.dim() != family.dim()) throw DomainError("state dimension mismatch");
  if (!(theta.trace() > 0.0)) throw DomainError("initial state has zero trace");
  std::mt19937_64 engine = rng.engine();
  OutcomeSequence seq;
  draw_outcomes(family, theta, length, engine, seq.outcomes);
  return seq;
}

DensityMatrix kraus_fixed_point(const KrausFamily& family) {
  return stationary_state(family.channel() - Superoperator::identity(family.dim()));
}

DiscreteAverage discrete_time_average(const KrausFamily& family, const DensityMatrix& theta,
                                      const WindowFunction& f, int window, std::size_t n_steps,
                                      const RngStream& rng) {
  if (window < 1) throw DomainError("window length must be positive");
  if (n_steps < static_cast<std::size_t>(window)) throw DomainError("sequence shorter than window");
  const DensityMatrix fixed = kraus_fixed_point(family);

  DiscreteAverage result;
  for (const auto& seq : enumerate_sequences(family.outcomes(), window)) {
    const double p = sequence_probability(family, fixed, seq);
    if (p > 0.0) result.stationary_expectation += p * f(seq.outcomes);
  }

  const OutcomeSequence path = sample_outcomes(family, theta, n_steps, rng);
  const std::size_t windows = n_steps - static_cast<std::size_t>(window) + 1;
  std::vector<double> values(windows);
  const std::span<const int> all(path.outcomes);
  for (std::size_t j = 0; j < windows; ++j) {
    values[j] = f(all.subspan(j, static_cast<std::size_t>(window)));
  }
  const MeanEstimate mean = mean_with_error(values);
  result.time_average = mean.mean;
  result.windows = windows;
  result.std_error = windows >= 200 ? batch_means_std_error(values, 100) : mean.std_error;
  return result;
}

std::vector<std::size_t> outcome_counts(const KrausFamily& family, const DensityMatrix& theta,
                                        int length, std::size_t n_samples, std::uint64_t seed,
                                        unsigned threads) {
  if (length < 1) throw DomainError("sequence length must be positive");
  const auto k = static_cast<std::size_t>(family.outcomes());
  std::vector<std::size_t> cell_of(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t s) {
    const OutcomeSequence seq =
        sample_outcomes(family, theta, static_cast<std::size_t>(length), {seed, s});
    std::size_t index = 0;
    for (int i : seq.outcomes) index = index * k + static_cast<std::size_t>(i - 1);
    cell_of[s] = index;
  });
  std::size_t cells = 1;
  for (int j = 0; j < length; ++j) cells *= k;
  std::vector<std::size_t> observed(cells, 0);
  for (std::size_t c : cell_of) ++observed[c];
  return observed;
}

ChiSquareResult outcome_frequency_test(const KrausFamily& family, const DensityMatrix& theta,
                                       int length, std::size_t n_samples, std::uint64_t seed,
                                       unsigned threads) {
  const auto observed = outcome_counts(family, theta, length, n_samples, seed, threads);
  std::vector<double> expected;
  expected.reserve(observed.size());
  for (const auto& seq : enumerate_sequences(family.outcomes(), length)) {
    expected.push_back(sequence_probability(family, theta, seq));
  }
  return chi_square_test(observed, expected);
}

}  // namespace ergodic
