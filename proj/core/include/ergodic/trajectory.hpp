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
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ergodic/unraveling.hpp"

namespace ergodic {

struct Click {
  double time = 0.0;
  int detector = 1;

  friend bool operator==(const Click&, const Click&) = default;
};

/// Finite observation of the counting process on [0, horizon].
class DetectionRecord {
 public:
  DetectionRecord() = default;
  /// Throws DomainError unless 0 <= t_1 <= ... <= t_n <= horizon and
  /// detectors are >= 1.
  DetectionRecord(double horizon, std::vector<Click> clicks);

  double horizon() const noexcept { return horizon_; }
  const std::vector<Click>& clicks() const noexcept { return clicks_; }
  std::size_t size() const noexcept { return clicks_.size(); }
  bool empty() const noexcept { return clicks_.empty(); }
  std::vector<double> times() const;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;

 private:
  double horizon_ = 0.0;
  std::vector<Click> clicks_;
};

/// Reproducible random stream: (master_seed, stream_index) determines every
/// draw, independent of thread scheduling.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  std::mt19937_64 engine() const;
};

/// Uniform in (0, 1], built from the top 53 bits so the value does not depend
/// on the standard library's distribution implementation.
double uniform_open_closed(std::mt19937_64& engine);
/// Uniform in [0, 1).
double uniform_closed_open(std::mt19937_64& engine);

struct SamplingOptions {
  double dt = 0.01;
  /// Absolute tolerance of the bisection that places each click.
  double time_tolerance = 1e-10;
  /// Stop (and end the record) after this many clicks; 0 means never.
  std::size_t stop_after_clicks = 0;
};

/// Precomputed no-click propagators for repeated sampling from one unraveling.
class TrajectorySampler {
 public:
  TrajectorySampler(const Unraveling& u, SamplingOptions options);

  /// Samples a record on [0, horizon] whose law is P_rho0 restricted to that
  /// window. Throws DomainError if dt >= horizon or horizon <= 0, and
  /// NumericalError if the conditional trace underflows.
  DetectionRecord sample(const DensityMatrix& rho0, double horizon, const RngStream& rng) const;

  const SamplingOptions& options() const noexcept { return options_; }

 private:
  double survival_crossing(const ComplexVector& start, double step, double target,
                           ComplexVector& state_at_crossing) const;

  Index dim_;
  SamplingOptions options_;
  ComplexOperator no_click_;
  ComplexOperator step_propagator_;
  std::vector<ComplexOperator> jumps_;
  std::vector<Eigen::RowVectorXcd> jump_traces_;
  double no_click_norm_;
};

DetectionRecord sample_record(const Unraveling& u, const DensityMatrix& rho0, double horizon,
                              const RngStream& rng, double dt = 0.01);

/// Records for streams first_stream .. first_stream + count - 1, in stream order.
std::vector<DetectionRecord> sample_ensemble(const Unraveling& u, const DensityMatrix& rho0,
                                             double horizon, std::uint64_t master_seed,
                                             std::size_t count, const SamplingOptions& options,
                                             unsigned threads = 1,
                                             std::uint64_t first_stream = 0);

/// Clicks after t moved back by t; horizon reduced by t. t > horizon gives an
/// empty record with horizon 0. Throws DomainError for t < 0.
DetectionRecord shift_record(const DetectionRecord& omega, double t);

/// Number of clicks with a <= time <= b.
std::size_t count_in_interval(const DetectionRecord& omega, double a, double b);

/// Writes "# horizon=<T> seed=<s> stream=<i>" then one "time,detector" line
/// per click with 17 significant digits. `extra_header` lines are emitted as
/// further comments after the first line.
void write_record_csv(std::ostream& out, const DetectionRecord& omega, const RngStream& rng,
                      const std::vector<std::string>& extra_header = {});

struct ParsedRecord {
  DetectionRecord record;
  RngStream rng;
};

/// Inverse of write_record_csv; other comment lines are ignored.
ParsedRecord read_record_csv(std::istream& in);

/// Shortest-roundtrip-safe decimal rendering with 17 significant digits.
std::string format_double(double value);

}  // namespace ergodic
