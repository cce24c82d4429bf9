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

#include "ergodic/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ergodic/errors.hpp"
#include "ergodic/parallel.hpp"

namespace ergodic {

DetectionRecord::DetectionRecord(double horizon, std::vector<Click> clicks)
    : horizon_(horizon), clicks_(std::move(clicks)) {
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    throw DomainError("record horizon must be finite and nonnegative");
  }
  for (std::size_t j = 0; j < clicks_.size(); ++j) {
    const double t = clicks_[j].time;
    if (!(t >= 0.0) || t > horizon_) throw DomainError("click time outside [0, horizon]");
    if (j > 0 && t < clicks_[j - 1].time) throw DomainError("click times must be sorted");
    if (clicks_[j].detector < 1) throw DomainError("detector indices start at 1");
  }
}

std::vector<double> DetectionRecord::times() const {
  std::vector<double> out;
  out.reserve(clicks_.size());
  for (const Click& c : clicks_) out.push_back(c.time);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 RngStream::engine() const {
  return std::mt19937_64(splitmix64(master_seed ^ splitmix64(stream_index)));
}

double uniform_open_closed(std::mt19937_64& engine) {
  return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
}

double uniform_closed_open(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

TrajectorySampler::TrajectorySampler(const Unraveling& u, SamplingOptions options)
    : dim_(u.dim()),
      options_(options),
      no_click_(u.no_click.matrix()),
      step_propagator_(),
      no_click_norm_(0.0) {
  if (!(options_.dt > 0.0)) throw DomainError("time step must be positive");
  if (!(options_.time_tolerance > 0.0)) throw DomainError("time tolerance must be positive");
  step_propagator_ = expm(options_.dt * no_click_);
  for (const auto& j : u.jumps) {
    jumps_.push_back(j.matrix());
    jump_traces_.push_back(j.trace_functional());
  }
  no_click_norm_ = no_click_.cwiseAbs().colwise().sum().maxCoeff();
}

double TrajectorySampler::survival_crossing(const ComplexVector& start, double step,
                                            double target,
                                            ComplexVector& state_at_crossing) const {
  const double tol = options_.time_tolerance;
  if (step * no_click_norm_ > 4.0) {
    // Large steps: bisect with full exponentials.
    double lo = 0.0;
    double hi = step;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double s = vectorized_trace(expm(mid * no_click_) * start, dim_).real();
      (s > target ? lo : hi) = mid;
    }
    state_at_crossing = expm(hi * no_click_) * start;
    return hi;
  }
  // exp(tau L0) start = sum_k tau^k w_k with w_k = L0^k start / k!.
  std::vector<ComplexVector> terms{start};
  std::vector<double> trace_coeff{vectorized_trace(start, dim_).real()};
  double scale = 1.0;
  for (int k = 1; k < 60; ++k) {
    terms.push_back(no_click_ * terms.back() / static_cast<double>(k));
    trace_coeff.push_back(vectorized_trace(terms.back(), dim_).real());
    scale *= step * no_click_norm_ / k;
    if (scale < 1e-18) break;
  }
  auto survival = [&](double tau) {
    double s = 0.0;
    for (auto it = trace_coeff.rbegin(); it != trace_coeff.rend(); ++it) s = s * tau + *it;
    return s;
  };
  double lo = 0.0;
  double hi = step;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (survival(mid) > target ? lo : hi) = mid;
  }
  state_at_crossing = terms.back();
  for (std::size_t k = terms.size() - 1; k-- > 0;) state_at_crossing = state_at_crossing * hi + terms[k];
  return hi;
}

DetectionRecord TrajectorySampler::sample(const DensityMatrix& rho0, double horizon,
                                          const RngStream& rng) const {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  if (options_.dt >= horizon) throw DomainError("time step must be smaller than the horizon");
  if (rho0.dim() != dim_) throw DomainError("initial state dimension mismatch");
  const double tr0 = rho0.trace();
  if (!(tr0 > 0.0)) throw DomainError("initial state has zero trace");

  std::mt19937_64 engine = rng.engine();
  ComplexVector state = vectorize(rho0.op()) / tr0;
  ComplexVector next(state.size());
  ComplexVector at_click(state.size());
  std::vector<Click> clicks;
  double t = 0.0;
  double target = uniform_open_closed(engine);

  while (t < horizon) {
    const double step = std::min(options_.dt, horizon - t);
    if (step == options_.dt) {
      next.noalias() = step_propagator_ * state;
    } else {
      next.noalias() = expm(step * no_click_) * state;
    }
    const double survival = vectorized_trace(next, dim_).real();
    if (survival > target) {
      if (survival < 1e-300) throw NumericalError("conditional state trace underflow");
      state.swap(next);
      t += step;
      continue;
    }
    const double tau = survival_crossing(state, step, target, at_click);
    const double click_time = std::min(t + tau, horizon);

    double total = 0.0;
    std::vector<double> weights(jumps_.size());
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      weights[i] = std::max(0.0, (jump_traces_[i] * at_click)(0).real());
      total += weights[i];
    }
    if (!(total > 0.0)) throw NumericalError("survival crossed with zero jump rate");
    const double pick = uniform_closed_open(engine) * total;
    std::size_t chosen = jumps_.size() - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      cumulative += weights[i];
      if (pick < cumulative) {
        chosen = i;
        break;
      }
    }
    state.noalias() = jumps_[chosen] * at_click;
    const double norm = vectorized_trace(state, dim_).real();
    if (!(norm > 1e-300)) throw NumericalError("post-click state trace underflow");
    state /= norm;
    clicks.push_back({click_time, static_cast<int>(chosen) + 1});
    t = click_time;
    target = uniform_open_closed(engine);
    if (options_.stop_after_clicks != 0 && clicks.size() >= options_.stop_after_clicks) {
      return DetectionRecord(click_time, std::move(clicks));
    }
  }
  return DetectionRecord(horizon, std::move(clicks));
}

DetectionRecord sample_record(const Unraveling& u, const DensityMatrix& rho0, double horizon,
                              const RngStream& rng, double dt) {
  SamplingOptions options;
  options.dt = dt;
  return TrajectorySampler(u, options).sample(rho0, horizon, rng);
}

std::vector<DetectionRecord> sample_ensemble(const Unraveling& u, const DensityMatrix& rho0,
                                             double horizon, std::uint64_t master_seed,
                                             std::size_t count, const SamplingOptions& options,
                                             unsigned threads, std::uint64_t first_stream) {
  const TrajectorySampler sampler(u, options);
  std::vector<DetectionRecord> records(count);
  parallel_for(count, threads, [&](std::size_t i) {
    records[i] = sampler.sample(rho0, horizon, {master_seed, first_stream + i});
  });
  return records;
}

DetectionRecord shift_record(const DetectionRecord& omega, double t) {
  if (!(t >= 0.0)) throw DomainError("shift must be nonnegative");
  if (t > omega.horizon()) return DetectionRecord(0.0, {});
  std::vector<Click> kept;
  for (const Click& c : omega.clicks()) {
    if (c.time > t) kept.push_back({c.time - t, c.detector});
  }
  const double horizon = omega.horizon() - t;
  for (Click& c : kept) c.time = std::min(c.time, horizon);
  return DetectionRecord(horizon, std::move(kept));
}

std::size_t count_in_interval(const DetectionRecord& omega, double a, double b) {
  if (b < a) return 0;
  const auto& clicks = omega.clicks();
  const auto first = std::lower_bound(clicks.begin(), clicks.end(), a,
                                      [](const Click& c, double x) { return c.time < x; });
  const auto last = std::upper_bound(clicks.begin(), clicks.end(), b,
                                     [](double x, const Click& c) { return x < c.time; });
  return last > first ? static_cast<std::size_t>(last - first) : 0;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_record_csv(std::ostream& out, const DetectionRecord& omega, const RngStream& rng,
                      const std::vector<std::string>& extra_header) {
  out << "# horizon=" << format_double(omega.horizon()) << " seed=" << rng.master_seed
      << " stream=" << rng.stream_index << '\n';
  for (const auto& line : extra_header) out << "# " << line << '\n';
  out << "time,detector\n";
  for (const Click& c : omega.clicks()) out << format_double(c.time) << ',' << c.detector << '\n';
}

ParsedRecord read_record_csv(std::istream& in) {
  std::string line;
  bool have_header = false;
  double horizon = 0.0;
  RngStream rng;
  std::vector<Click> clicks;
  while (std::getline(in, line)) {
    if (line.empty() || line == "time,detector") continue;
    if (line[0] == '#') {
      if (have_header) continue;
      std::istringstream fields(line.substr(1));
      std::string token;
      bool found_horizon = false;
      while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "horizon") {
          horizon = std::strtod(value.c_str(), nullptr);
          found_horizon = true;
        } else if (key == "seed") {
          rng.master_seed = std::stoull(value);
        } else if (key == "stream") {
          rng.stream_index = std::stoull(value);
        }
      }
      have_header = found_horizon;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("malformed record line: " + line);
    clicks.push_back({std::strtod(line.substr(0, comma).c_str(), nullptr),
                      std::stoi(line.substr(comma + 1))});
  }
  if (!have_header) throw DomainError("record file lacks a '# horizon=' header");
  return {DetectionRecord(horizon, std::move(clicks)), rng};
}

}  // namespace ergodic
