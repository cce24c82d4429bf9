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

#include <vector>

#include "ergodic/lindblad.hpp"

namespace ergodic {

/// Splitting L = L0 + sum_i J_i of a Lindblad generator into the no-click
/// evolution L0 and the click channels J_i(rho) = V_i rho V_i^dag.
/// Detectors are numbered 1..k throughout the library.
struct Unraveling {
  Superoperator generator;
  Superoperator no_click;
  std::vector<Superoperator> jumps;
  /// ||J_i|| as a map on trace class: the squared largest singular value of V_i.
  std::vector<double> jump_norms;
  /// Norm of the summed jump map, ||sum_i V_i^dag V_i||.
  double total_jump_norm = 0.0;

  Index dim() const noexcept { return generator.dim(); }
  int detectors() const noexcept { return static_cast<int>(jumps.size()); }
  Superoperator total_jump() const;
  /// max |L - (L0 + sum J_i)| entrywise.
  double splitting_residual() const;
};

Unraveling unravel(const LindbladModel& model);

/// Clicks at times t_1 <= ... <= t_n from detectors i_1..i_n.
struct ClickPattern {
  std::vector<double> times;
  std::vector<int> detectors;

  std::size_t size() const noexcept { return times.size(); }
  /// Throws DomainError unless times are sorted, nonnegative, <= horizon and
  /// detector indices lie in 1..k.
  void validate(int detector_count, double horizon) const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
};

/// An event decidable by time t, built from disjoint ordered boxes.
///
/// Each box requires exactly one click inside it, from the listed detector,
/// and no other click inside the box. With `exact` set the record has no
/// clicks outside the boxes either; without it the gaps are unrestricted.
/// Zero boxes give "no clicks at all" (exact) or the sure event (not exact).
struct CylinderEvent {
  std::vector<Interval> boxes;
  std::vector<int> detectors;
  bool exact = false;

  static CylinderEvent sure() { return {}; }
  static CylinderEvent no_clicks() { return {{}, {}, true}; }
  static CylinderEvent single_click(Interval box, int detector = 1, bool exact = false) {
    return {{box}, {detector}, exact};
  }

  /// Throws DomainError unless the boxes are ordered, disjoint, inside
  /// [0, horizon] and their detectors lie in 1..k.
  void validate(int detector_count, double horizon) const;
};

struct QuadratureControls {
  /// Gauss-Legendre nodes per segment for the reported result's companion;
  /// the result itself uses `reference_nodes`.
  int nodes = 16;
  int reference_nodes = 32;
  double max_segment = 0.5;
  /// Highest total click number kept in the Dyson sum.
  int n_max = 8;
  /// Upper limit on truncation + quadrature error before AccuracyError.
  double tolerance = 1e-6;
};

struct MeasureResult {
  DensityMatrix state;
  /// max entry difference between the `nodes` and `reference_nodes` runs.
  double quadrature_error = 0.0;
  /// Trace of the discarded Dyson orders of the unrestricted process, a bound
  /// on the trace norm of the discarded part of this event's operation.
  double truncation_error = 0.0;
  /// Prior bound sum_{n > n_max} (||J|| t)^n / n!.
  double series_tail_bound = 0.0;

  double error_estimate() const noexcept { return quadrature_error + truncation_error; }
};

/// exp((t - t_n) L0) J_{i_n} ... J_{i_1} exp(t_1 L0)(rho), unnormalised.
DensityMatrix conditional_state(const Unraveling& u, const ClickPattern& pattern, double t,
                                const DensityMatrix& rho);

/// Exclusive density f^t(pattern): the trace of the conditional state, clamped at 0.
double exclusive_density(const Unraveling& u, const ClickPattern& pattern, double t,
                         const DensityMatrix& rho);

/// M_t(E)(rho) by the Dyson expansion restricted to E: exponentials of L0 on
/// exclusive gaps, nested Gauss-Legendre quadrature for the click integrals
/// in boxes and in unrestricted gaps. Throws AccuracyError when the error
/// estimate exceeds quad.tolerance.
MeasureResult operation_measure(const Unraveling& u, const CylinderEvent& event, double t,
                                const DensityMatrix& rho, const QuadratureControls& quad = {});

/// P_rho^t(E) = tr M_t(E)(rho), clamped to [0, 1] (scaled by tr rho).
double probability(const Unraveling& u, const CylinderEvent& event, double t,
                   const DensityMatrix& rho, const QuadratureControls& quad = {});

struct MarkovReport {
  /// M_{s+t}(F and shifted E)(rho)
  ComplexOperator joint;
  /// M_s(E)(M_t(F)(rho))
  ComplexOperator composed;
  double discrepancy = 0.0;
  double error_estimate = 0.0;
  bool passed = false;
};

/// Compares both sides of M_{s+t}(F cap sigma_t^{-1} E) = M_s(E) o M_t(F)
/// on rho, where E is decidable by s and F by t. Passes when the entrywise
/// discrepancy is within the combined error estimate plus `margin`.
MarkovReport check_markov(const Unraveling& u, double s, double t, const CylinderEvent& e,
                          const CylinderEvent& f, const DensityMatrix& rho,
                          const QuadratureControls& quad = {}, double margin = 1e-6);

}  // namespace ergodic
