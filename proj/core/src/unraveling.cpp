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

#include "ergodic/unraveling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ergodic/errors.hpp"
#include "quadrature.hpp"

namespace ergodic {

Superoperator Unraveling::total_jump() const {
  Superoperator sum = Superoperator::zero(dim());
  for (const auto& j : jumps) sum = sum + j;
  return sum;
}

double Unraveling::splitting_residual() const {
  return max_abs(generator.matrix() - (no_click + total_jump()).matrix());
}

Unraveling unravel(const LindbladModel& model) {
  Superoperator generator = build_generator(model);
  const Index d = model.dim();
  Superoperator jump_sum = Superoperator::zero(d);
  std::vector<Superoperator> jumps;
  std::vector<double> norms;
  ComplexOperator rate = ComplexOperator::Zero(d, d);
  for (const auto& v : model.jump_operators) {
    jumps.push_back(Superoperator::sandwich(v, v.adjoint()));
    jump_sum = jump_sum + jumps.back();
    const double s = spectral_norm(v);
    norms.push_back(s * s);
    rate += v.adjoint() * v;
  }
  Superoperator no_click = generator - jump_sum;
  return {std::move(generator), std::move(no_click), std::move(jumps), std::move(norms),
          spectral_norm(rate)};
}

void ClickPattern::validate(int detector_count, double horizon) const {
  if (detectors.size() != times.size()) {
    throw DomainError("click pattern needs one detector per time");
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0)) throw DomainError("click times must be nonnegative");
    if (j > 0 && times[j] < times[j - 1]) throw DomainError("click times must be sorted");
    if (times[j] > horizon) throw DomainError("click time beyond the evaluation time");
    if (detectors[j] < 1 || detectors[j] > detector_count) {
      throw DomainError("detector index " + std::to_string(detectors[j]) + " out of range");
    }
  }
}

void CylinderEvent::validate(int detector_count, double horizon) const {
  if (detectors.size() != boxes.size()) throw DomainError("cylinder event needs one detector per box");
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    const Interval& b = boxes[j];
    if (!(b.lo >= 0.0) || !(b.hi >= b.lo) || b.hi > horizon) {
      std::ostringstream msg;
      msg << "box [" << b.lo << ", " << b.hi << "] is not inside [0, " << horizon << "]";
      throw DomainError(msg.str());
    }
    if (j > 0 && b.lo < boxes[j - 1].hi) throw DomainError("boxes must be ordered and disjoint");
    if (detectors[j] < 1 || detectors[j] > detector_count) {
      throw DomainError("detector index " + std::to_string(detectors[j]) + " out of range");
    }
  }
}

DensityMatrix conditional_state(const Unraveling& u, const ClickPattern& pattern, double t,
                                const DensityMatrix& rho) {
  if (!(t >= 0.0)) throw DomainError("evaluation time must be nonnegative");
  pattern.validate(u.detectors(), t);
  ComplexVector state = vectorize(rho.op());
  double last = 0.0;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    state = propagate(u.no_click, pattern.times[j] - last).apply(state);
    state = u.jumps[static_cast<std::size_t>(pattern.detectors[j] - 1)].apply(state);
    last = pattern.times[j];
  }
  state = propagate(u.no_click, t - last).apply(state);
  return DensityMatrix::unnormalized(hermitian_part(unvectorize(state, u.dim())));
}

double exclusive_density(const Unraveling& u, const ClickPattern& pattern, double t,
                         const DensityMatrix& rho) {
  return std::max(0.0, conditional_state(u, pattern, t, rho).trace());
}

namespace {

using detail::GaussRule;
using detail::gauss_legendre;

// Collocation data on the reference interval: Gauss nodes plus the matrix
// integrating the Lagrange interpolant from -1 to each node.
struct Collocation {
  GaussRule rule;
  Eigen::MatrixXd partial;  // partial(q, r) = int_{-1}^{x_q} l_r

  explicit Collocation(int n) : rule(gauss_legendre(n)), partial(n, n) {
    const auto& x = rule.nodes;
    const auto& w = rule.weights;
    auto lagrange = [&](int r, double xi) {
      double value = 1.0;
      for (int m = 0; m < n; ++m) {
        if (m != r) value *= (xi - x[static_cast<std::size_t>(m)]) /
                             (x[static_cast<std::size_t>(r)] - x[static_cast<std::size_t>(m)]);
      }
      return value;
    };
    for (int q = 0; q < n; ++q) {
      const double half = 0.5 * (x[static_cast<std::size_t>(q)] + 1.0);
      for (int r = 0; r < n; ++r) {
        double sum = 0.0;
        for (int p = 0; p < n; ++p) {
          const double xi = -1.0 + half * (x[static_cast<std::size_t>(p)] + 1.0);
          sum += w[static_cast<std::size_t>(p)] * lagrange(r, xi);
        }
        partial(q, r) = half * sum;
      }
    }
  }
};

// exp(s L0) J exp(-s L0) turned around: F(s) = exp(-s L0) J exp(s L0) at the
// nodes of one segment of length h, plus exp(h L0).
struct Segment {
  double length;
  ComplexOperator end_propagator;
  std::vector<ComplexOperator> kernel;
  std::vector<double> weights;  // physical Gauss weights
  Eigen::MatrixXd partial;      // physical partial integration matrix
};

Segment make_segment(const ComplexOperator& no_click, const ComplexOperator& jump, double h,
                     const Collocation& c) {
  const int n = static_cast<int>(c.rule.nodes.size());
  Segment seg{h, expm(h * no_click), {}, {}, 0.5 * h * c.partial};
  seg.kernel.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const double s = 0.5 * h * (c.rule.nodes[static_cast<std::size_t>(r)] + 1.0);
    seg.kernel.push_back(expm(-s * no_click) * jump * expm(s * no_click));
    seg.weights.push_back(0.5 * h * c.rule.weights[static_cast<std::size_t>(r)]);
  }
  return seg;
}

enum class PieceKind { kExclusiveGap, kFreeGap, kBox };

struct Piece {
  PieceKind kind;
  double length;
  int detector;
};

using Plan = std::vector<Piece>;

void append(Plan& plan, Piece piece) {
  if (piece.length <= 0.0 && piece.kind != PieceKind::kBox) return;
  if (!plan.empty() && piece.kind != PieceKind::kBox && plan.back().kind == piece.kind) {
    plan.back().length += piece.length;
    return;
  }
  plan.push_back(piece);
}

Plan make_plan(const CylinderEvent& e, double horizon) {
  const PieceKind gap = e.exact ? PieceKind::kExclusiveGap : PieceKind::kFreeGap;
  Plan plan;
  double cursor = 0.0;
  for (std::size_t j = 0; j < e.boxes.size(); ++j) {
    append(plan, {gap, e.boxes[j].lo - cursor, 0});
    append(plan, {PieceKind::kBox, e.boxes[j].length(), e.detectors[j]});
    cursor = e.boxes[j].hi;
  }
  append(plan, {gap, horizon - cursor, 0});
  return plan;
}

Plan concat(const Plan& first, const Plan& second) {
  Plan out = first;
  for (const Piece& p : second) append(out, p);
  return out;
}

int box_count(const Plan& plan) {
  return static_cast<int>(std::count_if(plan.begin(), plan.end(),
                                        [](const Piece& p) { return p.kind == PieceKind::kBox; }));
}

bool has_free_gap(const Plan& plan) {
  return std::any_of(plan.begin(), plan.end(),
                     [](const Piece& p) { return p.kind == PieceKind::kFreeGap; });
}

using Orders = std::vector<ComplexVector>;

// Dyson terms through one segment of an unrestricted gap. In the interaction
// picture z_n(s) = v_n + int_0^s F(u) z_{n-1}(u) du, with z_{n-1} represented
// by its values at the nodes.
void advance_free(Orders& v, const Segment& seg) {
  const std::size_t q_count = seg.kernel.size();
  std::vector<ComplexVector> previous(q_count);
  std::vector<ComplexVector> current(q_count);
  std::vector<ComplexVector> source(q_count);
  for (std::size_t n = 0; n < v.size(); ++n) {
    ComplexVector end = v[n];
    if (n == 0) {
      for (std::size_t q = 0; q < q_count; ++q) current[q] = v[0];
    } else {
      for (std::size_t r = 0; r < q_count; ++r) source[r] = seg.kernel[r] * previous[r];
      for (std::size_t q = 0; q < q_count; ++q) {
        ComplexVector z = v[n];
        for (std::size_t r = 0; r < q_count; ++r) {
          z += seg.partial(static_cast<Index>(q), static_cast<Index>(r)) * source[r];
        }
        current[q] = std::move(z);
      }
      for (std::size_t r = 0; r < q_count; ++r) end += seg.weights[r] * source[r];
    }
    v[n] = seg.end_propagator * end;
    std::swap(previous, current);
  }
}

// Exactly one click of the box's detector inside the box: applies
// int_a^b exp((b-s) L0) J_i exp((s-a) L0) ds to one vector, segment by segment.
ComplexVector apply_box(const ComplexVector& in, const std::vector<Segment>& segments) {
  ComplexVector none = in;
  ComplexVector one = ComplexVector::Zero(in.size());
  for (const Segment& seg : segments) {
    ComplexVector inner = one;
    for (std::size_t r = 0; r < seg.kernel.size(); ++r) {
      inner += seg.weights[r] * (seg.kernel[r] * none);
    }
    one = seg.end_propagator * inner;
    none = seg.end_propagator * none;
  }
  return one;
}

std::vector<Segment> split(const ComplexOperator& no_click, const ComplexOperator& jump,
                           double length, double max_segment, const Collocation& c) {
  const int count = std::max(1, static_cast<int>(std::ceil(length / max_segment - 1e-12)));
  const Segment seg = make_segment(no_click, jump, length / count, c);
  return std::vector<Segment>(static_cast<std::size_t>(count), seg);
}

// Order-resolved image of rho under the plan, keeping total click numbers
// 0..max_order.
Orders evaluate(const Unraveling& u, const Plan& plan, const ComplexVector& rho, int nodes,
                double max_segment, int max_order) {
  const Collocation c(nodes);
  const ComplexOperator& l0 = u.no_click.matrix();
  const ComplexOperator jump_sum = u.total_jump().matrix();
  Orders v(static_cast<std::size_t>(max_order + 1), ComplexVector::Zero(rho.size()));
  v[0] = rho;
  for (const Piece& piece : plan) {
    switch (piece.kind) {
      case PieceKind::kExclusiveGap: {
        const ComplexOperator p = expm(piece.length * l0);
        for (auto& x : v) x = p * x;
        break;
      }
      case PieceKind::kFreeGap: {
        const auto segments = split(l0, jump_sum, piece.length, max_segment, c);
        for (const Segment& seg : segments) advance_free(v, seg);
        break;
      }
      case PieceKind::kBox: {
        if (piece.length == 0.0) {
          // A click in a degenerate box has probability zero.
          for (auto& x : v) x.setZero();
          break;
        }
        const ComplexOperator& ji =
            u.jumps[static_cast<std::size_t>(piece.detector - 1)].matrix();
        const auto segments = split(l0, ji, piece.length, max_segment, c);
        for (std::size_t n = v.size() - 1; n >= 1; --n) v[n] = apply_box(v[n - 1], segments);
        v[0].setZero();
        break;
      }
    }
  }
  return v;
}

ComplexOperator sum_orders(const Orders& v, Index dim) {
  ComplexVector total = ComplexVector::Zero(v.front().size());
  for (const auto& x : v) total += x;
  return unvectorize(total, dim);
}

double series_tail(double x, int n_max) {
  // sum_{n > n_max} x^n / n!
  double term = 1.0;
  for (int n = 1; n <= n_max + 1; ++n) term *= x / n;
  double sum = 0.0;
  for (int n = n_max + 1; n < n_max + 400 && term > 1e-300; ++n) {
    sum += term;
    term *= x / (n + 1);
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

struct RawMeasure {
  ComplexOperator state;
  double quadrature_error;
  double truncation_error;
  double series_tail_bound;
};

RawMeasure measure_plan(const Unraveling& u, const Plan& plan, double horizon,
                        const ComplexOperator& rho, const QuadratureControls& quad) {
  if (quad.nodes < 1 || quad.reference_nodes < 1 || quad.n_max < 0 || !(quad.max_segment > 0.0)) {
    throw DomainError("invalid quadrature controls");
  }
  const ComplexVector start = vectorize(rho);
  const int max_order = quad.n_max + box_count(plan);
  const ComplexOperator coarse =
      sum_orders(evaluate(u, plan, start, quad.nodes, quad.max_segment, max_order), u.dim());
  const ComplexOperator fine = sum_orders(
      evaluate(u, plan, start, quad.reference_nodes, quad.max_segment, max_order), u.dim());

  double truncation = 0.0;
  if (has_free_gap(plan)) {
    const Plan everything{{PieceKind::kFreeGap, horizon, 0}};
    const ComplexOperator kept = sum_orders(
        evaluate(u, everything, start, quad.reference_nodes, quad.max_segment, quad.n_max),
        u.dim());
    truncation = std::max(0.0, rho.trace().real() - kept.trace().real());
  }
  return {hermitian_part(fine), max_abs(fine - coarse), truncation,
          has_free_gap(plan) ? series_tail(u.total_jump_norm * horizon, quad.n_max) : 0.0};
}

MeasureResult finish(RawMeasure raw, const QuadratureControls& quad) {
  const double bound = raw.quadrature_error + raw.truncation_error;
  if (bound > quad.tolerance) {
    std::ostringstream msg;
    msg << "Dyson expansion with n_max = " << quad.n_max << " reached error bound " << bound
        << " above tolerance " << quad.tolerance;
    throw AccuracyError(bound, msg.str());
  }
  // Clip rounding-level negative eigenvalues through the unnormalised check.
  return {DensityMatrix::unnormalized(raw.state), raw.quadrature_error, raw.truncation_error,
          raw.series_tail_bound};
}

}  // namespace

MeasureResult operation_measure(const Unraveling& u, const CylinderEvent& event, double t,
                                const DensityMatrix& rho, const QuadratureControls& quad) {
  if (!(t >= 0.0)) throw DomainError("evaluation time must be nonnegative");
  event.validate(u.detectors(), t);
  return finish(measure_plan(u, make_plan(event, t), t, rho.op(), quad), quad);
}

double probability(const Unraveling& u, const CylinderEvent& event, double t,
                   const DensityMatrix& rho, const QuadratureControls& quad) {
  const double p = operation_measure(u, event, t, rho, quad).state.trace();
  return std::clamp(p, 0.0, 1.0);
}

MarkovReport check_markov(const Unraveling& u, double s, double t, const CylinderEvent& e,
                          const CylinderEvent& f, const DensityMatrix& rho,
                          const QuadratureControls& quad, double margin) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("markov check needs s, t >= 0");
  e.validate(u.detectors(), s);
  f.validate(u.detectors(), t);
  const Plan plan_e = make_plan(e, s);
  const Plan plan_f = make_plan(f, t);

  const RawMeasure joint = measure_plan(u, concat(plan_f, plan_e), s + t, rho.op(), quad);
  const RawMeasure inner = measure_plan(u, plan_f, t, rho.op(), quad);
  const RawMeasure outer = measure_plan(u, plan_e, s, inner.state, quad);

  MarkovReport report;
  report.joint = joint.state;
  report.composed = outer.state;
  report.discrepancy = max_abs(joint.state - outer.state);
  report.error_estimate = joint.quadrature_error + joint.truncation_error +
                          inner.quadrature_error + inner.truncation_error +
                          outer.quadrature_error + outer.truncation_error;
  report.passed = report.discrepancy <= report.error_estimate + margin;
  return report;
}

}  // namespace ergodic
