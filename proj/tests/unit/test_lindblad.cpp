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

#include <doctest.h>

#include <cmath>

#include "ergodic/errors.hpp"
#include "ergodic/lindblad.hpp"
#include "ergodic/model_io.hpp"
#include "ergodic/models.hpp"
#include "support/oracles.hpp"

using namespace ergodic;

namespace {

LindbladModel random_model(Index d, int k, std::uint64_t seed) {
  ComplexOperator h = random_complex(d, d, seed);
  h = hermitian_part(h);
  std::vector<ComplexOperator> jumps;
  for (int i = 0; i < k; ++i) jumps.push_back(0.5 * random_complex(d, d, seed * 31 + i + 1));
  return {h, jumps};
}

}  // namespace

TEST_CASE("expm matches closed forms") {
  ComplexOperator rot = ComplexOperator::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  const ComplexOperator e = expm(1.3 * rot);
  CHECK(std::abs(e(0, 0) - std::cos(1.3)) < 1e-14);
  CHECK(std::abs(e(1, 0) - std::sin(1.3)) < 1e-14);

  // Large norm forces several squarings.
  ComplexOperator diag = ComplexOperator::Zero(3, 3);
  diag(0, 0) = -20.0;
  diag(1, 1) = 3.0;
  diag(2, 2) = Complex(0.0, 7.0);
  const ComplexOperator ed = expm(diag);
  CHECK(std::abs(ed(0, 0) / std::exp(-20.0) - 1.0) < 1e-12);
  CHECK(std::abs(ed(1, 1) / std::exp(3.0) - 1.0) < 1e-12);
  CHECK(std::abs(ed(2, 2) - std::exp(Complex(0.0, 7.0))) < 1e-12);
}

TEST_CASE("vectorisation convention") {
  const ComplexOperator a = random_complex(3, 3, 1);
  const ComplexOperator x = random_complex(3, 3, 2);
  const ComplexOperator b = random_complex(3, 3, 3);
  const ComplexVector lhs = vectorize(a * x * b);
  const ComplexVector rhs = kron(b.transpose(), a) * vectorize(x);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("build_generator examples") {
  SUBCASE("zero model gives the zero superoperator") {
    const LindbladModel zero{ComplexOperator::Zero(2, 2), {ComplexOperator::Zero(2, 2)}};
    CHECK(max_abs(build_generator(zero).matrix()) == 0.0);
  }
  SUBCASE("decay of the excited state") {
    // sigma_- |e><e| sigma_+ - 1/2 {sigma_+ sigma_-, |e><e|} = |g><g| - |e><e|
    const Superoperator l = build_generator(models::pure_decay());
    const ComplexOperator out = l.apply(DensityMatrix::basis_state(2, 1).op());
    ComplexOperator expected = ComplexOperator::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = -1.0;
    CHECK(max_abs(out - expected) < 1e-15);
  }
  SUBCASE("trace annihilation on random states") {
    const Superoperator l = build_generator(models::driven_atom());
    for (std::uint64_t s = 0; s < 50; ++s) {
      CHECK(std::abs(l.apply(random_density(2, s)).trace()) < 1e-10);
    }
    CHECK(l.preserves_trace(1e-12) == false);  // a generator maps tr to 0, not tr
    CHECK(max_abs(l.trace_functional()) < 1e-14);
  }
  SUBCASE("non-hermitian hamiltonian is rejected") {
    LindbladModel bad = models::pure_decay();
    bad.hamiltonian(0, 1) = 1.0;
    CHECK_THROWS_AS(build_generator(bad), InvalidModelError);
  }
  SUBCASE("dimension limit and k >= 1") {
    LindbladModel none{ComplexOperator::Zero(2, 2), {}};
    CHECK_THROWS_AS(none.validate(), InvalidModelError);
    LindbladModel huge{ComplexOperator::Zero(65, 65), {ComplexOperator::Zero(65, 65)}};
    CHECK_THROWS_AS(huge.validate(), InvalidModelError);
  }
  SUBCASE("d = 1 is accepted") {
    LindbladModel one{ComplexOperator::Constant(1, 1, 0.3), {ComplexOperator::Constant(1, 1, 2.0)}};
    const Superoperator l = build_generator(one);
    CHECK(max_abs(l.matrix()) < 1e-15);
    CHECK(std::abs(stationary_state(l).op()(0, 0) - 1.0) < 1e-15);
  }
}

TEST_CASE("trace annihilation holds for random models") {
  for (std::uint64_t m = 0; m < 20; ++m) {
    const Index d = 1 + static_cast<Index>(m % 4);
    const Superoperator l = build_generator(random_model(d, 1 + static_cast<int>(m % 3), m + 7));
    for (std::uint64_t s = 0; s < 10; ++s) {
      CHECK(std::abs(l.apply(random_density(d, 1000 + s)).trace()) < 1e-10);
    }
  }
}

TEST_CASE("propagate") {
  const Superoperator l = build_generator(models::driven_atom());
  SUBCASE("t = 0 is the identity exactly") {
    CHECK(propagate(l, 0.0).matrix() == ComplexOperator::Identity(4, 4));
  }
  SUBCASE("negative time is a domain error") {
    CHECK_THROWS_AS(propagate(l, -1e-3), DomainError);
  }
  SUBCASE("no-click survival of the excited state is exp(-t)") {
    const LindbladModel decay = models::pure_decay();
    const Superoperator l0 =
        build_generator(decay) -
        Superoperator::sandwich(decay.jump_operators[0], decay.jump_operators[0].adjoint());
    const double survival =
        propagate(l0, 1.0).apply(DensityMatrix::basis_state(2, 1).op()).trace().real();
    CHECK(std::abs(survival - std::exp(-1.0)) < 1e-14);
  }
  SUBCASE("semigroup") {
    const ComplexOperator lhs = (propagate(l, 0.7) * propagate(l, 1.9)).matrix();
    CHECK(max_abs(lhs - propagate(l, 2.6).matrix()) < 1e-10);
  }
  SUBCASE("trace and positivity on random models") {
    for (std::uint64_t m = 0; m < 12; ++m) {
      const Index d = 2 + static_cast<Index>(m % 3);
      const Superoperator g = build_generator(random_model(d, 2, 100 + m));
      for (double t : {0.0, 0.5, 3.0, 10.0}) {
        const Superoperator p = propagate(g, t);
        CHECK(p.preserves_trace(1e-10));
        const ComplexOperator out = p.apply(random_density(d, 200 + m));
        CHECK(min_eigenvalue(out) >= -1e-9);
      }
    }
  }
}

TEST_CASE("stationary_state") {
  SUBCASE("pure decay relaxes to the ground state") {
    const DensityMatrix rho = stationary_state(build_generator(models::pure_decay()));
    CHECK(std::abs(rho.op()(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(rho.op()(1, 1)) < 1e-12);
  }
  SUBCASE("driven atom excited population") {
    const Superoperator l = build_generator(models::driven_atom(1.0, 1.0));
    const DensityMatrix rho = stationary_state(l);
    CHECK(std::abs(rho.op()(1, 1).real() - oracle::driven_atom_excited_population(1.0, 1.0)) <
          1e-12);
    CHECK(max_abs(l.apply(rho.op())) < 1e-12);
    const DensityMatrix other = stationary_state(build_generator(models::driven_atom(2.0, 0.5)));
    CHECK(std::abs(other.op()(1, 1).real() - oracle::driven_atom_excited_population(2.0, 0.5)) <
          1e-12);
  }
  SUBCASE("projective dephasing has a two-dimensional kernel") {
    const Superoperator l = build_generator(models::projective_dephasing());
    // Both diagonal basis states are fixed.
    CHECK(max_abs(l.apply(DensityMatrix::basis_state(2, 0).op())) < 1e-15);
    CHECK(max_abs(l.apply(DensityMatrix::basis_state(2, 1).op())) < 1e-15);
    try {
      stationary_state(l);
      FAIL("expected NonUniqueEquilibriumError");
    } catch (const NonUniqueEquilibriumError& e) {
      CHECK(e.null_dimension() == 2);
    }
  }
}

TEST_CASE("cesaro_average") {
  const Superoperator l = build_generator(models::driven_atom());
  const DensityMatrix rho = stationary_state(l);
  SUBCASE("stationary input is reproduced") {
    for (double tau : {0.3, 5.0, 40.0}) {
      CHECK(max_abs(cesaro_average(l, rho, tau, 50).op() - rho.op()) < 1e-10);
    }
  }
  SUBCASE("excited start converges in the mean") {
    const DensityMatrix excited = DensityMatrix::basis_state(2, 1);
    const double d50 = trace_distance(cesaro_average(l, excited, 50.0, 5000).op(), rho.op());
    CHECK(d50 < 0.05);
    const double d100 = trace_distance(cesaro_average(l, excited, 100.0, 10000).op(), rho.op());
    CHECK(d100 <= d50 + 1e-8);
  }
  SUBCASE("random initial states at tau = 100") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const DensityMatrix theta = DensityMatrix::normalized(random_density(2, 50 + s));
      CHECK(trace_distance(cesaro_average(l, theta, 100.0, 4000).op(), rho.op()) < 0.05);
    }
  }
  SUBCASE("too few steps") {
    CHECK_THROWS_AS(cesaro_average(l, rho, 1.0, 1), DomainError);
  }
}

TEST_CASE("density matrix validation") {
  ComplexOperator bad = ComplexOperator::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  CHECK_THROWS_AS(DensityMatrix::normalized(bad), DomainError);
  ComplexOperator half = ComplexOperator::Zero(2, 2);
  half(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix::normalized(half), DomainError);
  CHECK(DensityMatrix::unnormalized(half).trace() == doctest::Approx(0.5));
}

TEST_CASE("model documents") {
  const auto doc = nlohmann::json::parse(R"({
    "dimension": 2,
    "hamiltonian": [[[0,0],[0.5,0]], [[0.5,0],[0,0]]],
    "jump_operators": [ [[[0,0],[1,0]], [[0,0],[0,0]]] ]
  })");
  const LindbladModel m = parse_lindblad_model(doc);
  CHECK(max_abs(build_generator(m).matrix() - build_generator(models::driven_atom()).matrix()) <
        1e-15);
  const LindbladModel again = parse_lindblad_model(lindblad_model_to_json(m));
  CHECK(max_abs(again.hamiltonian - m.hamiltonian) == 0.0);

  auto broken = doc;
  broken["hamiltonian"][1][0] = "x";
  try {
    parse_lindblad_model(broken, "/model");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/model/hamiltonian/1/0") != std::string::npos);
  }
  auto hermitian_violation = doc;
  hermitian_violation["hamiltonian"][0][1] = {0.7, 0.0};
  CHECK_THROWS_AS(parse_lindblad_model(hermitian_violation), ConfigError);
}
