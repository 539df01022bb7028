// Copyright 2026 The dqdsim Authors
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

#include <cmath>
#include <random>

#include <doctest.h>

#include "dqdsim/errors.hpp"
#include "dqdsim/model.hpp"
#include "support/oracles.hpp"

using namespace dqdsim;
using dqdsim::testing::det4;
using dqdsim::testing::jacobi_eigen;

TEST_CASE("frequency and energy conversions") {
  CHECK(ghz_to_uev(6.2) == doctest::Approx(25.64114).epsilon(1e-6));
  CHECK(uev_to_ghz(ghz_to_uev(6.0)) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(PhysicalConstants::planck_h ==
        doctest::Approx(2.0 * M_PI * PhysicalConstants::hbar).epsilon(1e-9));
}

TEST_CASE("parameter validation names the field") {
  QubitPairParams p;
  CHECK_NOTHROW(p.validate());
  p.j_coupling = -1.0;
  try {
    p.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "j_coupling");
  }
  p = {};
  p.delta_u = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.temperature = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("strong coupling regime check") {
  QubitPairParams p;
  p.j_coupling = 119.0;
  p.eps_u0 = p.eps_l0 = -400.0;
  CHECK(in_strong_coupling_regime(p));
  p.j_coupling = 25.0;
  CHECK_FALSE(in_strong_coupling_regime(p));
}

TEST_CASE("hamiltonian entries") {
  QubitPairParams p;
  p.delta_u = 20.0;
  p.delta_l = 10.0;
  p.j_coupling = 50.0;
  const Hamiltonian4 h = build_hamiltonian(p, -100.0, 40.0);
  CHECK(h(0, 0) == doctest::Approx(-30.0));
  CHECK(h(1, 1) == doctest::Approx(-70.0));
  CHECK(h(2, 2) == doctest::Approx(70.0));
  CHECK(h(3, 3) == doctest::Approx(80.0));
  CHECK(h(0, 2) == 10.0);
  CHECK(h(1, 3) == 10.0);
  CHECK(h(0, 1) == 5.0);
  CHECK(h(2, 3) == 5.0);
  CHECK(h(0, 3) == 0.0);
  CHECK(h(1, 2) == 0.0);
  CHECK((h.entries() - h.entries().transpose()).norm() == 0.0);
}

TEST_CASE("eigen_symmetric agrees with Jacobi rotations and the characteristic polynomial") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> eps(-300.0, 300.0);
  std::uniform_real_distribution<double> coupling(1.0, 200.0);
  for (int trial = 0; trial < 200; ++trial) {
    QubitPairParams p;
    p.delta_u = coupling(rng) / 4.0;
    p.delta_l = coupling(rng) / 4.0;
    p.j_coupling = coupling(rng);
    const Hamiltonian4 h = build_hamiltonian(p, eps(rng), eps(rng));
    const EigenDecomposition e = eigen_symmetric(h);
    const auto [ref_values, ref_vectors] = jacobi_eigen(h.entries());
    const double scale = h.entries().cwiseAbs().maxCoeff();
    for (int k = 0; k < 4; ++k) {
      CHECK(e.values(k) == doctest::Approx(ref_values(k)).epsilon(1e-10).scale(scale));
      // Each eigenvalue is a root of det(H - lambda I).
      const double d = det4(h.entries() - e.values(k) * Eigen::Matrix4d::Identity());
      CHECK(std::abs(d) <= 1e-8 * std::pow(scale, 4));
      const Eigen::Vector4d v = e.vectors.col(k);
      CHECK((h.entries() * v - e.values(k) * v).norm() <= 1e-10 * scale);
    }
    CHECK((e.vectors.transpose() * e.vectors - Eigen::Matrix4d::Identity()).norm() <= 1e-12);
    for (int k = 1; k < 4; ++k) CHECK(e.values(k) >= e.values(k - 1));
  }
}

TEST_CASE("real form round trip") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho(dqdsim::testing::random_density(rng));
    REQUIRE(rho.is_valid());
    const DensityMatrix back = from_real_form(to_real_form(rho));
    CHECK((back.entries() - rho.entries()).cwiseAbs().maxCoeff() <= 1e-15);
    const RealStateMatrix w = to_real_form(rho);
    CHECK(w.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto pw = probabilities(w);
    const auto pr = probabilities(rho);
    CHECK(pw.p_u0 == doctest::Approx(pr.p_u0).epsilon(1e-15));
    CHECK(pw.p_l0 == doctest::Approx(pr.p_l0).epsilon(1e-15));
  }
}

TEST_CASE("probabilities read the charge populations") {
  // index 2u + l
  CHECK(probabilities(DensityMatrix::basis_state(0)).p_u0 == 1.0);
  CHECK(probabilities(DensityMatrix::basis_state(0)).p_l0 == 1.0);
  CHECK(probabilities(DensityMatrix::basis_state(1)).p_u0 == 1.0);
  CHECK(probabilities(DensityMatrix::basis_state(1)).p_l0 == 0.0);
  CHECK(probabilities(DensityMatrix::basis_state(2)).p_u0 == 0.0);
  CHECK(probabilities(DensityMatrix::basis_state(2)).p_l0 == 1.0);
  CHECK(probabilities(DensityMatrix::basis_state(3)).p_u0 == 0.0);
  CHECK(probabilities(DensityMatrix::basis_state(3)).p_l0 == 0.0);
}

TEST_CASE("density matrix validity") {
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  CHECK(DensityMatrix(m).is_valid());
  m(0, 1) = Complex(0.1, 0.2);
  CHECK_FALSE(DensityMatrix(m).is_valid());  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(m).validate(), StateInvalid);
  m(1, 0) = std::conj(m(0, 1));
  CHECK(DensityMatrix(m).is_valid());
  m(2, 2) = 0.1;
  CHECK_FALSE(DensityMatrix(m).is_valid());  // trace 1.1
  const DensityMatrix pure = DensityMatrix::basis_state(3);
  CHECK(pure.purity() == doctest::Approx(1.0));
}

TEST_CASE("thermal state matches a Boltzmann oracle") {
  QubitPairParams p;
  const double kb = PhysicalConstants::k_boltzmann;
  for (double temperature : {0.010, 0.5, 2.0, 50.0}) {
    p.temperature = temperature;
    const double eu = -200.0, el = -150.0;
    const DensityMatrix rho = thermal_initial_state(p, eu, el);
    const auto [values, vectors] = jacobi_eigen(build_hamiltonian(p, eu, el).entries());
    double z = 0.0;
    std::array<double, 4> expected{};
    for (int b = 0; b < 4; ++b) {
      int owner = 0;
      for (int k = 1; k < 4; ++k) {
        if (std::abs(vectors(b, k)) > std::abs(vectors(b, owner))) owner = k;
      }
      expected[b] = std::exp(-(values(owner) - values(0)) / (kb * temperature));
      z += expected[b];
    }
    for (int b = 0; b < 4; ++b) {
      CHECK(rho(b, b).real() == doctest::Approx(expected[b] / z).epsilon(1e-10));
      for (int c = 0; c < 4; ++c) {
        if (c != b) CHECK(std::abs(rho(b, c)) == 0.0);
      }
    }
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("thermal state at the baseline sits in the right charge state") {
  QubitPairParams p;
  CHECK(thermal_initial_state(p, -200.0, -200.0)(0, 0).real() > 0.999);
  // Lower qubit detuned to +200 ueV: ground state is |01>.
  CHECK(thermal_initial_state(p, -200.0, 200.0)(1, 1).real() > 0.999);
}

TEST_CASE("thermal state refuses ambiguous assignments") {
  QubitPairParams p;
  p.j_coupling = 0.0;
  // Uncoupled, eps_L = 0 puts |00> and |01> in a symmetric superposition.
  CHECK_THROWS_AS(thermal_initial_state(p, -200.0, 0.0), OverlapAmbiguity);
  CHECK_NOTHROW(thermal_initial_state(p, -200.0, 1.0));
  p.temperature = -1.0;
  CHECK_THROWS_AS(thermal_initial_state(p, -200.0, -200.0), ValidationError);
}

TEST_CASE("averaged populations drop fast coherences only") {
  QubitPairParams p;
  const auto [values, vectors] = jacobi_eigen(build_hamiltonian(p, -200.0, -180.0).entries());
  // An eigenstate does not precess: both readouts agree.
  const Eigen::Vector4d v = vectors.col(2);
  const Matrix4 proj = v * v.transpose();
  const RealStateMatrix w(proj);
  const auto inst = populations(w);
  const auto avg = averaged_populations(w, p, -200.0, -180.0);
  for (int b = 0; b < 4; ++b) CHECK(avg[b] == doctest::Approx(inst[b]).epsilon(1e-12));
  // A charge state carries fast coherences; averaging keeps the trace.
  const RealStateMatrix charge = to_real_form(DensityMatrix::basis_state(0));
  const auto a = averaged_populations(charge, p, -200.0, -180.0);
  CHECK(a[0] + a[1] + a[2] + a[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a[0] < 1.0);
  CHECK(a[0] > 0.95);
}
