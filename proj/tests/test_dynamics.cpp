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

#include "dqdsim/dynamics.hpp"
#include "dqdsim/errors.hpp"
#include "support/oracles.hpp"

using namespace dqdsim;

namespace {

Schedule random_schedule(std::mt19937& rng, double eps_u0, double eps_l0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w_low = 20.0 + 200.0 * u(rng);
  const double w_up = 20.0 + 200.0 * u(rng);
  const double gap = 50.0 * u(rng);
  std::vector<Pulse> pulses{
      {Channel::Lower, 0.0, w_low, -eps_l0 * (0.5 + u(rng)), 40.0 * u(rng), 40.0 * u(rng)},
      {Channel::Upper, w_low + gap, w_up, -eps_u0 * (0.5 + u(rng)), 40.0 * u(rng),
       40.0 * u(rng)}};
  return Schedule(eps_u0, eps_l0, pulses, w_low + gap + w_up + 20.0 * u(rng));
}

ComplexMatrix4 exact_rectangles(const QubitPairParams& p, const DensityMatrix& rho0,
                                const std::vector<std::array<double, 3>>& pieces) {
  // pieces: {eps_u, eps_l, duration}
  ComplexMatrix4 rho = rho0.entries();
  for (const auto& [eu, el, dur] : pieces) {
    const Eigen::Matrix4cd u = dqdsim::testing::propagator(
        build_hamiltonian(p, eu, el).entries(), dur, PhysicalConstants::hbar);
    rho = u * rho * u.adjoint();
  }
  return rho;
}

}  // namespace

TEST_CASE("decoherence and integration parameter validation") {
  CHECK_NOTHROW(DecoherenceParams::none().validate());
  CHECK_FALSE(DecoherenceParams::none().has_dephasing());
  CHECK(DecoherenceParams::dephasing(1200.0).has_dephasing());
  CHECK_THROWS_AS(DecoherenceParams::dephasing(0.0).validate(), ValidationError);
  CHECK_THROWS_AS((DecoherenceParams{1000.0, -1.0}.validate()), ValidationError);
  IntegrationConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.dt = 0.05;
  cfg.record_stride = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("complex and real forms agree") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    QubitPairParams p;
    p.delta_u = 10.0 + 30.0 * u(rng);
    p.delta_l = 10.0 + 30.0 * u(rng);
    p.j_coupling = 200.0 * u(rng);
    p.eps_u0 = -50.0 - 250.0 * u(rng);
    p.eps_l0 = -50.0 - 250.0 * u(rng);
    const Schedule s = random_schedule(rng, p.eps_u0, p.eps_l0);
    const DecoherenceParams dec =
        trial % 2 ? DecoherenceParams::dephasing(300.0 + 3000.0 * u(rng))
                  : DecoherenceParams::none();
    const DensityMatrix rho0(dqdsim::testing::random_density(rng));
    const auto c = evolve_complex(rho0, s, p, dec, {});
    const auto r = evolve_real(to_real_form(rho0), s, p, dec, {});
    const DensityMatrix back = from_real_form(r.final_state);
    for (int b = 0; b < 4; ++b) {
      CHECK(std::abs(c.final_state(b, b).real() - back(b, b).real()) <= 1e-8);
    }
    CHECK((c.final_state.entries() - back.entries()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("unitary evolution conserves trace and purity over 2000 ps") {
  QubitPairParams p;
  const Schedule s = rabi_schedule(p.eps_u0, p.eps_l0, 2000.0);
  // RK4 loses amplitude as (dt |H| / hbar)^6 per step: 1.4e-8 of purity
  // over 2000 ps at dt = 0.05, a quarter of that at 0.04.
  IntegrationConfig cfg;
  cfg.dt = 0.04;
  cfg.record_stride = 1250;
  cfg.keep_states = true;
  std::mt19937 rng(5);
  const DensityMatrix rho0(dqdsim::testing::random_density(rng));
  const auto out = evolve_complex(rho0, s, p, DecoherenceParams::none(), cfg);
  const double purity0 = rho0.purity();
  REQUIRE(out.trajectory.states.size() > 20);
  for (const DensityMatrix& rho : out.trajectory.states) {
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-9);
    CHECK((rho.entries() - rho.entries().adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(rho.purity() - purity0) <= 1e-8);
  }
  const auto real = evolve_real(to_real_form(rho0), s, p, DecoherenceParams::none(), cfg);
  CHECK(std::abs(real.final_state.trace() - 1.0) <= 1e-9);
  CHECK(std::abs(from_real_form(real.final_state).purity() - purity0) <= 1e-8);
}

TEST_CASE("rectangular pulses match exact propagators") {
  QubitPairParams p;
  const DensityMatrix rho0 = thermal_initial_state(p, p.eps_u0, p.eps_l0);
  IntegrationConfig cfg;
  cfg.dt = 0.01;
  for (double w : {37.0, 80.6, 161.0, 403.3}) {
    const auto out = evolve_complex(rho0, rabi_schedule(p.eps_u0, p.eps_l0, w), p,
                                    DecoherenceParams::none(), cfg);
    const ComplexMatrix4 ref = exact_rectangles(p, rho0, {{{0.0, p.eps_l0, w}}});
    CHECK((out.final_state.entries() - ref).cwiseAbs().maxCoeff() <= 1e-7);
  }
  const double w1 = 123.0, w2 = 77.0;
  const Schedule tp = two_pulse_schedule(p.eps_u0, p.eps_l0, w1, w2);
  const auto out = evolve_real(to_real_form(rho0), tp, p, DecoherenceParams::none(), cfg);
  const ComplexMatrix4 ref = exact_rectangles(
      p, rho0, {{{p.eps_u0, 0.0, w2}}, {{p.eps_u0, p.eps_l0, 100.0}}, {{0.0, p.eps_l0, w1}}});
  CHECK((from_real_form(out.final_state).entries() - ref).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("single qubit Rabi oscillation at the balance point") {
  // Lower qubit parked far away: the upper one flips as cos^2(delta W / 2 hbar).
  QubitPairParams p;
  p.eps_u0 = -2000.0;
  p.eps_l0 = -2000.0;
  p.j_coupling = 0.0;
  IntegrationConfig cfg;
  cfg.dt = 0.01;
  for (double w : {40.0, 80.0, 120.0, 161.3}) {
    const auto pr = run_to_probabilities(rabi_schedule(p.eps_u0, p.eps_l0, w), p,
                                         DecoherenceParams::none(), cfg);
    const double c = std::cos(p.delta_u * w / (2.0 * PhysicalConstants::hbar));
    // Residual charge-basis tilt at -2000 ueV is below 1e-3.
    CHECK(pr.p_u0 == doctest::Approx(c * c).epsilon(2e-3).scale(1.0));
    CHECK(pr.p_l0 > 0.999);
  }
}

TEST_CASE("RK4 error falls by about 16 when the step halves") {
  QubitPairParams p;
  const Schedule s(p.eps_u0, p.eps_l0,
                   {{Channel::Lower, 0.0, 150.0, 180.0, 65.0, 65.0},
                    {Channel::Upper, 200.0, 100.0, 260.0, 65.0, 65.0}},
                   320.0);
  const RealStateMatrix w0 = to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0));
  auto run = [&](double dt) {
    IntegrationConfig cfg;
    cfg.dt = dt;
    return evolve_real(w0, s, p, DecoherenceParams::dephasing(900.0), cfg).final_state.entries();
  };
  const Matrix4 ref = run(0.2 / 8.0);
  const double e1 = (run(0.2) - ref).cwiseAbs().maxCoeff();
  const double e2 = (run(0.1) - ref).cwiseAbs().maxCoeff();
  MESSAGE("RK4 error ratio " << e1 / e2);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("dephasing decays coherences at 1/T2") {
  // Nearly uncoupled levels: coherence magnitude is set by dephasing alone.
  QubitPairParams p;
  p.delta_u = 1e-6;
  p.delta_l = 1e-6;
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(0, 0) = m(1, 1) = m(0, 1) = m(1, 0) = 0.5;
  const DensityMatrix rho0(m);
  const Schedule idle(p.eps_u0, p.eps_l0, {}, 600.0);
  const auto out = evolve_complex(rho0, idle, p, DecoherenceParams::dephasing(400.0), {});
  CHECK(std::abs(out.final_state(0, 1)) == doctest::Approx(0.5 * std::exp(-600.0 / 400.0)).epsilon(1e-6));
  CHECK(out.final_state(0, 0).real() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("strong relaxation pins the state to its start") {
  QubitPairParams p;
  const RealStateMatrix w0 = to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0));
  const auto out = evolve_real(w0, rabi_schedule(p.eps_u0, p.eps_l0, 300.0), p,
                               DecoherenceParams{1e9, 20.0}, {});
  // Residual drift is of order delta / (hbar gamma1) = 2e-3.
  CHECK((out.final_state.entries() - w0.entries()).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("step bound is enforced") {
  QubitPairParams p;
  IntegrationConfig cfg;
  cfg.dt = 1.0;
  CHECK_THROWS_AS(run_to_populations(rabi_schedule(p.eps_u0, p.eps_l0, 100.0), p, {}, cfg),
                  StepTooLarge);
  // A rectangle that lifts eps far above the baselines is caught inside the pulse.
  cfg.dt = 0.2;
  const Schedule up(p.eps_u0, p.eps_l0, {{Channel::Upper, 10.0, 50.0, 1500.0, 0.0, 0.0}}, 70.0);
  CHECK_THROWS_AS(check_step_bound(up, p, cfg), StepTooLarge);
  cfg.dt = 0.02;
  CHECK_NOTHROW(check_step_bound(up, p, cfg));
}

TEST_CASE("trajectory recording") {
  QubitPairParams p;
  IntegrationConfig cfg;
  cfg.record_stride = 100;
  const auto out = evolve_real(to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0)),
                               rabi_schedule(p.eps_u0, p.eps_l0, 100.0), p, {}, cfg);
  const Trajectory& t = out.trajectory;
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(100.0));
  CHECK(t.times.size() == t.probabilities.size());
  CHECK(t.times.size() == 21);
  for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
  cfg.record_stride = 0;
  const auto last = evolve_real(to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0)),
                                rabi_schedule(p.eps_u0, p.eps_l0, 100.0), p, {}, cfg);
  CHECK(last.trajectory.times.size() == 1);
}

TEST_CASE("width sweep shares work without changing results") {
  QubitPairParams p;
  const std::vector<double> widths{0.0, 3.0, 50.0, 17.5, 200.0, 333.3};
  for (double edge : {0.0, 20.0}) {
    PulseShape shape;
    shape.rect_rise = shape.rect_fall = edge;
    auto make = [&](double w) { return two_pulse_schedule(p.eps_u0, p.eps_l0, w, 120.0, shape); };
    const DecoherenceParams dec = DecoherenceParams::dephasing(1200.0);
    const auto swept = sweep_last_pulse_width(make, widths, p, dec);
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const auto direct = run_to_populations(make(widths[i]), p, dec);
      for (int b = 0; b < 4; ++b) CHECK(swept[i][b] == doctest::Approx(direct[b]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("stepper can branch and rebind") {
  QubitPairParams p;
  const Schedule longer = rabi_schedule(p.eps_u0, p.eps_l0, 300.0);
  const Schedule shorter = rabi_schedule(p.eps_u0, p.eps_l0, 100.0);
  const RealStateMatrix w0 = to_real_form(thermal_initial_state(p, p.eps_u0, p.eps_l0));
  RealStepper stepper(longer, p, {}, {}, w0);
  stepper.advance_to(100.0);
  CHECK(stepper.time() == doctest::Approx(100.0));
  RealStepper branch = stepper;
  branch.rebind(shorter);
  branch.advance_to(1e9);
  CHECK(branch.time() == doctest::Approx(100.0));
  const auto direct = run_to_populations(shorter, p, {});
  CHECK(branch.state()(2, 2) == doctest::Approx(direct[2]).epsilon(1e-9));
}

TEST_CASE("averaged readout is selectable") {
  QubitPairParams p;
  IntegrationConfig cfg;
  cfg.readout = Readout::Averaged;
  const auto avg = run_to_populations(rabi_schedule(p.eps_u0, p.eps_l0, 80.0), p, {}, cfg);
  const auto inst = run_to_populations(rabi_schedule(p.eps_u0, p.eps_l0, 80.0), p, {});
  CHECK(avg[0] + avg[1] + avg[2] + avg[3] == doctest::Approx(1.0));
  CHECK(std::abs(avg[2] - inst[2]) < 0.05);
}

TEST_CASE("idle diagonal state with negligible tunnelling stays put") {
  QubitPairParams p;
  p.delta_u = p.delta_l = 1e-12;
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m.diagonal() << 0.4, 0.3, 0.2, 0.1;
  const DensityMatrix rho0(m);
  const Schedule idle(p.eps_u0, p.eps_l0, {}, 500.0);
  const auto c = evolve_complex(rho0, idle, p, {}, {});
  CHECK((c.final_state.entries() - m).cwiseAbs().maxCoeff() < 1e-12);
  const auto r = evolve_real(to_real_form(rho0), idle, p, {}, {});
  CHECK((from_real_form(r.final_state).entries() - m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenbasis populations are constant under a constant Hamiltonian") {
  QubitPairParams p;
  const double eu = -30.0, el = 45.0;
  const Schedule idle(eu, el, {}, 800.0);
  std::mt19937 rng(11);
  const DensityMatrix rho0(dqdsim::testing::random_density(rng));
  IntegrationConfig cfg;
  cfg.record_stride = 400;
  cfg.keep_states = true;
  const auto out = evolve_complex(rho0, idle, p, {}, cfg);
  const auto [vals, vecs] =
      dqdsim::testing::jacobi_eigen(build_hamiltonian(p, eu, el).entries());
  const Eigen::Matrix4cd v = vecs.cast<Complex>();
  const Eigen::Vector4d pop0 = (v.adjoint() * rho0.entries() * v).diagonal().real();
  for (const DensityMatrix& rho : out.trajectory.states) {
    const Eigen::Vector4d pop = (v.adjoint() * rho.entries() * v).diagonal().real();
    CHECK((pop - pop0).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("dephasing envelope at balance never grows") {
  // Upper qubit at balance, lower parked deep: rho_{0,2} rotates at delta_u
  // and its successive maxima must shrink.
  QubitPairParams p;
  p.eps_l0 = -2000.0;
  p.j_coupling = 0.0;
  const Schedule idle(0.0, p.eps_l0, {}, 1500.0);
  IntegrationConfig cfg;
  cfg.record_stride = 20;
  cfg.keep_states = true;
  const auto out = evolve_complex(DensityMatrix::basis_state(0), idle, p,
                                  DecoherenceParams::dephasing(600.0), cfg);
  std::vector<double> mag;
  for (const DensityMatrix& rho : out.trajectory.states) mag.push_back(std::abs(rho(0, 2)));
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
    if (mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1]) peaks.push_back(mag[i]);
  }
  REQUIRE(peaks.size() >= 10);
  for (std::size_t i = 1; i < peaks.size(); ++i) CHECK(peaks[i] <= peaks[i - 1] + 1e-6);
  CHECK(peaks.back() < 0.5 * peaks.front());
}

TEST_CASE("composed runs from the thermal state") {
  QubitPairParams p;
  const Schedule empty(p.eps_u0, p.eps_l0, {}, 300.0);
  const ProbabilityPair idle = run_to_probabilities(empty, p, {});
  // The charge-basis start precesses slightly about the tilted eigenstates.
  CHECK(idle.p_u0 > 0.98);
  CHECK(idle.p_l0 > 0.98);

  // pi pulse located by scan, compared with the two-level closed form.
  QubitPairParams strong = p;
  strong.j_coupling = 400.0;
  strong.eps_l0 = -1000.0;
  double best = 1.0, best_w = 0.0;
  for (double w = 60.0; w <= 100.0; w += 0.5) {
    const double pu = run_to_probabilities(rabi_schedule(strong.eps_u0, strong.eps_l0, w),
                                           strong, {}).p_u0;
    if (pu < best) best = pu, best_w = w;
  }
  CHECK(best < 0.05);
  const double pi_width = M_PI * PhysicalConstants::hbar / strong.delta_u;
  CHECK(best_w == doctest::Approx(pi_width).epsilon(0.05));

  const ProbabilityPair a = run_to_probabilities(two_pulse_schedule(p.eps_u0, p.eps_l0, 80, 90), p,
                                                 DecoherenceParams::dephasing(1200.0));
  const ProbabilityPair b = run_to_probabilities(two_pulse_schedule(p.eps_u0, p.eps_l0, 80, 90), p,
                                                 DecoherenceParams::dephasing(1200.0));
  CHECK(a.p_u0 == b.p_u0);
  CHECK(a.p_l0 == b.p_l0);
}

TEST_CASE("blocked upper flips stay near the off-resonant bound") {
  // Lower in |1>: the upper drive is detuned by J, so a two-level estimate
  // caps the flip at delta^2 / (delta^2 + J^2).
  QubitPairParams p;
  p.eps_l0 = 200.0;
  const double bound = p.delta_u * p.delta_u / (p.delta_u * p.delta_u + p.j_coupling * p.j_coupling);
  std::vector<double> widths;
  for (double w = 0.0; w <= 1000.0; w += 4.0) widths.push_back(w);
  const auto pops = sweep_last_pulse_width(
      [&](double w) { return rabi_schedule(p.eps_u0, p.eps_l0, w); }, widths, p, {});
  double flip = 0.0;
  for (const auto& q : pops) flip = std::max(flip, q[2] + q[3]);
  MESSAGE("blocked flip " << flip << " vs two-level bound " << bound);
  CHECK(flip <= bound + 0.01);
  CHECK(flip > 0.5 * bound);
}
