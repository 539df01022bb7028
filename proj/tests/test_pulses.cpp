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
#include "dqdsim/pulses.hpp"
#include "support/oracles.hpp"

using namespace dqdsim;

TEST_CASE("trapezoid envelope") {
  const Pulse p{Channel::Upper, 10.0, 200.0, 1.0, 50.0, 25.0};
  CHECK(pulse_envelope(p, 5.0) == 0.0);
  CHECK(pulse_envelope(p, 10.0) == 0.0);
  CHECK(pulse_envelope(p, 35.0) == doctest::Approx(0.5));
  CHECK(pulse_envelope(p, 60.0) == doctest::Approx(1.0));
  CHECK(pulse_envelope(p, 150.0) == doctest::Approx(1.0));
  CHECK(pulse_envelope(p, 210.0 - 12.5) == doctest::Approx(0.5));
  CHECK(pulse_envelope(p, 210.0) == 0.0);
  CHECK(pulse_envelope(p, 300.0) == 0.0);
}

TEST_CASE("short pulses become triangles") {
  const Pulse p{Channel::Lower, 0.0, 100.0, 1.0, 65.0, 65.0};
  CHECK(pulse_envelope(p, 50.0) == doctest::Approx(50.0 / 65.0));
  CHECK(pulse_envelope(p, 25.0) == doctest::Approx(25.0 / 65.0));
  const Pulse rect{Channel::Lower, 0.0, 100.0, 1.0, 0.0, 0.0};
  CHECK(pulse_envelope(rect, 1e-9) == 1.0);
  CHECK(pulse_envelope(rect, 100.0 - 1e-9) == 1.0);
}

TEST_CASE("envelope area matches quadrature") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double rise = 100.0 * u(rng);
    const double fall = 100.0 * u(rng);
    const double width = rise + fall + 300.0 * u(rng) + 1.0;
    const Pulse p{Channel::Upper, 5.0, width, 1.0, rise, fall};
    const double area = dqdsim::testing::integrate(
        [&](double t) { return pulse_envelope(p, t); }, 0.0, width + 10.0, 200000);
    CHECK(area == doctest::Approx(width - 0.5 * (rise + fall)).epsilon(1e-5));
  }
}

TEST_CASE("pulse validation") {
  CHECK_THROWS_AS((Pulse{Channel::Upper, 0.0, 0.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Pulse{Channel::Upper, -1.0, 10.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Pulse{Channel::Upper, 0.0, 10.0, 1.0, -1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Pulse{Channel::Upper, 0.0, 10.0, NAN}.validate()), ValidationError);
}

TEST_CASE("lever arm conversion") {
  CHECK(mv_to_detuning(2.0, Gate::Barrier) == doctest::Approx(200.0));
  CHECK(mv_to_detuning(2.0, Gate::Plunger) == doctest::Approx(60.0));
  CHECK(mv_to_detuning(1.0, Gate::Plunger, LeverArm{10.0, 5.0}) == doctest::Approx(5.0));
}

TEST_CASE("schedule is the baseline plus the sum of its pulses") {
  const std::vector<Pulse> pulses{{Channel::Upper, 10.0, 100.0, 50.0, 20.0, 20.0},
                                  {Channel::Upper, 150.0, 80.0, -30.0, 10.0, 10.0},
                                  {Channel::Lower, 40.0, 120.0, 70.0, 30.0, 5.0}};
  const Schedule s(-200.0, -150.0, pulses, 300.0);
  for (double t = 0.0; t <= 300.0; t += 0.7) {
    double eu = -200.0, el = -150.0;
    for (const Pulse& p : pulses) {
      (p.channel == Channel::Upper ? eu : el) += p.amplitude * pulse_envelope(p, t);
    }
    const WaveformSample w = s.evaluate(t);
    CHECK(w.eps_u == doctest::Approx(eu).epsilon(1e-14));
    CHECK(w.eps_l == doctest::Approx(el).epsilon(1e-14));
  }
  CHECK(s.max_abs_detuning() == doctest::Approx(230.0));
}

TEST_CASE("schedule validation and range checks") {
  CHECK_THROWS_AS(Schedule(-200.0, -200.0,
                           {{Channel::Upper, 0.0, 100.0, 1.0}, {Channel::Upper, 50.0, 100.0, 1.0}},
                           300.0),
                  ValidationError);
  // Different channels may overlap.
  CHECK_NOTHROW(Schedule(-200.0, -200.0,
                         {{Channel::Upper, 0.0, 100.0, 1.0}, {Channel::Lower, 50.0, 100.0, 1.0}},
                         300.0));
  CHECK_THROWS_AS(Schedule(-200.0, -200.0, {{Channel::Upper, 0.0, 100.0, 1.0}}, 50.0),
                  ValidationError);
  const Schedule s(-200.0, -200.0, {{Channel::Upper, 0.0, 100.0, 1.0}}, 120.0);
  CHECK_THROWS_AS(s.evaluate(-0.1), OutOfRange);
  CHECK_THROWS_AS(s.evaluate(120.1), OutOfRange);
  CHECK_NOTHROW(s.evaluate(120.0));
}

TEST_CASE("sync offset delays the upper channel only") {
  const std::vector<Pulse> pulses{{Channel::Upper, 0.0, 100.0, 200.0, 0.0, 0.0},
                                  {Channel::Lower, 0.0, 100.0, 200.0, 0.0, 0.0}};
  const Schedule s(-200.0, -200.0, pulses, 400.0, 200.0);
  CHECK(s.evaluate(50.0).eps_u == -200.0);
  CHECK(s.evaluate(50.0).eps_l == 0.0);
  CHECK(s.evaluate(250.0).eps_u == 0.0);
  CHECK(s.evaluate(250.0).eps_l == -200.0);
  CHECK_THROWS_AS(Schedule(-200.0, -200.0, pulses, 250.0, 200.0), ValidationError);
}

TEST_CASE("breakpoints cover every kink") {
  const Schedule s(-200.0, -200.0,
                   {{Channel::Upper, 10.0, 200.0, 1.0, 50.0, 25.0},
                    {Channel::Lower, 20.0, 100.0, 1.0, 65.0, 65.0}},
                   400.0);
  const std::vector<double> expected{10.0, 20.0, 60.0, 70.0, 120.0, 185.0, 210.0};
  REQUIRE(s.breakpoints().size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(s.breakpoints()[i] == doctest::Approx(expected[i]));
  }
}

TEST_CASE("rabi and two-pulse builders") {
  PulseShape shape;
  const Schedule r = rabi_schedule(-200.0, -200.0, 150.0, shape);
  REQUIRE(r.pulses().size() == 1);
  CHECK(r.pulses()[0].channel == Channel::Upper);
  CHECK(r.pulses()[0].amplitude == 200.0);
  CHECK(r.pulses()[0].rise == shape.rect_rise);
  CHECK(r.total_duration() == doctest::Approx(150.0));
  CHECK(r.evaluate(75.0).eps_u == 0.0);

  const Schedule tp = two_pulse_schedule(-200.0, -180.0, 120.0, 90.0, shape);
  REQUIRE(tp.pulses().size() == 2);
  CHECK(tp.pulses()[0].channel == Channel::Lower);
  CHECK(tp.pulses()[0].amplitude == 180.0);
  CHECK(tp.pulses()[1].start == doctest::Approx(90.0 + shape.gap));
  CHECK(tp.total_duration() == doctest::Approx(90.0 + shape.gap + 120.0));

  const Schedule lower = lower_rabi_schedule(-200.0, -180.0, 90.0, shape);
  REQUIRE(lower.pulses().size() == 1);
  CHECK(lower.pulses()[0].channel == Channel::Lower);
}

TEST_CASE("zero-width pulses leave the baseline untouched") {
  const Schedule s = two_pulse_schedule(-200.0, -200.0, 0.0, 0.0);
  CHECK(s.pulses().empty());
  for (double t = 0.0; t <= s.total_duration(); t += 1.0) {
    CHECK(s.evaluate(t).eps_u == -200.0);
    CHECK(s.evaluate(t).eps_l == -200.0);
  }
  CHECK_THROWS_AS(rabi_schedule(-200.0, -200.0, -1.0), ValidationError);
}

TEST_CASE("input labels") {
  for (InputLabel l : kTomographyOrder) CHECK(parse_input_label(to_string(l)) == l);
  CHECK(basis_index(InputLabel::k00) == 0);
  CHECK(basis_index(InputLabel::k01) == 1);
  CHECK(basis_index(InputLabel::k10) == 2);
  CHECK(basis_index(InputLabel::k11) == 3);
  CHECK_THROWS_AS(parse_input_label("2"), InvalidLabel);
  CHECK_THROWS_AS(parse_input_label(""), InvalidLabel);
}

TEST_CASE("tomography schedules prepare each input") {
  const TomographyWidths widths{242.0, 254.0, 246.0};
  const double j = 119.0;
  const Schedule s00 = tomography_schedule(-200.0, -200.0, j, InputLabel::k00, 300.0, widths);
  REQUIRE(s00.pulses().size() == 1);
  const Schedule s10 = tomography_schedule(-200.0, -200.0, j, InputLabel::k10, 300.0, widths);
  REQUIRE(s10.pulses().size() == 2);
  CHECK(s10.pulses()[0].width == 242.0);
  const Schedule s01 = tomography_schedule(-200.0, -200.0, j, InputLabel::k01, 300.0, widths);
  REQUIRE(s01.pulses().size() == 2);
  CHECK(s01.pulses()[0].channel == Channel::Lower);
  CHECK(s01.pulses()[0].width == 254.0);
  const Schedule s11 = tomography_schedule(-200.0, -200.0, j, InputLabel::k11, 300.0, widths);
  REQUIRE(s11.pulses().size() == 3);
  CHECK(s11.pulses()[1].amplitude == doctest::Approx(200.0 + j));
  CHECK(s11.pulses()[1].width == 246.0);
  CHECK(s11.pulses()[2].amplitude == doctest::Approx(200.0));
  // The operating pulse is last in every sequence.
  for (const Schedule* s : {&s00, &s10, &s01, &s11}) {
    CHECK(s->pulses().back().width == 300.0);
    CHECK(s->pulses().back().channel == Channel::Upper);
  }
}

TEST_CASE("LZS and controlled rotation pulses use the generator edges") {
  PulseShape shape;
  const Schedule lzs = lzs_schedule(-200.0, -200.0, 300.0, 150.0, 100.0, shape);
  REQUIRE(lzs.pulses().size() == 2);
  CHECK(lzs.pulses()[0].rise == shape.rise);
  CHECK(lzs.pulses()[0].width == 100.0);
  CHECK(lzs.pulses()[1].rise == shape.rect_rise);
  const Schedule cr = controlled_rotation_schedule(-200.0, -200.0, 250.0, 300.0);
  REQUIRE(cr.pulses().size() == 2);
  CHECK(cr.pulses()[0].channel == Channel::Lower);
  CHECK(cr.pulses()[1].channel == Channel::Upper);
  CHECK(cr.pulses()[1].rise == shape.rise);
  CHECK(cr.pulses()[1].start == doctest::Approx(100.0 + shape.gap));
}

TEST_CASE("sync schedule cancels the system delay at -offset") {
  const Schedule s = sync_schedule(-200.0, -200.0, 300.0, 300.0, -200.0, 200.0);
  const Pulse& lower = s.pulses()[0];
  const Pulse& upper = s.pulses()[1];
  // Upper pulse reaches the qubit right when the lower one ends.
  CHECK(s.effective_start(upper) == doctest::Approx(lower.end()));
  // A large negative delay puts the upper pulse first.
  const Schedule early = sync_schedule(-200.0, -200.0, 300.0, 300.0, -1000.0, 200.0);
  CHECK(early.effective_start(early.pulses()[1]) < early.pulses()[0].start);
  CHECK(early.effective_start(early.pulses()[1]) >= 0.0);
  // Without offset, a delay equal to the gap reproduces the plain sequence.
  PulseShape shape;
  const Schedule plain = sync_schedule(-200.0, -200.0, 250.0, 300.0, shape.gap, 0.0);
  const Schedule cr = controlled_rotation_schedule(-200.0, -200.0, 250.0, 300.0);
  REQUIRE(plain.total_duration() == doctest::Approx(cr.total_duration()));
  for (double t = 0.0; t <= cr.total_duration(); t += 0.5) {
    CHECK(plain.evaluate(t).eps_u == doctest::Approx(cr.evaluate(t).eps_u));
    CHECK(plain.evaluate(t).eps_l == doctest::Approx(cr.evaluate(t).eps_l));
  }
}
