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

// Fits and fidelity metrics for the simulated experiments.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "dqdsim/dynamics.hpp"
#include "dqdsim/model.hpp"
#include "dqdsim/pulses.hpp"

namespace dqdsim {

// ---------------------------------------------------------------------------
// Decaying-cosine fit
//
//   y(W) = a0 exp(-(W / t2_star)^2) cos(2 pi freq W + b0) + a1 W + a2
//
// with W in ps and freq in GHz.

struct RabiSample {
  double width;        // ps
  double probability;
};

struct RabiFit {
  double a0 = 0.0;
  double t2_star = 0.0;  // ps, +inf when no decay is resolved
  double freq = 0.0;     // GHz
  double b0 = 0.0;       // rad, in (-pi, pi]
  double a1 = 0.0;       // 1/ps
  double a2 = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  // False when the amplitude vanishes and freq, b0, t2_star carry no
  // information.
  bool frequency_constrained = true;

  double evaluate(double width) const;
};

struct RabiFitGuess {
  double a0, t2_star, freq, b0, a1, a2;
};

// Damped least squares with a central-difference Jacobian. The frequency
// starts from the strongest periodogram peak of the detrended samples
// unless a guess is given. Throws InsufficientData for fewer than 20
// samples or less than two periods, FitDiverged when no damped step
// lowers the residual.
RabiFit fit_rabi(std::span<const RabiSample> samples,
                 const std::optional<RabiFitGuess>& initial_guess = std::nullopt);

// Strongest frequency (cycles per unit of x) of the mean-removed signal,
// searched on a grid up to the Nyquist limit of the mean spacing.
double dominant_frequency(std::span<const double> x, std::span<const double> y);

// Phase of b relative to a at the dominant frequency of a, in (-pi, pi].
double phase_difference(std::span<const double> x, std::span<const double> a,
                         std::span<const double> b);

// ---------------------------------------------------------------------------
// Fidelities

struct LeakagePoint {
  double width;            // W_I, ps
  double flip_probability;
};

double leakage_amplitude(std::span<const LeakagePoint> trace);

struct ProcessFidelity {
  std::array<double, 4> per_process{};  // inputs 00, 10, 01, 11
  double f_prime = 0.0;
};

ProcessFidelity process_fidelity(double f_u, double f_l, double a_k_prime);

struct FidelityReport {
  double a_k = 0.0;
  double f = 0.0;  // 1 - a_k
  double a_k_prime = 0.0;
  double f_u = 0.0;
  double f_l = 0.0;
  double f_prime = 0.0;  // min(per_process)
  std::array<double, 4> per_process{};
};

FidelityReport make_fidelity_report(double a_k, double a_k_prime, double f_u,
                                    double f_l);

// Rows and columns ordered 00, 10, 01, 11.
struct TomographyMatrix {
  Matrix4 d = Matrix4::Zero();

  // Each row sums to one within tol.
  bool rows_normalized(double tol = 0.02) const;
};

// CNOT truth table in tomography order: 00->10, 10->00, 01->01, 11->11.
inline constexpr std::array<int, 4> kCnotTarget = {1, 0, 2, 3};

// Smallest probability of the correct output over the four inputs.
double cnot_success_min(const TomographyMatrix& d);

// Ideal CNOT permutation matrix in tomography order.
TomographyMatrix ideal_cnot();

// ---------------------------------------------------------------------------
// Single-qubit pulses

struct NpiPulse {
  double width = 0.0;            // ps
  double flip_probability = 0.0;
};

// Width of the n-pi pulse on one qubit (the other idle at its baseline),
// found as the flip maximum within half a period of n/2 periods after the
// edges.
NpiPulse locate_npi_pulse(const QubitPairParams& params,
                          const DecoherenceParams& dec, int n_pi,
                          Channel channel, const PulseShape& shape,
                          const IntegrationConfig& cfg = {},
                          double resolution = 0.25);

// Flip probability of an n-pi pulse (n odd).
double pulse_flip_fidelity(const QubitPairParams& params,
                           const DecoherenceParams& dec, int n_pi,
                           Channel channel = Channel::Upper,
                           const PulseShape& shape = {},
                           const IntegrationConfig& cfg = {});

// ---------------------------------------------------------------------------
// Closed forms valid for large J without dephasing

// Upper rotated by alpha, lower by beta, lower pulse first.
ProbabilityPair analytic_two_pulse(double alpha, double beta);

// Lower qubit left with |U|^2 = u_squared in |0>, then the upper rotated
// by alpha.
ProbabilityPair analytic_lzs(double u_squared, double alpha);

// Both qubits under LZS pulses: v_squared is the upper flip probability.
ProbabilityPair analytic_lzs_universal(double u_squared, double v_squared);

}  // namespace dqdsim
