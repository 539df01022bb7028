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

// Sweep runners for the simulated experiments. Every runner is a pure
// function of its inputs: grid points are evaluated independently and
// written back by index, so the thread count never changes the output.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dqdsim/analysis.hpp"
#include "dqdsim/dynamics.hpp"
#include "dqdsim/model.hpp"
#include "dqdsim/pulses.hpp"

namespace dqdsim {

struct SweepAxis {
  std::string name;
  std::string unit;  // "ps" or "ueV"
  std::vector<double> values;
};

// Inclusive range; the last point is kept when it lands within 1e-9 of stop.
SweepAxis make_axis(std::string name, std::string unit, double start,
                    double stop, double step);

struct SweepGrid {
  SweepAxis x;
  std::optional<SweepAxis> y;  // absent for 1-D sweeps

  std::size_t nx() const { return x.values.size(); }
  std::size_t ny() const { return y ? y->values.size() : 1; }
  // Throws ValidationError unless every axis is non-empty, finite and
  // strictly monotone.
  void validate() const;
};

// Rows follow y, columns follow x.
struct ProbabilityMap {
  SweepGrid grid;
  Eigen::MatrixXd p_u0;
  Eigen::MatrixXd p_l0;
};

struct ExperimentContext {
  QubitPairParams params;
  DecoherenceParams dec;
  IntegrationConfig cfg;
  PulseShape shape;
  int parallel = 0;  // worker threads, 0 = hardware concurrency

  void validate() const;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

// Upper rectangle of width W1 from the baseline.
ProbabilityMap run_rabi(const ExperimentContext& ctx,
                        const std::vector<double>& w1_values);

// x = W1, y = lower baseline detuning.
ProbabilityMap run_conditional_rabi(const ExperimentContext& ctx,
                                    const std::vector<double>& w1_values,
                                    const std::vector<double>& eps_l_values);

// x = W1, y = W2. The lower pulse comes first.
ProbabilityMap run_two_pulse(const ExperimentContext& ctx,
                             const std::vector<double>& w1_values,
                             const std::vector<double>& w2_values);

struct TomographyResult {
  TomographyWidths widths;   // preparation pulses used
  double operating_width = 0.0;  // W_I where D is read
  std::vector<double> w_i_values;
  // traces[input][k] holds the four populations (order 00,10,01,11) at
  // w_i_values[k].
  std::array<std::vector<std::array<double, 4>>, 4> traces;
  TomographyMatrix d;
};

// Preparation widths located by scanning for the 3pi flips.
TomographyWidths locate_tomography_widths(const ExperimentContext& ctx);

// fixed_widths pins the preparation and operating widths to 360/390 ps.
TomographyResult run_cnot_tomography(const ExperimentContext& ctx,
                                     const std::vector<double>& w_i_values,
                                     bool fixed_widths = false);

struct FidelityPoint {
  double j = 0.0;
  double w_3pi = 0.0;
  FidelityReport report;
};

struct FidelityCurve {
  std::vector<FidelityPoint> points;
};

struct FidelityOptions {
  double w_i_max = 1000.0;     // ps
  double w_i_step = 4.0;       // ps
  double eps_l_blocked = 200.0;  // lower baseline that puts it in |1>
  int n_pi = 3;
};

// A_k is the coherent leakage without dephasing; A_k', f_U and f_L use
// ctx.dec.
FidelityCurve run_fidelity_vs_j(const ExperimentContext& ctx,
                                const std::vector<double>& j_values,
                                const FidelityOptions& opts = {});

enum class LzsAxis { Amplitude, Detuning };

// x = W1, y = lower pulse amplitude (Amplitude) or lower baseline
// (Detuning, with the pulse amplitude fixed at `amplitude`).
ProbabilityMap run_lzs_control(const ExperimentContext& ctx, LzsAxis axis,
                               const std::vector<double>& y_values,
                               const std::vector<double>& w1_values,
                               double amplitude = 300.0,
                               double lower_width = 100.0);

// x = upper baseline, y = lower baseline; two triangular pulses, lower
// first.
ProbabilityMap run_controlled_universal(const ExperimentContext& ctx,
                                        const std::vector<double>& eps_u_values,
                                        const std::vector<double>& eps_l_values,
                                        double amplitude_u = 300.0,
                                        double amplitude_l = 300.0,
                                        double width = 100.0);

struct SyncScan {
  std::vector<double> delays;
  std::vector<ProbabilityMap> maps;  // x = upper amplitude, y = lower amplitude
};

SyncScan run_sync_scan(const ExperimentContext& ctx,
                       const std::vector<double>& delays,
                       const std::vector<double>& a1_values,
                       const std::vector<double>& a2_values,
                       double sync_offset = 200.0, double width = 100.0);

// Largest spread of field along y, taken over x columns. Measures how
// much one qubit responds to the other's pulse.
double cross_dependence(const Eigen::MatrixXd& field);

}  // namespace dqdsim
