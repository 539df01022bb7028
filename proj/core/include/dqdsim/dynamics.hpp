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

// Master-equation integration for the coupled qubit pair under a pulse
// schedule, in the complex density-matrix form and in the real form
// W = Re(rho) + Im(rho), which obeys dW/dt = -(1/hbar)[H, W^T] for a real
// symmetric H.
//
// Both forms use classical fixed-step RK4. Steps never straddle a pulse
// corner: each interval between breakpoints is divided into equal steps
// no longer than dt.

#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dqdsim/model.hpp"
#include "dqdsim/pulses.hpp"

namespace dqdsim {

struct DecoherenceParams {
  // Coherence decay time; off-diagonal elements decay at 1 / t2_star.
  double t2_star = std::numeric_limits<double>::infinity();
  // Relaxation toward the initial state, 1/ps.
  double gamma1 = 0.0;

  bool has_dephasing() const { return t2_star < std::numeric_limits<double>::infinity(); }
  void validate() const;

  static DecoherenceParams none() { return {}; }
  static DecoherenceParams dephasing(double t2_star_ps) { return {t2_star_ps, 0.0}; }
};

// How final populations are read. Instantaneous takes the charge diagonal
// at the last time step; Averaged drops coherences that precess at the
// baseline detunings, which is what a slow charge sensor integrates.
enum class Readout { Instantaneous, Averaged };

struct IntegrationConfig {
  double dt = 0.05;        // ps
  int record_stride = 0;   // steps between samples, 0 = final state only
  bool keep_states = false;
  Readout readout = Readout::Instantaneous;

  // Largest admissible phase per step, dt * |H| / hbar.
  static constexpr double kMaxPhasePerStep = 0.1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ProbabilityPair> probabilities;
  std::vector<DensityMatrix> states;  // filled when keep_states is set
};

struct ComplexEvolution {
  DensityMatrix final_state;
  Trajectory trajectory;
};

struct RealEvolution {
  RealStateMatrix final_state;
  Trajectory trajectory;
};

// Throws StepTooLarge when dt * max|H(t)| / hbar >= 0.1 on the schedule.
void check_step_bound(const Schedule& s, const QubitPairParams& params,
                      const IntegrationConfig& cfg);

ComplexEvolution evolve_complex(const DensityMatrix& rho0, const Schedule& s,
                                const QubitPairParams& params,
                                const DecoherenceParams& dec,
                                const IntegrationConfig& cfg);

RealEvolution evolve_real(const RealStateMatrix& w0, const Schedule& s,
                          const QubitPairParams& params,
                          const DecoherenceParams& dec,
                          const IntegrationConfig& cfg);

// Thermal state at the schedule baselines, evolved over the whole
// schedule in the real form.
ProbabilityPair run_to_probabilities(const Schedule& s,
                                     const QubitPairParams& params,
                                     const DecoherenceParams& dec,
                                     const IntegrationConfig& cfg = {});

// As run_to_probabilities, returning all four charge populations.
std::array<double, 4> run_to_populations(const Schedule& s,
                                         const QubitPairParams& params,
                                         const DecoherenceParams& dec,
                                         const IntegrationConfig& cfg = {});

// Incremental real-form integrator. Callers that sweep a pulse width can
// advance a long-pulse schedule, copy the stepper at a checkpoint and
// finish each copy on the schedule of the shorter pulse.
// Final populations of w under cfg.readout, using the schedule baselines.
std::array<double, 4> read_populations(const RealStateMatrix& w,
                                       const Schedule& s,
                                       const QubitPairParams& params,
                                       const IntegrationConfig& cfg);

class RealStepper {
 public:
  RealStepper(const Schedule& s, const QubitPairParams& params,
              const DecoherenceParams& dec, const IntegrationConfig& cfg,
              const RealStateMatrix& w0);

  // Integrates up to t_target (clamped to the schedule length).
  void advance_to(double t_target);

  // Swaps the driving schedule; it must agree with the current one on
  // [0, time()] for the result to be meaningful.
  void rebind(const Schedule& s);

  double time() const noexcept { return t_; }
  const Matrix4& state() const noexcept { return w_; }
  const Schedule& schedule() const noexcept { return schedule_; }

 private:
  Schedule schedule_;
  QubitPairParams params_;
  double dt_;
  double gamma1_;
  Matrix4 dephasing_;  // elementwise rates
  Matrix4 w_initial_;
  Matrix4 w_;
  double t_ = 0.0;
};

// Final populations of make(w) for every w in widths, where the schedules
// differ only in the width of their last pulse. Widths long enough to
// have a plateau share one integration up to the start of their fall.
std::vector<std::array<double, 4>> sweep_last_pulse_width(
    const std::function<Schedule(double)>& make, std::span<const double> widths,
    const QubitPairParams& params, const DecoherenceParams& dec,
    const IntegrationConfig& cfg = {});

}  // namespace dqdsim
