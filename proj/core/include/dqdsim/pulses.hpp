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

// Gate pulses with finite rise and fall, and the detuning waveforms they
// produce on the two qubits.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dqdsim {

enum class Channel { Upper, Lower };

struct Pulse {
  Channel channel = Channel::Upper;
  double start = 0.0;      // ps
  double width = 0.0;      // ps, total base duration including edges
  double amplitude = 0.0;  // ueV, added to the channel baseline
  double rise = 65.0;      // ps
  double fall = 65.0;      // ps

  void validate() const;
  double end() const { return start + width; }
};

// Fraction of full amplitude reached at time t: a trapezoid that
// degenerates to a triangle when width <= rise + fall.
double pulse_envelope(const Pulse& p, double t);

struct LeverArm {
  double barrier = 100.0;  // ueV / mV
  double plunger = 30.0;   // ueV / mV
};

enum class Gate { Barrier, Plunger };

double mv_to_detuning(double voltage_mv, Gate gate, const LeverArm& arm = {});

struct WaveformSample {
  double eps_u = 0.0;
  double eps_l = 0.0;
};

class Schedule {
 public:
  Schedule() = default;

  // Throws ValidationError on overlapping same-channel pulses, bad pulse
  // fields, or a duration shorter than the last pulse.
  Schedule(double eps_u0, double eps_l0, std::vector<Pulse> pulses,
           double total_duration, double sync_offset = 0.0);

  double eps_u0() const noexcept { return eps_u0_; }
  double eps_l0() const noexcept { return eps_l0_; }
  const std::vector<Pulse>& pulses() const noexcept { return pulses_; }
  double total_duration() const noexcept { return total_duration_; }
  double sync_offset() const noexcept { return sync_offset_; }

  // Start of the pulse as seen by the qubit (Upper pulses are delayed by
  // the sync offset).
  double effective_start(const Pulse& p) const;

  // Throws OutOfRange for t outside [0, total_duration].
  WaveformSample evaluate(double t) const;

  // Same as evaluate() without the range check.
  WaveformSample evaluate_unchecked(double t) const;

  // Sorted, deduplicated slope discontinuities inside (0, total_duration).
  std::vector<double> breakpoints() const;

  // Largest |eps| either channel reaches.
  double max_abs_detuning() const;

 private:
  double eps_u0_ = -200.0;
  double eps_l0_ = -200.0;
  std::vector<Pulse> pulses_;
  double total_duration_ = 0.0;
  double sync_offset_ = 0.0;
};

// Edge shape and spacing shared by the schedule builders. Pulses meant to
// be rectangular (Rabi, two-pulse, tomography, the upper LZS pulse) use
// rect_rise/rect_fall; the short triangular pulses of the LZS, controlled
// rotation and synchronization sequences use the generator edges.
struct PulseShape {
  double rise = 65.0;      // generator edges, ps
  double fall = 65.0;
  double rect_rise = 0.0;  // edges of rectangular pulses, ps
  double rect_fall = 0.0;
  double gap = 100.0;      // between consecutive pulses
  double lead = 0.0;       // idle time before the first pulse
  double tail = 0.0;       // idle time after the last pulse
};

// Upper pulse of width w1 taking eps_u to the balance point.
Schedule rabi_schedule(double eps_u0, double eps_l0, double w1,
                       const PulseShape& shape = {});

// Lower pulse of width w2 taking eps_l to the balance point.
Schedule lower_rabi_schedule(double eps_u0, double eps_l0, double w2,
                             const PulseShape& shape = {});

// Lower pulse w2 at amplitude -eps_l0, then an upper pulse w1 at -eps_u0
// after shape.gap.
Schedule two_pulse_schedule(double eps_u0, double eps_l0, double w1, double w2,
                            const PulseShape& shape = {});

enum class InputLabel { k00, k10, k01, k11 };

// Rows of a tomography matrix use this order.
inline constexpr InputLabel kTomographyOrder[4] = {
    InputLabel::k00, InputLabel::k10, InputLabel::k01, InputLabel::k11};

InputLabel parse_input_label(std::string_view label);  // throws InvalidLabel
std::string to_string(InputLabel label);
int basis_index(InputLabel label);  // 2u + l

// Preparation and CNOT pulse widths of the tomography sequence.
struct TomographyWidths {
  double upper_prep = 360.0;     // upper 3pi
  double lower_prep = 390.0;     // lower 3pi
  double elevated_prep = 360.0;  // upper 3pi with the lower qubit in |1>
};

// Preparation pulses for the input label followed by the CNOT pulse of
// width w_i on the upper qubit at amplitude -eps_u0.
Schedule tomography_schedule(double eps_u0, double eps_l0, double j_coupling,
                             InputLabel input, double w_i,
                             const TomographyWidths& widths = {},
                             const PulseShape& shape = {});

// Lower pulse of width w2 and amplitude a2, followed by an upper pulse of
// width w1 at -eps_u0. Used for the LZS experiments with w2 = 100 ps.
Schedule lzs_schedule(double eps_u0, double eps_l0, double a2, double w1,
                      double w2 = 100.0, const PulseShape& shape = {});

// Two pulses of fixed amplitudes (lower first), used for controlled
// universal rotations.
Schedule controlled_rotation_schedule(double eps_u0, double eps_l0, double a1,
                                      double a2, double w1 = 100.0,
                                      double w2 = 100.0,
                                      const PulseShape& shape = {});

// Lower pulse then upper pulse, with the upper start placed
// predetermined_delay after the end of the lower pulse at the generator;
// the schedule's sync_offset adds the line delay on the upper channel.
Schedule sync_schedule(double eps_u0, double eps_l0, double a1, double a2,
                       double predetermined_delay, double sync_offset,
                       double w1 = 100.0, double w2 = 100.0,
                       const PulseShape& shape = {});

}  // namespace dqdsim
