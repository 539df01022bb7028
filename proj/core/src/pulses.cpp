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

#include "dqdsim/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqdsim/errors.hpp"

namespace dqdsim {

void Pulse::validate() const {
  if (!(width > 0.0)) throw ValidationError("width", "must be > 0");
  if (!(rise >= 0.0)) throw ValidationError("rise", "must be >= 0");
  if (!(fall >= 0.0)) throw ValidationError("fall", "must be >= 0");
  if (!(start >= 0.0)) throw ValidationError("start", "must be >= 0");
  if (!std::isfinite(amplitude)) {
    throw ValidationError("amplitude", "must be finite");
  }
}

double pulse_envelope(const Pulse& p, double t) {
  const double tau = t - p.start;
  if (tau <= 0.0 || tau >= p.width) return 0.0;
  double v = 1.0;
  if (p.rise > 0.0) v = std::min(v, tau / p.rise);
  if (p.fall > 0.0) v = std::min(v, (p.width - tau) / p.fall);
  return std::max(0.0, v);
}

double mv_to_detuning(double voltage_mv, Gate gate, const LeverArm& arm) {
  return voltage_mv * (gate == Gate::Barrier ? arm.barrier : arm.plunger);
}

Schedule::Schedule(double eps_u0, double eps_l0, std::vector<Pulse> pulses,
                   double total_duration, double sync_offset)
    : eps_u0_(eps_u0),
      eps_l0_(eps_l0),
      pulses_(std::move(pulses)),
      total_duration_(total_duration),
      sync_offset_(sync_offset) {
  if (!std::isfinite(eps_u0_)) throw ValidationError("eps_u0", "must be finite");
  if (!std::isfinite(eps_l0_)) throw ValidationError("eps_l0", "must be finite");
  if (!std::isfinite(sync_offset_)) {
    throw ValidationError("sync_offset", "must be finite");
  }
  if (!(total_duration_ >= 0.0)) {
    throw ValidationError("total_duration", "must be >= 0");
  }
  for (const Pulse& p : pulses_) {
    p.validate();
    const double begin = effective_start(p);
    if (begin < 0.0) {
      throw ValidationError("sync_offset", "moves a pulse before t = 0");
    }
    if (begin + p.width > total_duration_ * (1.0 + 1e-12) + 1e-12) {
      throw ValidationError("total_duration", "ends before the last pulse");
    }
  }
  for (std::size_t i = 0; i < pulses_.size(); ++i) {
    for (std::size_t k = i + 1; k < pulses_.size(); ++k) {
      const Pulse& a = pulses_[i];
      const Pulse& b = pulses_[k];
      if (a.channel != b.channel) continue;
      if (a.start < b.end() && b.start < a.end()) {
        throw ValidationError("pulses", "same-channel pulses overlap");
      }
    }
  }
}

double Schedule::effective_start(const Pulse& p) const {
  return p.channel == Channel::Upper ? p.start + sync_offset_ : p.start;
}

WaveformSample Schedule::evaluate(double t) const {
  if (!(t >= 0.0 && t <= total_duration_)) {
    throw OutOfRange("t = " + std::to_string(t) + " ps outside [0, " +
                     std::to_string(total_duration_) + "]");
  }
  return evaluate_unchecked(t);
}

WaveformSample Schedule::evaluate_unchecked(double t) const {
  WaveformSample s{eps_u0_, eps_l0_};
  for (const Pulse& p : pulses_) {
    const double shift = effective_start(p) - p.start;
    const double v = p.amplitude * pulse_envelope(p, t - shift);
    if (p.channel == Channel::Upper) {
      s.eps_u += v;
    } else {
      s.eps_l += v;
    }
  }
  return s;
}

std::vector<double> Schedule::breakpoints() const {
  std::vector<double> out;
  for (const Pulse& p : pulses_) {
    const double s = effective_start(p);
    out.push_back(s);
    out.push_back(s + p.width);
    if (p.width > p.rise + p.fall) {
      out.push_back(s + p.rise);
      out.push_back(s + p.width - p.fall);
    } else if (p.rise + p.fall > 0.0) {
      // triangle apex where tau / rise = (width - tau) / fall
      out.push_back(s + p.width * p.rise / (p.rise + p.fall));
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double t : out) {
    if (t <= 0.0 || t >= total_duration_) continue;
    if (!unique.empty() && t - unique.back() < 1e-9) continue;
    unique.push_back(t);
  }
  return unique;
}

double Schedule::max_abs_detuning() const {
  double m = std::max(std::abs(eps_u0_), std::abs(eps_l0_));
  auto probe = [&](double t) {
    const WaveformSample s = evaluate_unchecked(t);
    m = std::max({m, std::abs(s.eps_u), std::abs(s.eps_l)});
  };
  // The waveform is piecewise linear, so extremes sit on breakpoints.
  for (double t : breakpoints()) probe(t);
  probe(0.0);
  probe(total_duration_);
  return m;
}

namespace {

// Collects pulses laid out back to back with the shape's gap.
class SequenceBuilder {
 public:
  SequenceBuilder(const PulseShape& shape) : shape_(shape), cursor_(shape.lead) {}

  // A zero width pulse adds nothing, but still consumes the gap slot so
  // that sequences keep their timing.
  void add(Channel channel, double width, double amplitude, bool rectangular) {
    if (width < 0.0) throw ValidationError("width", "must be >= 0");
    if (started_) cursor_ += shape_.gap;
    started_ = true;
    if (width > 0.0) {
      const double rise = rectangular ? shape_.rect_rise : shape_.rise;
      const double fall = rectangular ? shape_.rect_fall : shape_.fall;
      pulses_.push_back(Pulse{channel, cursor_, width, amplitude, rise, fall});
    }
    cursor_ += width;
  }

  Schedule finish(double eps_u0, double eps_l0) {
    return Schedule(eps_u0, eps_l0, std::move(pulses_), cursor_ + shape_.tail);
  }

 private:
  PulseShape shape_;
  double cursor_;
  bool started_ = false;
  std::vector<Pulse> pulses_;
};

}  // namespace

Schedule rabi_schedule(double eps_u0, double eps_l0, double w1,
                       const PulseShape& shape) {
  SequenceBuilder seq(shape);
  seq.add(Channel::Upper, w1, -eps_u0, true);
  return seq.finish(eps_u0, eps_l0);
}

Schedule lower_rabi_schedule(double eps_u0, double eps_l0, double w2,
                             const PulseShape& shape) {
  SequenceBuilder seq(shape);
  seq.add(Channel::Lower, w2, -eps_l0, true);
  return seq.finish(eps_u0, eps_l0);
}

Schedule two_pulse_schedule(double eps_u0, double eps_l0, double w1, double w2,
                            const PulseShape& shape) {
  SequenceBuilder seq(shape);
  seq.add(Channel::Lower, w2, -eps_l0, true);
  seq.add(Channel::Upper, w1, -eps_u0, true);
  return seq.finish(eps_u0, eps_l0);
}

InputLabel parse_input_label(std::string_view label) {
  if (label == "00") return InputLabel::k00;
  if (label == "10") return InputLabel::k10;
  if (label == "01") return InputLabel::k01;
  if (label == "11") return InputLabel::k11;
  throw InvalidLabel("unknown input label '" + std::string(label) +
                     "', expected one of 00, 10, 01, 11");
}

std::string to_string(InputLabel label) {
  switch (label) {
    case InputLabel::k00: return "00";
    case InputLabel::k10: return "10";
    case InputLabel::k01: return "01";
    case InputLabel::k11: return "11";
  }
  return "??";
}

int basis_index(InputLabel label) {
  switch (label) {
    case InputLabel::k00: return 0;
    case InputLabel::k01: return 1;
    case InputLabel::k10: return 2;
    case InputLabel::k11: return 3;
  }
  return 0;
}

Schedule tomography_schedule(double eps_u0, double eps_l0, double j_coupling,
                             InputLabel input, double w_i,
                             const TomographyWidths& widths,
                             const PulseShape& shape) {
  SequenceBuilder seq(shape);
  switch (input) {
    case InputLabel::k00:
      break;
    case InputLabel::k10:
      seq.add(Channel::Upper, widths.upper_prep, -eps_u0, true);
      break;
    case InputLabel::k01:
      seq.add(Channel::Lower, widths.lower_prep, -eps_l0, true);
      break;
    case InputLabel::k11:
      seq.add(Channel::Lower, widths.lower_prep, -eps_l0, true);
      // With the lower qubit in |1> the upper balance point sits J higher.
      seq.add(Channel::Upper, widths.elevated_prep, -eps_u0 + j_coupling,
              true);
      break;
  }
  seq.add(Channel::Upper, w_i, -eps_u0, true);
  return seq.finish(eps_u0, eps_l0);
}

Schedule lzs_schedule(double eps_u0, double eps_l0, double a2, double w1,
                      double w2, const PulseShape& shape) {
  SequenceBuilder seq(shape);
  seq.add(Channel::Lower, w2, a2, false);
  seq.add(Channel::Upper, w1, -eps_u0, true);
  return seq.finish(eps_u0, eps_l0);
}

Schedule controlled_rotation_schedule(double eps_u0, double eps_l0, double a1,
                                      double a2, double w1, double w2,
                                      const PulseShape& shape) {
  SequenceBuilder seq(shape);
  seq.add(Channel::Lower, w2, a2, false);
  seq.add(Channel::Upper, w1, a1, false);
  return seq.finish(eps_u0, eps_l0);
}

Schedule sync_schedule(double eps_u0, double eps_l0, double a1, double a2,
                       double predetermined_delay, double sync_offset,
                       double w1, double w2, const PulseShape& shape) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) {
    throw ValidationError("width", "sync pulses must have width > 0");
  }
  // Generator-side upper start relative to the lower start.
  const double upper_offset = w2 + predetermined_delay;
  const double lower_start =
      shape.lead + std::max({0.0, -upper_offset, -(upper_offset + sync_offset)});
  const double upper_start = lower_start + upper_offset;
  std::vector<Pulse> pulses{
      Pulse{Channel::Lower, lower_start, w2, a2, shape.rise, shape.fall},
      Pulse{Channel::Upper, upper_start, w1, a1, shape.rise, shape.fall}};
  const double end =
      std::max(lower_start + w2, upper_start + sync_offset + w1);
  return Schedule(eps_u0, eps_l0, std::move(pulses), end + shape.tail,
                  sync_offset);
}

}  // namespace dqdsim
