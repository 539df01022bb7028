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

#include "dqdsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dqdsim/errors.hpp"

namespace dqdsim {

void DecoherenceParams::validate() const {
  if (!(t2_star > 0.0)) throw ValidationError("t2_star", "must be > 0");
  if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) {
    throw ValidationError("gamma1", "must be finite and >= 0");
  }
}

void IntegrationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("dt", "must be finite and > 0");
  }
  if (record_stride < 0) throw ValidationError("record_stride", "must be >= 0");
}

namespace {

Matrix4 dephasing_rates(const DecoherenceParams& dec) {
  Matrix4 g = Matrix4::Zero();
  if (dec.has_dephasing()) {
    g.setConstant(1.0 / dec.t2_star);
    g.diagonal().setZero();
  }
  return g;
}

Matrix4 hamiltonian_at(const Schedule& s, const QubitPairParams& params,
                       double t) {
  const WaveformSample e = s.evaluate_unchecked(t);
  return build_hamiltonian(params, e.eps_u, e.eps_l).entries();
}

// The waveform restricted to one piece between breakpoints. It is linear
// there, so two interior samples give it exactly, including the one-sided
// limits at the ends where a rectangular edge jumps.
class Piece {
 public:
  Piece(const Schedule& s, double a, double b) : a_(a), len_(b - a) {
    const WaveformSample q1 = s.evaluate_unchecked(a + 0.25 * len_);
    const WaveformSample q3 = s.evaluate_unchecked(a + 0.75 * len_);
    du_ = 2.0 * (q3.eps_u - q1.eps_u);
    dl_ = 2.0 * (q3.eps_l - q1.eps_l);
    u0_ = q1.eps_u - 0.25 * du_;
    l0_ = q1.eps_l - 0.25 * dl_;
  }

  Matrix4 hamiltonian(const QubitPairParams& params, double t) const {
    const double x = (t - a_) / len_;
    return build_hamiltonian(params, u0_ + x * du_, l0_ + x * dl_).entries();
  }

 private:
  double a_, len_;
  double u0_ = 0.0, du_ = 0.0, l0_ = 0.0, dl_ = 0.0;
};

double spectral_radius(const Matrix4& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Splits [t0, t1] at the schedule breakpoints and calls step(t, h) for
// equal steps of at most dt inside each piece, step(t, h, piece).
template <typename StepFn>
void for_each_step(const Schedule& s, double t0, double t1, double dt,
                   StepFn&& step) {
  if (!(t1 > t0)) return;
  std::vector<double> cuts{t0};
  for (double b : s.breakpoints()) {
    if (b > t0 && b < t1) cuts.push_back(b);
  }
  cuts.push_back(t1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const long n = std::max(1L, static_cast<long>(std::ceil(len / dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    const Piece piece(s, cuts[k], cuts[k + 1]);
    for (long i = 0; i < n; ++i) {
      step(cuts[k] + static_cast<double>(i) * h, h, piece);
    }
  }
}

// rhs(H, x) with H taken from the piece at each stage time.
template <typename Rhs, typename State>
State rk4(const Rhs& rhs, const Piece& piece, const QubitPairParams& params,
          const State& x, double t, double h) {
  const Matrix4 h0 = piece.hamiltonian(params, t);
  const Matrix4 hm = piece.hamiltonian(params, t + 0.5 * h);
  const Matrix4 h1 = piece.hamiltonian(params, t + h);
  const State k1 = rhs(h0, x);
  const State k2 = rhs(hm, State(x + (0.5 * h) * k1));
  const State k3 = rhs(hm, State(x + (0.5 * h) * k2));
  const State k4 = rhs(h1, State(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Shared driver for both forms: records every stride steps and at the end.
template <typename State, typename Rhs, typename Sample>
Trajectory integrate(State& x, const Schedule& s, const QubitPairParams& params,
                     const IntegrationConfig& cfg, const Rhs& rhs,
                     const Sample& sample) {
  Trajectory traj;
  auto record = [&](double t) {
    if (!traj.times.empty() && t <= traj.times.back()) return;
    traj.times.push_back(t);
    sample(x, traj);
  };
  if (cfg.record_stride > 0) record(0.0);
  long count = 0;
  double t_now = 0.0;
  for_each_step(s, 0.0, s.total_duration(), cfg.dt, [&](double t, double h, const Piece& piece) {
    x = rk4(rhs, piece, params, x, t, h);
    t_now = t + h;
    ++count;
    if (cfg.record_stride > 0 && count % cfg.record_stride == 0) {
      record(t_now);
    }
  });
  record(s.total_duration());
  return traj;
}

}  // namespace

void check_step_bound(const Schedule& s, const QubitPairParams& params,
                      const IntegrationConfig& cfg) {
  cfg.validate();
  // |H(t)| is convex along each linear piece, so the piece ends bound it.
  // Rectangular edges jump, so each piece is also probed just inside.
  std::vector<double> cuts = s.breakpoints();
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(s.total_duration());
  std::vector<double> probes = cuts;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    probes.push_back(cuts[k] + 1e-9 * len);
    probes.push_back(cuts[k + 1] - 1e-9 * len);
  }
  double radius = 0.0;
  for (double t : probes) {
    radius = std::max(radius, spectral_radius(hamiltonian_at(s, params, t)));
  }
  const double phase = cfg.dt * radius / PhysicalConstants::hbar;
  if (!(phase < IntegrationConfig::kMaxPhasePerStep)) {
    throw StepTooLarge("dt = " + std::to_string(cfg.dt) +
                       " ps gives a phase of " + std::to_string(phase) +
                       " rad per step; the limit is 0.1 rad");
  }
}

ComplexEvolution evolve_complex(const DensityMatrix& rho0, const Schedule& s,
                                const QubitPairParams& params,
                                const DecoherenceParams& dec,
                                const IntegrationConfig& cfg) {
  params.validate();
  dec.validate();
  rho0.validate();
  check_step_bound(s, params, cfg);

  const Matrix4 g = dephasing_rates(dec);
  const ComplexMatrix4 initial = rho0.entries();
  const Complex minus_i_over_hbar(0.0, -1.0 / PhysicalConstants::hbar);
  auto rhs = [&](const Matrix4& hr, const ComplexMatrix4& rho) -> ComplexMatrix4 {
    const ComplexMatrix4 h = hr.cast<Complex>();
    ComplexMatrix4 d = minus_i_over_hbar * (h * rho - rho * h);
    if (dec.gamma1 > 0.0) d -= dec.gamma1 * (rho - initial);
    d -= g.cast<Complex>().cwiseProduct(rho);
    return d;
  };
  auto sample = [&](const ComplexMatrix4& rho, Trajectory& traj) {
    const DensityMatrix state(rho);
    traj.probabilities.push_back(probabilities(state));
    if (cfg.keep_states) traj.states.push_back(state);
  };

  ComplexMatrix4 rho = initial;
  Trajectory traj = integrate(rho, s, params, cfg, rhs, sample);
  return {DensityMatrix(rho), std::move(traj)};
}

namespace {

// dW/dt = -(1/hbar)[H, W^T] - gamma1 (W - W0) - G o W
Matrix4 real_rhs(const Matrix4& h, const Matrix4& w, const Matrix4& w0,
                 double gamma1, const Matrix4& g) {
  const Matrix4 wt = w.transpose();
  Matrix4 d = (-1.0 / PhysicalConstants::hbar) * (h * wt - wt * h);
  if (gamma1 > 0.0) d -= gamma1 * (w - w0);
  d -= g.cwiseProduct(w);
  return d;
}

}  // namespace

RealEvolution evolve_real(const RealStateMatrix& w0, const Schedule& s,
                          const QubitPairParams& params,
                          const DecoherenceParams& dec,
                          const IntegrationConfig& cfg) {
  params.validate();
  dec.validate();
  from_real_form(w0).validate();
  check_step_bound(s, params, cfg);

  const Matrix4 g = dephasing_rates(dec);
  const Matrix4 initial = w0.entries();
  auto rhs = [&](const Matrix4& h, const Matrix4& w) -> Matrix4 {
    return real_rhs(h, w, initial, dec.gamma1, g);
  };
  auto sample = [&](const Matrix4& w, Trajectory& traj) {
    const RealStateMatrix state(w);
    traj.probabilities.push_back(probabilities(state));
    if (cfg.keep_states) traj.states.push_back(from_real_form(state));
  };

  Matrix4 w = initial;
  Trajectory traj = integrate(w, s, params, cfg, rhs, sample);
  return {RealStateMatrix(w), std::move(traj)};
}

std::array<double, 4> run_to_populations(const Schedule& s,
                                         const QubitPairParams& params,
                                         const DecoherenceParams& dec,
                                         const IntegrationConfig& cfg) {
  IntegrationConfig final_only = cfg;
  final_only.record_stride = 0;
  final_only.keep_states = false;
  const DensityMatrix rho0 =
      thermal_initial_state(params, s.eps_u0(), s.eps_l0());
  const RealEvolution out =
      evolve_real(to_real_form(rho0), s, params, dec, final_only);
  return read_populations(out.final_state, s, params, cfg);
}

std::array<double, 4> read_populations(const RealStateMatrix& w,
                                       const Schedule& s,
                                       const QubitPairParams& params,
                                       const IntegrationConfig& cfg) {
  if (cfg.readout == Readout::Averaged) {
    return averaged_populations(w, params, s.eps_u0(), s.eps_l0());
  }
  return populations(w);
}

ProbabilityPair run_to_probabilities(const Schedule& s,
                                     const QubitPairParams& params,
                                     const DecoherenceParams& dec,
                                     const IntegrationConfig& cfg) {
  const auto p = run_to_populations(s, params, dec, cfg);
  return {p[0] + p[1], p[0] + p[2]};
}

RealStepper::RealStepper(const Schedule& s, const QubitPairParams& params,
                         const DecoherenceParams& dec,
                         const IntegrationConfig& cfg,
                         const RealStateMatrix& w0)
    : schedule_(s),
      params_(params),
      dt_(cfg.dt),
      gamma1_(dec.gamma1),
      dephasing_(dephasing_rates(dec)),
      w_initial_(w0.entries()),
      w_(w0.entries()) {
  params.validate();
  dec.validate();
  check_step_bound(s, params, cfg);
}

void RealStepper::rebind(const Schedule& s) { schedule_ = s; }

void RealStepper::advance_to(double t_target) {
  const double t1 = std::min(t_target, schedule_.total_duration());
  const double t0 = t_;
  auto rhs = [&](const Matrix4& hm, const Matrix4& w) -> Matrix4 {
    return real_rhs(hm, w, w_initial_, gamma1_, dephasing_);
  };
  for_each_step(schedule_, t0, t1, dt_, [&](double t, double h, const Piece& piece) {
    t_ = t;
    w_ = rk4(rhs, piece, params_, w_, t_, h);
  });
  if (t1 > t0) t_ = t1;
}

std::vector<std::array<double, 4>> sweep_last_pulse_width(
    const std::function<Schedule(double)>& make, std::span<const double> widths,
    const QubitPairParams& params, const DecoherenceParams& dec,
    const IntegrationConfig& cfg) {
  std::vector<std::array<double, 4>> out(widths.size());
  if (widths.empty()) return out;

  std::vector<std::size_t> order(widths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return widths[a] < widths[b]; });

  const double w_max = widths[order.back()];
  const Schedule base = make(w_max);
  const Pulse* last = nullptr;
  for (const Pulse& p : base.pulses()) {
    if (last == nullptr || base.effective_start(p) >= base.effective_start(*last)) {
      last = &p;
    }
  }
  if (last == nullptr) {
    // Nothing to share: every width leaves the schedule empty.
    for (std::size_t i = 0; i < widths.size(); ++i) {
      out[i] = run_to_populations(make(widths[i]), params, dec, cfg);
    }
    return out;
  }
  const double start = base.effective_start(*last);
  const double edges = last->rise + last->fall;
  const double fall = last->fall;

  const DensityMatrix rho0 =
      thermal_initial_state(params, base.eps_u0(), base.eps_l0());
  RealStepper shared(base, params, dec, cfg, to_real_form(rho0));
  for (std::size_t idx : order) {
    const double w = widths[idx];
    if (!(w > edges)) {
      out[idx] = run_to_populations(make(w), params, dec, cfg);
      continue;
    }
    shared.advance_to(start + w - fall);
    RealStepper branch = shared;
    branch.rebind(make(w));
    branch.advance_to(branch.schedule().total_duration());
    out[idx] = read_populations(RealStateMatrix(branch.state()),
                                branch.schedule(), params, cfg);
  }
  return out;
}

}  // namespace dqdsim
