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

#include "dqdsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "dqdsim/errors.hpp"

namespace dqdsim {

namespace {

// Populations are indexed 2u + l; tomography rows and columns run
// 00, 10, 01, 11.
constexpr std::array<int, 4> kTomographyIndex = {0, 2, 1, 3};

double upper_flip(const std::array<double, 4>& p) { return p[2] + p[3]; }

ProbabilityPair to_pair(const std::array<double, 4>& p) {
  return {p[0] + p[1], p[0] + p[2]};
}

ProbabilityMap empty_map(SweepGrid grid) {
  grid.validate();
  ProbabilityMap m;
  const auto ny = static_cast<Eigen::Index>(grid.ny());
  const auto nx = static_cast<Eigen::Index>(grid.nx());
  m.p_u0 = Eigen::MatrixXd::Zero(ny, nx);
  m.p_l0 = Eigen::MatrixXd::Zero(ny, nx);
  m.grid = std::move(grid);
  return m;
}

void store(ProbabilityMap& m, Eigen::Index row, Eigen::Index col,
           const std::array<double, 4>& pops) {
  const ProbabilityPair p = to_pair(pops);
  m.p_u0(row, col) = std::clamp(p.p_u0, 0.0, 1.0);
  m.p_l0(row, col) = std::clamp(p.p_l0, 0.0, 1.0);
}

// One row of a map whose x axis is the width of the schedule's last pulse.
void fill_width_row(ProbabilityMap& m, Eigen::Index row,
                    const std::function<Schedule(double)>& make,
                    const QubitPairParams& params, const ExperimentContext& ctx) {
  const auto pops =
      sweep_last_pulse_width(make, m.grid.x.values, params, ctx.dec, ctx.cfg);
  for (std::size_t i = 0; i < pops.size(); ++i) {
    store(m, row, static_cast<Eigen::Index>(i), pops[i]);
  }
}

int worker_count(const ExperimentContext& ctx) {
  if (ctx.parallel > 0) return ctx.parallel;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

SweepAxis make_axis(std::string name, std::string unit, double start,
                    double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ValidationError(name, "step must be positive");
  }
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw ValidationError(name, "range must satisfy start <= stop");
  }
  SweepAxis axis{std::move(name), std::move(unit), {}};
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    axis.values.push_back(start + static_cast<double>(i) * step);
  }
  return axis;
}

void SweepGrid::validate() const {
  auto check = [](const SweepAxis& a) {
    if (a.values.empty()) throw ValidationError(a.name, "axis is empty");
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (!std::isfinite(a.values[i])) {
        throw ValidationError(a.name, "axis values must be finite");
      }
    }
    const bool up = a.values.size() < 2 || a.values[1] > a.values[0];
    for (std::size_t i = 1; i < a.values.size(); ++i) {
      const bool ok = up ? a.values[i] > a.values[i - 1]
                         : a.values[i] < a.values[i - 1];
      if (!ok) throw ValidationError(a.name, "axis must be strictly monotone");
    }
  };
  check(x);
  if (y) check(*y);
}

void ExperimentContext::validate() const {
  params.validate();
  dec.validate();
  cfg.validate();
  if (parallel < 0) throw ValidationError("parallel", "must be >= 0");
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

ProbabilityMap run_rabi(const ExperimentContext& ctx,
                        const std::vector<double>& w1_values) {
  ctx.validate();
  ProbabilityMap m = empty_map({SweepAxis{"W1", "ps", w1_values}, std::nullopt});
  const QubitPairParams& p = ctx.params;
  fill_width_row(
      m, 0,
      [&](double w) { return rabi_schedule(p.eps_u0, p.eps_l0, w, ctx.shape); },
      p, ctx);
  return m;
}

ProbabilityMap run_conditional_rabi(const ExperimentContext& ctx,
                                    const std::vector<double>& w1_values,
                                    const std::vector<double>& eps_l_values) {
  ctx.validate();
  ProbabilityMap m = empty_map({SweepAxis{"W1", "ps", w1_values},
                                SweepAxis{"eps_L", "ueV", eps_l_values}});
  parallel_for(eps_l_values.size(), worker_count(ctx), [&](std::size_t row) {
    QubitPairParams p = ctx.params;
    p.eps_l0 = eps_l_values[row];
    fill_width_row(
        m, static_cast<Eigen::Index>(row),
        [&](double w) { return rabi_schedule(p.eps_u0, p.eps_l0, w, ctx.shape); },
        p, ctx);
  });
  return m;
}

ProbabilityMap run_two_pulse(const ExperimentContext& ctx,
                             const std::vector<double>& w1_values,
                             const std::vector<double>& w2_values) {
  ctx.validate();
  ProbabilityMap m = empty_map({SweepAxis{"W1", "ps", w1_values},
                                SweepAxis{"W2", "ps", w2_values}});
  const QubitPairParams& p = ctx.params;
  parallel_for(w2_values.size(), worker_count(ctx), [&](std::size_t row) {
    const double w2 = w2_values[row];
    fill_width_row(
        m, static_cast<Eigen::Index>(row),
        [&](double w1) {
          return two_pulse_schedule(p.eps_u0, p.eps_l0, w1, w2, ctx.shape);
        },
        p, ctx);
  });
  return m;
}

TomographyWidths locate_tomography_widths(const ExperimentContext& ctx) {
  ctx.validate();
  const QubitPairParams& p = ctx.params;
  TomographyWidths widths;
  widths.upper_prep =
      locate_npi_pulse(p, ctx.dec, 3, Channel::Upper, ctx.shape, ctx.cfg).width;
  widths.lower_prep =
      locate_npi_pulse(p, ctx.dec, 3, Channel::Lower, ctx.shape, ctx.cfg).width;

  // Upper 3pi with the lower qubit already flipped; the rotation runs at
  // delta_u around the shifted balance point.
  const double period = PhysicalConstants::planck_h / p.delta_u;
  const double edges = 0.5 * (ctx.shape.rect_rise + ctx.shape.rect_fall);
  std::vector<double> scan;
  for (double w = period + edges; w <= 2.0 * period + edges; w += 0.25) {
    scan.push_back(w);
  }
  TomographyWidths base = widths;
  const auto pops = sweep_last_pulse_width(
      [&](double w) {
        base.elevated_prep = w;
        return tomography_schedule(p.eps_u0, p.eps_l0, p.j_coupling,
                                   InputLabel::k11, 0.0, base, ctx.shape);
      },
      scan, p, ctx.dec, ctx.cfg);
  double best = -1.0;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (pops[i][3] > best) {
      best = pops[i][3];
      widths.elevated_prep = scan[i];
    }
  }
  return widths;
}

TomographyResult run_cnot_tomography(const ExperimentContext& ctx,
                                     const std::vector<double>& w_i_values,
                                     bool fixed_widths) {
  ctx.validate();
  SweepGrid({SweepAxis{"W_I", "ps", w_i_values}, std::nullopt}).validate();
  const QubitPairParams& p = ctx.params;
  TomographyResult out;
  out.w_i_values = w_i_values;
  if (fixed_widths) {
    out.widths = TomographyWidths{};
    out.operating_width = 360.0;
  } else {
    out.widths = locate_tomography_widths(ctx);
    out.operating_width = out.widths.upper_prep;
  }

  std::array<std::array<double, 4>, 4> rows{};
  parallel_for(4, worker_count(ctx), [&](std::size_t k) {
    const InputLabel in = kTomographyOrder[k];
    auto make = [&](double w) {
      return tomography_schedule(p.eps_u0, p.eps_l0, p.j_coupling, in, w,
                                 out.widths, ctx.shape);
    };
    const auto trace = sweep_last_pulse_width(make, w_i_values, p, ctx.dec, ctx.cfg);
    auto& dst = out.traces[k];
    dst.resize(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      for (int c = 0; c < 4; ++c) dst[i][c] = trace[i][kTomographyIndex[c]];
    }
    const auto pops =
        run_to_populations(make(out.operating_width), p, ctx.dec, ctx.cfg);
    for (int c = 0; c < 4; ++c) rows[k][c] = pops[kTomographyIndex[c]];
  });
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.d.d(r, c) = rows[r][c];
  }
  return out;
}

FidelityCurve run_fidelity_vs_j(const ExperimentContext& ctx,
                                const std::vector<double>& j_values,
                                const FidelityOptions& opts) {
  ctx.validate();
  if (j_values.empty()) throw ValidationError("j_values", "must not be empty");
  for (double j : j_values) {
    if (!(j > 0.0) || !std::isfinite(j)) {
      throw ValidationError("j_values", "every J must be positive");
    }
  }
  if (!(opts.w_i_max > 0.0)) throw ValidationError("w_i_max", "must be > 0");
  const std::vector<double> trace_widths =
      make_axis("W_I", "ps", 0.0, opts.w_i_max, opts.w_i_step).values;

  FidelityCurve curve;
  curve.points.resize(j_values.size());
  parallel_for(j_values.size(), worker_count(ctx), [&](std::size_t k) {
    QubitPairParams idle = ctx.params;
    idle.j_coupling = j_values[k];
    QubitPairParams blocked = idle;
    blocked.eps_l0 = opts.eps_l_blocked;
    auto make = [&](double w) {
      return rabi_schedule(blocked.eps_u0, blocked.eps_l0, w, ctx.shape);
    };

    const auto trace = sweep_last_pulse_width(make, trace_widths, blocked,
                                              DecoherenceParams::none(), ctx.cfg);
    std::vector<LeakagePoint> leak(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      leak[i] = {trace_widths[i], upper_flip(trace[i])};
    }
    const double a_k = leakage_amplitude(leak);

    const NpiPulse upper = locate_npi_pulse(idle, ctx.dec, opts.n_pi,
                                            Channel::Upper, ctx.shape, ctx.cfg);
    const NpiPulse lower = locate_npi_pulse(idle, ctx.dec, opts.n_pi,
                                            Channel::Lower, ctx.shape, ctx.cfg);
    const double a_k_prime = upper_flip(
        run_to_populations(make(upper.width), blocked, ctx.dec, ctx.cfg));

    FidelityPoint& pt = curve.points[k];
    pt.j = j_values[k];
    pt.w_3pi = upper.width;
    pt.report = make_fidelity_report(a_k, a_k_prime, upper.flip_probability,
                                     lower.flip_probability);
  });
  return curve;
}

ProbabilityMap run_lzs_control(const ExperimentContext& ctx, LzsAxis axis,
                               const std::vector<double>& y_values,
                               const std::vector<double>& w1_values,
                               double amplitude, double lower_width) {
  ctx.validate();
  const bool by_amplitude = axis == LzsAxis::Amplitude;
  ProbabilityMap m = empty_map(
      {SweepAxis{"W1", "ps", w1_values},
       SweepAxis{by_amplitude ? "A2" : "eps_L", "ueV", y_values}});
  parallel_for(y_values.size(), worker_count(ctx), [&](std::size_t row) {
    QubitPairParams p = ctx.params;
    double a2 = amplitude;
    if (by_amplitude) {
      a2 = y_values[row];
    } else {
      p.eps_l0 = y_values[row];
    }
    fill_width_row(
        m, static_cast<Eigen::Index>(row),
        [&](double w1) {
          return lzs_schedule(p.eps_u0, p.eps_l0, a2, w1, lower_width, ctx.shape);
        },
        p, ctx);
  });
  return m;
}

ProbabilityMap run_controlled_universal(const ExperimentContext& ctx,
                                        const std::vector<double>& eps_u_values,
                                        const std::vector<double>& eps_l_values,
                                        double amplitude_u, double amplitude_l,
                                        double width) {
  ctx.validate();
  ProbabilityMap m = empty_map({SweepAxis{"eps_U", "ueV", eps_u_values},
                                SweepAxis{"eps_L", "ueV", eps_l_values}});
  const std::size_t nx = eps_u_values.size();
  parallel_for(nx * eps_l_values.size(), worker_count(ctx), [&](std::size_t idx) {
    const std::size_t row = idx / nx;
    const std::size_t col = idx % nx;
    QubitPairParams p = ctx.params;
    p.eps_u0 = eps_u_values[col];
    p.eps_l0 = eps_l_values[row];
    const Schedule s = controlled_rotation_schedule(
        p.eps_u0, p.eps_l0, amplitude_u, amplitude_l, width, width, ctx.shape);
    store(m, static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col),
          run_to_populations(s, p, ctx.dec, ctx.cfg));
  });
  return m;
}

SyncScan run_sync_scan(const ExperimentContext& ctx,
                       const std::vector<double>& delays,
                       const std::vector<double>& a1_values,
                       const std::vector<double>& a2_values, double sync_offset,
                       double width) {
  ctx.validate();
  if (delays.empty()) throw ValidationError("delays", "must not be empty");
  SyncScan out;
  out.delays = delays;
  const SweepGrid grid{SweepAxis{"A1", "ueV", a1_values},
                       SweepAxis{"A2", "ueV", a2_values}};
  for (std::size_t d = 0; d < delays.size(); ++d) out.maps.push_back(empty_map(grid));

  const std::size_t nx = a1_values.size();
  const std::size_t per_map = nx * a2_values.size();
  const QubitPairParams& p = ctx.params;
  parallel_for(delays.size() * per_map, worker_count(ctx), [&](std::size_t idx) {
    const std::size_t d = idx / per_map;
    const std::size_t row = (idx % per_map) / nx;
    const std::size_t col = idx % nx;
    const Schedule s =
        sync_schedule(p.eps_u0, p.eps_l0, a1_values[col], a2_values[row],
                      delays[d], sync_offset, width, width, ctx.shape);
    store(out.maps[d], static_cast<Eigen::Index>(row),
          static_cast<Eigen::Index>(col),
          run_to_populations(s, p, ctx.dec, ctx.cfg));
  });
  return out;
}

double cross_dependence(const Eigen::MatrixXd& field) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < field.cols(); ++c) {
    worst = std::max(worst, field.col(c).maxCoeff() - field.col(c).minCoeff());
  }
  return worst;
}

}  // namespace dqdsim
