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

#include "dqdsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "dqdsim/errors.hpp"

namespace dqdsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  phi = std::remainder(phi, kTwoPi);
  return phi <= -std::numbers::pi ? phi + kTwoPi : phi;
}

// Least-squares line through (x, y); returns {slope, intercept}.
std::array<double, 2> fit_line(std::span<const double> x,
                               std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

std::complex<double> fourier_coefficient(std::span<const double> x,
                                         std::span<const double> y,
                                         double freq) {
  std::complex<double> c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c += y[i] * std::polar(1.0, -kTwoPi * freq * x[i]);
  }
  return c;
}

std::vector<double> remove_mean(std::span<const double> y) {
  const double m =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  std::vector<double> out(y.begin(), y.end());
  for (double& v : out) v -= m;
  return out;
}

// Parameter vector: a0, decay rate g = 1/t2, freq (cycles/ps), b0, a1, a2.
using Params = Eigen::Matrix<double, 6, 1>;

double model(const Params& p, double w) {
  const double gw = p(1) * w;
  return p(0) * std::exp(-gw * gw) * std::cos(kTwoPi * p(2) * w + p(3)) +
         p(4) * w + p(5);
}

}  // namespace

double RabiFit::evaluate(double width) const {
  const double decay =
      std::isfinite(t2_star) ? std::exp(-std::pow(width / t2_star, 2)) : 1.0;
  return a0 * decay * std::cos(kTwoPi * freq * 1e-3 * width + b0) +
         a1 * width + a2;
}

double dominant_frequency(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) throw InsufficientData("need at least two samples");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) throw InsufficientData("samples span no range");
  const std::vector<double> centered = remove_mean(y);
  const double spacing = span / static_cast<double>(x.size() - 1);
  const double f_min = 0.5 / span;
  const double f_max = 0.5 / spacing;
  const double df = 0.1 / span;
  double best_f = f_min;
  double best_power = -1.0;
  for (double f = f_min; f <= f_max; f += df) {
    const double power = std::norm(fourier_coefficient(x, centered, f));
    if (power > best_power) {
      best_power = power;
      best_f = f;
    }
  }
  // Golden-section polish inside the winning grid cell.
  double a = std::max(f_min, best_f - df);
  double b = std::min(f_max, best_f + df);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 60; ++it) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (std::norm(fourier_coefficient(x, centered, c)) >
        std::norm(fourier_coefficient(x, centered, d))) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

double phase_difference(std::span<const double> x, std::span<const double> a,
                        std::span<const double> b) {
  const double f = dominant_frequency(x, a);
  const std::vector<double> ca = remove_mean(a);
  const std::vector<double> cb = remove_mean(b);
  const std::complex<double> za = fourier_coefficient(x, ca, f);
  const std::complex<double> zb = fourier_coefficient(x, cb, f);
  return wrap_phase(std::arg(zb) - std::arg(za));
}

RabiFit fit_rabi(std::span<const RabiSample> samples,
                 const std::optional<RabiFitGuess>& initial_guess) {
  if (samples.size() < 20) {
    throw InsufficientData("fit_rabi needs at least 20 samples, got " +
                           std::to_string(samples.size()));
  }
  std::vector<RabiSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RabiSample& l, const RabiSample& r) { return l.width < r.width; });
  std::vector<double> x(sorted.size()), y(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    x[i] = sorted[i].width;
    y[i] = sorted[i].probability;
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InsufficientData("samples must be finite");
    }
  }
  const double span = x.back() - x.front();
  if (!(span > 0.0)) throw InsufficientData("samples span no width range");

  Params p;
  bool constrained = true;
  if (initial_guess) {
    const RabiFitGuess& g = *initial_guess;
    p << g.a0, (std::isfinite(g.t2_star) && g.t2_star > 0.0 ? 1.0 / g.t2_star : 0.0),
        g.freq * 1e-3, g.b0, g.a1, g.a2;
  } else {
    const auto [slope, intercept] = fit_line(x, y);
    std::vector<double> detrended(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      detrended[i] = y[i] - (slope * x[i] + intercept);
    }
    const double scale = std::max(1.0, std::abs(intercept));
    double max_dev = 0.0;
    for (double v : detrended) max_dev = std::max(max_dev, std::abs(v));
    double f0 = 1.0 / span;
    double a0 = 0.0;
    double b0 = 0.0;
    if (max_dev > 1e-9 * scale) {
      f0 = dominant_frequency(x, detrended);
      const std::complex<double> c = fourier_coefficient(x, detrended, f0);
      a0 = 2.0 * std::abs(c) / static_cast<double>(x.size());
      b0 = std::arg(c);
    }
    if (a0 <= 1e-9 * scale) constrained = false;
    p << a0, 1.0 / span, f0, b0, slope, intercept;
  }

  if (!constrained) {
    // Flat data: only the line is identifiable.
    const auto [slope, intercept] = fit_line(x, y);
    RabiFit fit;
    fit.a0 = 0.0;
    fit.t2_star = std::numeric_limits<double>::infinity();
    fit.freq = p(2) * 1e3;
    fit.b0 = 0.0;
    fit.a1 = slope;
    fit.a2 = intercept;
    fit.frequency_constrained = false;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (slope * x[i] + intercept);
      ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(x.size()));
    return fit;
  }
  if (span * std::abs(p(2)) < 2.0) {
    throw InsufficientData("samples cover fewer than two oscillation periods");
  }

  const int n = static_cast<int>(x.size());
  Params typical;
  typical << 1.0, 1.0 / span, 1.0 / span, 1.0, 1.0 / span, 1.0;

  auto residuals = [&](const Params& q) {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = y[i] - model(q, x[i]);
    return r;
  };
  auto jacobian = [&](const Params& q) {
    Eigen::MatrixXd jac(n, 6);
    for (int k = 0; k < 6; ++k) {
      const double h = 1e-6 * std::max(std::abs(q(k)), typical(k));
      Params up = q, down = q;
      up(k) += h;
      down(k) -= h;
      for (int i = 0; i < n; ++i) {
        jac(i, k) = (model(up, x[i]) - model(down, x[i])) / (2.0 * h);
      }
    }
    return jac;
  };

  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool accepted_any = false;
  int iter = 0;
  for (; iter < 500; ++iter) {
    const Eigen::MatrixXd jac = jacobian(p);
    const Eigen::Matrix<double, 6, 6> jtj = jac.transpose() * jac;
    const Params jtr = jac.transpose() * r;  // r = y - model
    const double diag_floor = 1e-12 * std::max(1e-300, jtj.diagonal().maxCoeff());
    bool improved = false;
    Params delta = Params::Zero();
    while (lambda < 1e16) {
      Eigen::Matrix<double, 6, 6> a = jtj;
      for (int k = 0; k < 6; ++k) {
        a(k, k) += lambda * std::max(jtj(k, k), diag_floor);
      }
      delta = a.ldlt().solve(jtr);
      const Params trial = p + delta;
      const Eigen::VectorXd r_trial = residuals(trial);
      const double trial_cost = r_trial.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        p = trial;
        r = r_trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        accepted_any = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) {
      if (!accepted_any && cost > 1e-20 * n) {
        throw FitDiverged("no damped step reduced the residual");
      }
      break;
    }
    double rel = 0.0;
    for (int k = 0; k < 6; ++k) {
      rel = std::max(rel, std::abs(delta(k)) / (std::abs(p(k)) + typical(k)));
    }
    if (rel < 1e-8) {
      ++iter;
      break;
    }
  }
  if (!p.allFinite()) throw FitDiverged("fit produced non-finite parameters");

  RabiFit fit;
  double a0 = p(0), f = p(2), b0 = p(3);
  if (f < 0.0) {
    f = -f;
    b0 = -b0;
  }
  if (a0 < 0.0) {
    a0 = -a0;
    b0 += std::numbers::pi;
  }
  fit.a0 = a0;
  fit.t2_star = p(1) != 0.0 ? 1.0 / std::abs(p(1))
                            : std::numeric_limits<double>::infinity();
  fit.freq = f * 1e3;
  fit.b0 = wrap_phase(b0);
  fit.a1 = p(4);
  fit.a2 = p(5);
  fit.residual_rms = std::sqrt(cost / static_cast<double>(n));
  fit.iterations = iter;
  return fit;
}

double leakage_amplitude(std::span<const LeakagePoint> trace) {
  if (trace.empty()) throw InsufficientData("leakage trace is empty");
  double m = trace.front().flip_probability;
  for (const LeakagePoint& p : trace) m = std::max(m, p.flip_probability);
  return m;
}

ProcessFidelity process_fidelity(double f_u, double f_l, double a_k_prime) {
  ProcessFidelity out;
  const double keep = 1.0 - a_k_prime;
  out.per_process = {
      f_u,
      f_u * f_u + (1.0 - f_u) * (1.0 - f_u),
      keep * f_l,
      keep * f_u * f_l + a_k_prime * (1.0 - f_u) * f_l,
  };
  out.f_prime = *std::min_element(out.per_process.begin(), out.per_process.end());
  return out;
}

FidelityReport make_fidelity_report(double a_k, double a_k_prime, double f_u,
                                    double f_l) {
  FidelityReport rep;
  rep.a_k = a_k;
  rep.f = 1.0 - a_k;
  rep.a_k_prime = a_k_prime;
  rep.f_u = f_u;
  rep.f_l = f_l;
  const ProcessFidelity pf = process_fidelity(f_u, f_l, a_k_prime);
  rep.per_process = pf.per_process;
  rep.f_prime = pf.f_prime;
  return rep;
}

bool TomographyMatrix::rows_normalized(double tol) const {
  for (int i = 0; i < 4; ++i) {
    if (std::abs(d.row(i).sum() - 1.0) > tol) return false;
  }
  return true;
}

double cnot_success_min(const TomographyMatrix& d) {
  double m = 1.0;
  for (int i = 0; i < 4; ++i) m = std::min(m, d.d(i, kCnotTarget[i]));
  return m;
}

TomographyMatrix ideal_cnot() {
  TomographyMatrix t;
  for (int i = 0; i < 4; ++i) t.d(i, kCnotTarget[i]) = 1.0;
  return t;
}

NpiPulse locate_npi_pulse(const QubitPairParams& params,
                          const DecoherenceParams& dec, int n_pi,
                          Channel channel, const PulseShape& shape,
                          const IntegrationConfig& cfg, double resolution) {
  if (n_pi < 1) throw ValidationError("n_pi", "must be >= 1");
  if (!(resolution > 0.0)) throw ValidationError("resolution", "must be > 0");
  const bool upper = channel == Channel::Upper;
  const double delta = upper ? params.delta_u : params.delta_l;
  const double period = PhysicalConstants::planck_h / delta;
  const double edges = 0.5 * (shape.rect_rise + shape.rect_fall);
  const double lo = std::max(resolution, 0.5 * (n_pi - 1) * period + edges);
  const double hi = 0.5 * (n_pi + 1) * period + edges;

  std::vector<double> widths;
  for (double w = lo; w <= hi; w += resolution) widths.push_back(w);
  auto make = [&](double w) {
    return upper ? rabi_schedule(params.eps_u0, params.eps_l0, w, shape)
                 : lower_rabi_schedule(params.eps_u0, params.eps_l0, w, shape);
  };
  const auto pops = sweep_last_pulse_width(make, widths, params, dec, cfg);
  NpiPulse best;
  best.flip_probability = -1.0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const auto& p = pops[i];
    const double flip = upper ? p[2] + p[3] : p[1] + p[3];
    if (flip > best.flip_probability) best = {widths[i], flip};
  }
  return best;
}

double pulse_flip_fidelity(const QubitPairParams& params,
                           const DecoherenceParams& dec, int n_pi,
                           Channel channel, const PulseShape& shape,
                           const IntegrationConfig& cfg) {
  if (n_pi % 2 == 0) throw ValidationError("n_pi", "must be odd");
  return locate_npi_pulse(params, dec, n_pi, channel, shape, cfg)
      .flip_probability;
}

ProbabilityPair analytic_two_pulse(double alpha, double beta) {
  const double sa = std::sin(alpha);
  const double cb = std::cos(beta);
  return {1.0 - sa * sa * cb * cb, cb * cb};
}

ProbabilityPair analytic_lzs(double u_squared, double alpha) {
  if (!(u_squared >= 0.0 && u_squared <= 1.0)) {
    throw ValidationError("u_squared", "must lie in [0, 1]");
  }
  const double sa = std::sin(alpha);
  return {1.0 - u_squared * sa * sa, u_squared};
}

ProbabilityPair analytic_lzs_universal(double u_squared, double v_squared) {
  if (!(u_squared >= 0.0 && u_squared <= 1.0)) {
    throw ValidationError("u_squared", "must lie in [0, 1]");
  }
  if (!(v_squared >= 0.0 && v_squared <= 1.0)) {
    throw ValidationError("v_squared", "must lie in [0, 1]");
  }
  return {1.0 - v_squared * u_squared, u_squared};
}

}  // namespace dqdsim
