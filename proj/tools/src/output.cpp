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

#include "dqdsim/cli/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dqdsim/errors.hpp"

namespace dqdsim::cli {

namespace {

using Rgb = std::array<int, 3>;

// Five-stop approximation of the viridis map.
constexpr std::array<Rgb, 5> kViridis = {{{68, 1, 84},
                                          {59, 82, 139},
                                          {33, 145, 140},
                                          {94, 201, 98},
                                          {253, 231, 37}}};

Rgb colour(double v, const std::string& map) {
  v = std::clamp(v, 0.0, 1.0);
  if (map == "gray") {
    const int g = static_cast<int>(std::lround(255.0 * v));
    return {g, g, g};
  }
  const double pos = v * (kViridis.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), kViridis.size() - 2);
  const double f = pos - static_cast<double>(i);
  Rgb out{};
  for (int c = 0; c < 3; ++c) {
    out[c] = static_cast<int>(
        std::lround(kViridis[i][c] + f * (kViridis[i + 1][c] - kViridis[i][c])));
  }
  return out;
}

std::string axis_label(const SweepAxis& a) { return a.name + " (" + a.unit + ")"; }

}  // namespace

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string map_csv(const ProbabilityMap& map) {
  std::ostringstream out;
  const auto& xs = map.grid.x.values;
  if (!map.grid.y) {
    out << "x,p_u0,p_l0\n";
    for (std::size_t c = 0; c < xs.size(); ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      out << format_value(xs[c]) << ',' << format_value(map.p_u0(0, col)) << ','
          << format_value(map.p_l0(0, col)) << '\n';
    }
    return out.str();
  }
  const auto& ys = map.grid.y->values;
  out << "x,y,p_u0,p_l0\n";
  for (std::size_t r = 0; r < ys.size(); ++r) {
    for (std::size_t c = 0; c < xs.size(); ++c) {
      const auto row = static_cast<Eigen::Index>(r);
      const auto col = static_cast<Eigen::Index>(c);
      out << format_value(xs[c]) << ',' << format_value(ys[r]) << ','
          << format_value(map.p_u0(row, col)) << ','
          << format_value(map.p_l0(row, col)) << '\n';
    }
  }
  return out.str();
}

std::string tomography_csv(const TomographyMatrix& d) {
  std::ostringstream out;
  out << "input,output,probability\n";
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      out << to_string(kTomographyOrder[r]) << ',' << to_string(kTomographyOrder[c])
          << ',' << format_value(d.d(r, c)) << '\n';
    }
  }
  return out.str();
}

std::string tomography_matrix_csv(const TomographyMatrix& d) {
  std::ostringstream out;
  out << "input,00,10,01,11\n";
  for (int r = 0; r < 4; ++r) {
    out << to_string(kTomographyOrder[r]);
    for (int c = 0; c < 4; ++c) out << ',' << format_value(d.d(r, c));
    out << '\n';
  }
  return out.str();
}

std::string tomography_traces_csv(const TomographyResult& result) {
  std::ostringstream out;
  out << "input,x,output,probability\n";
  for (int r = 0; r < 4; ++r) {
    for (std::size_t k = 0; k < result.w_i_values.size(); ++k) {
      for (int c = 0; c < 4; ++c) {
        out << to_string(kTomographyOrder[r]) << ','
            << format_value(result.w_i_values[k]) << ','
            << to_string(kTomographyOrder[c]) << ','
            << format_value(result.traces[r][k][c]) << '\n';
      }
    }
  }
  return out.str();
}

std::string fidelity_csv(const FidelityCurve& curve) {
  std::ostringstream out;
  out << "j_uev,f,f_prime\n";
  for (const FidelityPoint& p : curve.points) {
    out << format_value(p.j) << ',' << format_value(p.report.f) << ','
        << format_value(p.report.f_prime) << '\n';
  }
  return out.str();
}

std::string sync_csv(const SyncScan& scan) {
  std::ostringstream out;
  out << "delay_ps,x,y,p_u0,p_l0\n";
  for (std::size_t d = 0; d < scan.delays.size(); ++d) {
    const ProbabilityMap& m = scan.maps[d];
    const auto& xs = m.grid.x.values;
    const auto& ys = m.grid.y->values;
    for (std::size_t r = 0; r < ys.size(); ++r) {
      for (std::size_t c = 0; c < xs.size(); ++c) {
        const auto row = static_cast<Eigen::Index>(r);
        const auto col = static_cast<Eigen::Index>(c);
        out << format_value(scan.delays[d]) << ',' << format_value(xs[c]) << ','
            << format_value(ys[r]) << ',' << format_value(m.p_u0(row, col)) << ','
            << format_value(m.p_l0(row, col)) << '\n';
      }
    }
  }
  return out.str();
}

std::string fit_csv(const RabiFit& fit) {
  std::ostringstream out;
  out << "a0,t2_star_ps,freq_ghz,b0,a1,a2,residual_rms,iterations,"
         "frequency_constrained\n"
      << format_value(fit.a0) << ',' << format_value(fit.t2_star) << ','
      << format_value(fit.freq) << ',' << format_value(fit.b0) << ','
      << format_value(fit.a1) << ',' << format_value(fit.a2) << ','
      << format_value(fit.residual_rms) << ',' << fit.iterations << ','
      << (fit.frequency_constrained ? "true" : "false") << '\n';
  return out.str();
}

std::string fit_text(const RabiFit& fit) {
  std::ostringstream out;
  out << "a0 = " << format_value(fit.a0) << '\n'
      << "t2_star_ps = " << format_value(fit.t2_star) << '\n'
      << "freq_ghz = " << format_value(fit.freq) << '\n'
      << "b0 = " << format_value(fit.b0) << '\n'
      << "a1 = " << format_value(fit.a1) << '\n'
      << "a2 = " << format_value(fit.a2) << '\n'
      << "residual_rms = " << format_value(fit.residual_rms) << '\n'
      << "iterations = " << fit.iterations << '\n'
      << "frequency_constrained = " << (fit.frequency_constrained ? "true" : "false")
      << '\n';
  return out.str();
}

std::string waveform_csv(const Schedule& schedule, double step_ps) {
  if (!(step_ps > 0.0)) throw ValidationError("step_ps", "must be > 0");
  std::set<double> times;
  const double end = schedule.total_duration();
  const auto n = static_cast<long>(std::floor(end / step_ps));
  for (long i = 0; i <= n; ++i) times.insert(static_cast<double>(i) * step_ps);
  times.insert(end);
  for (double t : schedule.breakpoints()) times.insert(t);
  std::ostringstream out;
  out << "t_ps,eps_u_uev,eps_l_uev\n";
  for (double t : times) {
    const WaveformSample s = schedule.evaluate(t);
    out << format_value(t) << ',' << format_value(s.eps_u) << ','
        << format_value(s.eps_l) << '\n';
  }
  return out.str();
}

std::string render_svg(const ProbabilityMap& map, MapField field,
                       const SvgOptions& options) {
  if (!map.grid.y) throw ValidationError("format", "svg needs a 2-D map");
  if (options.colormap != "viridis" && options.colormap != "gray") {
    throw ValidationError("colormap", "must be viridis or gray");
  }
  if (options.cell_px < 1) throw ValidationError("cell_px", "must be >= 1");
  const Eigen::MatrixXd& data = field == MapField::PU0 ? map.p_u0 : map.p_l0;
  const std::string title = field == MapField::PU0 ? "P_U0" : "P_L0";
  const int cell = options.cell_px;
  const auto nx = static_cast<int>(map.grid.nx());
  const auto ny = static_cast<int>(map.grid.ny());
  const int left = 70, top = 30, bottom = 50, right = 20;
  const int width = left + nx * cell + right;
  const int height = top + ny * cell + bottom;
  const auto& xs = map.grid.x.values;
  const auto& ys = map.grid.y->values;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" shape-rendering=\"crispEdges\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << left << "\" y=\"18\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << title << "</text>\n";
  char buf[160];
  for (int r = 0; r < ny; ++r) {
    for (int c = 0; c < nx; ++c) {
      const Rgb rgb = colour(data(r, c), options.colormap);
      // Largest y on top.
      std::snprintf(buf, sizeof buf,
                    "<rect class=\"cell\" x=\"%d\" y=\"%d\" width=\"%d\" "
                    "height=\"%d\" fill=\"#%02x%02x%02x\"/>\n",
                    left + c * cell, top + (ny - 1 - r) * cell, cell, cell, rgb[0],
                    rgb[1], rgb[2]);
      out << buf;
    }
  }
  const int plot_bottom = top + ny * cell;
  out << "<text x=\"" << left << "\" y=\"" << plot_bottom + 15
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_value(xs.front())
      << "</text>\n"
      << "<text x=\"" << left + nx * cell << "\" y=\"" << plot_bottom + 15
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
      << format_value(xs.back()) << "</text>\n"
      << "<text x=\"" << left + nx * cell / 2 << "\" y=\"" << plot_bottom + 35
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << axis_label(map.grid.x) << "</text>\n"
      << "<text x=\"" << left - 5 << "\" y=\"" << plot_bottom
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
      << format_value(ys.front()) << "</text>\n"
      << "<text x=\"" << left - 5 << "\" y=\"" << top + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
      << format_value(ys.back()) << "</text>\n"
      << "<text x=\"15\" y=\"" << top + ny * cell / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 15 " << top + ny * cell / 2 << ")\">"
      << axis_label(*map.grid.y) << "</text>\n"
      << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace dqdsim::cli
