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

#include "dqdsim/cli/dispatch.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "dqdsim/analysis.hpp"
#include "dqdsim/errors.hpp"

namespace dqdsim::cli {

namespace {

struct Outcome {
  std::map<std::string, std::string> files;  // path -> content
  std::optional<ProbabilityMap> map;         // for svg output
  std::optional<Schedule> waveform;
  std::string summary;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return path.substr(0, dot);
  }
  return path;
}

std::vector<double> axis(const char* name, double lo, double hi, double step) {
  return make_axis(name, "", lo, hi, step).values;
}

std::vector<RabiSample> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<RabiSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string a, b;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',')) {
      throw ParseError(line_no, "expected at least two columns");
    }
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double x = std::strtod(a.c_str(), &end_a);
    const double y = std::strtod(b.c_str(), &end_b);
    if (end_a == a.c_str() || end_b == b.c_str()) {
      if (samples.empty()) continue;  // header
      throw ParseError(line_no, "non-numeric sample");
    }
    samples.push_back({x, y});
  }
  return samples;
}

Outcome run_subcommand(const Invocation& inv, const std::string& csv_path) {
  const RunConfig& c = inv.config;
  const ExperimentContext ctx = to_context(c, inv.parallel);
  const QubitPairParams& p = ctx.params;
  const std::string stem = stem_of(csv_path);
  const auto w1 = axis("W1", c.sweep.w1_min_ps, c.sweep.w1_max_ps, c.sweep.w1_step_ps);
  Outcome o;

  const std::string& sub = inv.subcommand;
  if (sub == "rabi") {
    ProbabilityMap m = run_rabi(ctx, w1);
    o.files[csv_path] = map_csv(m);
    o.summary = "rabi: P_U0 min=" + fmt("%.3f", m.p_u0.minCoeff()) +
                " max=" + fmt("%.3f", m.p_u0.maxCoeff());
    o.waveform = rabi_schedule(p.eps_u0, p.eps_l0, w1.back(), ctx.shape);
    o.map = std::move(m);
  } else if (sub == "conditional-rabi") {
    const auto eps = axis("eps_L", c.sweep.eps_l_min_uev, c.sweep.eps_l_max_uev,
                          c.sweep.eps_l_step_uev);
    ProbabilityMap m = run_conditional_rabi(ctx, w1, eps);
    o.files[csv_path] = map_csv(m);
    const auto last = m.p_u0.rows() - 1;
    o.summary = "conditional-rabi: flip_max(eps_L=" + fmt("%g", eps.front()) + ")=" +
                fmt("%.3f", 1.0 - m.p_u0.row(0).minCoeff()) + " flip_max(eps_L=" +
                fmt("%g", eps.back()) + ")=" +
                fmt("%.3f", 1.0 - m.p_u0.row(last).minCoeff());
    o.waveform = rabi_schedule(p.eps_u0, p.eps_l0, w1.back(), ctx.shape);
    o.map = std::move(m);
  } else if (sub == "two-pulse") {
    const auto w2 =
        axis("W2", c.sweep.w2_min_ps, c.sweep.w2_max_ps, c.sweep.w2_step_ps);
    ProbabilityMap m = run_two_pulse(ctx, w1, w2);
    o.files[csv_path] = map_csv(m);
    double sigma = 0.0;
    for (Eigen::Index r = 0; r < m.p_l0.rows(); ++r) {
      const auto row = m.p_l0.row(r).array();
      sigma = std::max(sigma, std::sqrt((row - row.mean()).square().mean()));
    }
    o.summary = "two-pulse: max row sigma(P_L0)=" + fmt("%.4f", sigma);
    o.waveform =
        two_pulse_schedule(p.eps_u0, p.eps_l0, w1.back(), w2.back(), ctx.shape);
    o.map = std::move(m);
  } else if (sub == "tomography") {
    const auto wi = axis("W_I", 0.0, c.tomography.w_i_max_ps, c.tomography.w_i_step_ps);
    const TomographyResult t = run_cnot_tomography(ctx, wi, c.tomography.fixed_widths);
    o.files[csv_path] = tomography_csv(t.d);
    o.files[stem + "_matrix.csv"] = tomography_matrix_csv(t.d);
    o.files[stem + "_traces.csv"] = tomography_traces_csv(t);
    std::string diag;
    for (int i = 0; i < 4; ++i) {
      diag += (i ? "," : "") + fmt("%.3f", t.d.d(i, kCnotTarget[i]));
    }
    o.summary = "tomography: cnot_min=" + fmt("%.3f", cnot_success_min(t.d)) +
                " success=(" + diag + ") W_I=" + fmt("%.2f", t.operating_width) + " ps";
    o.waveform = tomography_schedule(p.eps_u0, p.eps_l0, p.j_coupling,
                                     InputLabel::k11, t.operating_width, t.widths,
                                     ctx.shape);
  } else if (sub == "fidelity-vs-j") {
    FidelityOptions opts;
    opts.w_i_max = c.fidelity.w_i_max_ps;
    opts.w_i_step = c.fidelity.w_i_step_ps;
    opts.eps_l_blocked = c.fidelity.eps_l_blocked_uev;
    opts.n_pi = c.fidelity.n_pi;
    const FidelityCurve curve = run_fidelity_vs_j(ctx, c.fidelity.j_values_uev, opts);
    o.files[csv_path] = fidelity_csv(curve);
    for (const FidelityPoint& pt : curve.points) {
      if (!o.summary.empty()) o.summary += ' ';
      o.summary += "F(J=" + fmt("%g", pt.j) + ")=" + fmt("%.2f", pt.report.f) +
                   " F'=" + fmt("%.2f", pt.report.f_prime);
    }
  } else if (sub == "lzs") {
    const bool by_amp = c.lzs.axis == "amplitude";
    const auto ys = by_amp ? axis("A2", c.lzs.a2_min_uev, c.lzs.a2_max_uev,
                                  c.lzs.a2_step_uev)
                           : axis("eps_L", c.lzs.eps_l_min_uev, c.lzs.eps_l_max_uev,
                                  c.lzs.eps_l_step_uev);
    ProbabilityMap m =
        run_lzs_control(ctx, by_amp ? LzsAxis::Amplitude : LzsAxis::Detuning, ys,
                        w1, c.lzs.amplitude_uev, c.lzs.width_ps);
    o.files[csv_path] = map_csv(m);
    o.summary = "lzs: P_L0 min=" + fmt("%.3f", m.p_l0.minCoeff()) +
                " P_U0 min=" + fmt("%.3f", m.p_u0.minCoeff());
    o.waveform = lzs_schedule(p.eps_u0, p.eps_l0,
                              by_amp ? ys.back() : c.lzs.amplitude_uev, w1.back(),
                              c.lzs.width_ps, ctx.shape);
    o.map = std::move(m);
  } else if (sub == "controlled-universal") {
    const auto eu = axis("eps_U", c.universal.eps_u_min_uev, c.universal.eps_u_max_uev,
                         c.universal.eps_u_step_uev);
    const auto el = axis("eps_L", c.universal.eps_l_min_uev, c.universal.eps_l_max_uev,
                         c.universal.eps_l_step_uev);
    ProbabilityMap m =
        run_controlled_universal(ctx, eu, el, c.universal.amplitude_u_uev,
                                 c.universal.amplitude_l_uev, c.universal.width_ps);
    o.files[csv_path] = map_csv(m);
    o.summary = "controlled-universal: P_L0 spread across eps_U=" +
                fmt("%.3f", cross_dependence(m.p_l0.transpose()));
    o.waveform = controlled_rotation_schedule(
        eu.front(), el.front(), c.universal.amplitude_u_uev,
        c.universal.amplitude_l_uev, c.universal.width_ps, c.universal.width_ps,
        ctx.shape);
    o.map = std::move(m);
  } else if (sub == "sync-scan") {
    const auto amps = axis("A", c.sync.a_min_uev, c.sync.a_max_uev, c.sync.a_step_uev);
    const SyncScan scan = run_sync_scan(ctx, c.sync.delays_ps, amps, amps,
                                        c.pulses.sync_offset_ps, c.sync.width_ps);
    o.files[csv_path] = sync_csv(scan);
    o.summary = "sync-scan:";
    for (std::size_t d = 0; d < scan.delays.size(); ++d) {
      o.summary += " upper_dep(" + fmt("%g", scan.delays[d]) + ")=" +
                   fmt("%.3f", cross_dependence(scan.maps[d].p_u0));
    }
    o.waveform = sync_schedule(p.eps_u0, p.eps_l0, amps.back(), amps.back(),
                               c.sync.delays_ps.front(), c.pulses.sync_offset_ps,
                               c.sync.width_ps, c.sync.width_ps, ctx.shape);
  } else if (sub == "fit") {
    std::vector<RabiSample> samples;
    if (!inv.fit_input.empty()) {
      samples = read_samples(inv.fit_input);
    } else {
      const auto w = axis("W1", 0.0, c.fit.w_max_ps, c.fit.w_step_ps);
      const ProbabilityMap m = run_rabi(ctx, w);
      for (std::size_t i = 0; i < w.size(); ++i) {
        samples.push_back({w[i], m.p_u0(0, static_cast<Eigen::Index>(i))});
      }
    }
    const RabiFit f = fit_rabi(samples);
    o.files[csv_path] = fit_csv(f);
    o.files[stem + ".txt"] = fit_text(f);
    o.summary = "fit: freq=" + fmt("%.4f", f.freq) + " GHz t2_star=" +
                fmt("%.1f", f.t2_star) + " ps a0=" + fmt("%.3f", f.a0) +
                " a2=" + fmt("%.3f", f.a2);
  } else {
    throw ValidationError("subcommand", "unknown subcommand '" + sub + "'");
  }
  return o;
}

std::string usage() {
  std::string s = "usage: dqdsim <subcommand> [--config FILE] [--out FILE] "
                  "[--format csv|svg] [--parallel N] [--j UEV]\nsubcommands:";
  for (const std::string& name : kSubcommands) s += " " + name;
  return s + "\n";
}

}  // namespace

int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), inv.subcommand) ==
        kSubcommands.end()) {
      err << "unknown subcommand '" << inv.subcommand << "'\n" << usage();
      return kExitValidation;
    }
    if (inv.output.format != "csv" && inv.output.format != "svg") {
      throw ValidationError("format", "must be csv or svg");
    }
    if (inv.parallel < 0) throw ValidationError("parallel", "must be >= 0");
    const std::string csv_path =
        inv.output.path.empty() ? inv.subcommand + ".csv" : inv.output.path;
    Outcome o = run_subcommand(inv, csv_path);
    if (inv.output.format == "svg") {
      if (!o.map || !o.map->grid.y) {
        throw ValidationError("format", "svg output needs a 2-D map");
      }
      const std::string stem = stem_of(csv_path);
      o.files[stem + "_p_u0.svg"] = render_svg(*o.map, MapField::PU0, inv.output.svg);
      o.files[stem + "_p_l0.svg"] = render_svg(*o.map, MapField::PL0, inv.output.svg);
    }
    if (!inv.output.waveform_path.empty()) {
      if (!o.waveform) throw ValidationError("waveform", "no schedule for " + inv.subcommand);
      o.files[inv.output.waveform_path] = waveform_csv(*o.waveform);
    }
    // Single writer, after every grid point is in.
    for (const auto& [path, content] : o.files) write_file(path, content);
    out << o.summary << '\n';
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidLabel& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Two coupled charge qubit simulator", "dqdsim"};
  std::string subcommand;
  std::string config_path;
  std::optional<double> j_override;
  Invocation inv;
  app.add_option("subcommand", subcommand, "Experiment to run")->required();
  app.add_option("--config", config_path, "Sectioned key = value config file");
  app.add_option("--out", inv.output.path, "Output CSV path");
  app.add_option("--format", inv.output.format, "csv or svg");
  app.add_option("--parallel", inv.parallel, "Worker threads (0 = all cores)");
  app.add_option("--j", j_override, "Override the coupling J in ueV");
  app.add_option("--waveform", inv.output.waveform_path, "Also dump a waveform CSV");
  app.add_option("--input", inv.fit_input, "Samples to fit (fit subcommand)");
  app.add_option("--colormap", inv.output.svg.colormap, "viridis or gray");
  app.add_option("--cell-px", inv.output.svg.cell_px, "SVG cell size in pixels");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << usage();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << usage();
    return kExitValidation;
  }
  inv.subcommand = subcommand;
  try {
    if (!config_path.empty()) inv.config = load_config(config_path);
    if (j_override) {
      inv.config.qubits.j_uev = *j_override;
      inv.config.fidelity.j_values_uev = {*j_override};
      inv.config.validate();
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return dispatch(inv, out, err);
}

}  // namespace dqdsim::cli
