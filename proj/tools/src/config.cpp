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

#include "dqdsim/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

#include "dqdsim/errors.hpp"

namespace dqdsim::cli {

namespace {

using FieldRef = std::variant<double*, int*, bool*, std::string*,
                              std::vector<double>*>;

struct Field {
  const char* section;
  const char* key;
  FieldRef ref;
};

std::vector<Field> fields(RunConfig& c) {
  return {
      {"qubits", "delta_u_ghz", &c.qubits.delta_u_ghz},
      {"qubits", "delta_l_ghz", &c.qubits.delta_l_ghz},
      {"qubits", "j_uev", &c.qubits.j_uev},
      {"qubits", "eps_u0_uev", &c.qubits.eps_u0_uev},
      {"qubits", "eps_l0_uev", &c.qubits.eps_l0_uev},
      {"qubits", "temperature_k", &c.qubits.temperature_k},
      {"decoherence", "t2_star_ps", &c.decoherence.t2_star_ps},
      {"decoherence", "gamma1_per_ps", &c.decoherence.gamma1_per_ps},
      {"integration", "dt_ps", &c.integration.dt_ps},
      {"integration", "record_stride", &c.integration.record_stride},
      {"integration", "readout", &c.integration.readout},
      {"pulses", "rise_ps", &c.pulses.rise_ps},
      {"pulses", "fall_ps", &c.pulses.fall_ps},
      {"pulses", "rect_rise_ps", &c.pulses.rect_rise_ps},
      {"pulses", "rect_fall_ps", &c.pulses.rect_fall_ps},
      {"pulses", "gap_ps", &c.pulses.gap_ps},
      {"pulses", "lead_ps", &c.pulses.lead_ps},
      {"pulses", "tail_ps", &c.pulses.tail_ps},
      {"pulses", "sync_offset_ps", &c.pulses.sync_offset_ps},
      {"sweep", "w1_min_ps", &c.sweep.w1_min_ps},
      {"sweep", "w1_max_ps", &c.sweep.w1_max_ps},
      {"sweep", "w1_step_ps", &c.sweep.w1_step_ps},
      {"sweep", "w2_min_ps", &c.sweep.w2_min_ps},
      {"sweep", "w2_max_ps", &c.sweep.w2_max_ps},
      {"sweep", "w2_step_ps", &c.sweep.w2_step_ps},
      {"sweep", "eps_l_min_uev", &c.sweep.eps_l_min_uev},
      {"sweep", "eps_l_max_uev", &c.sweep.eps_l_max_uev},
      {"sweep", "eps_l_step_uev", &c.sweep.eps_l_step_uev},
      {"tomography", "w_i_max_ps", &c.tomography.w_i_max_ps},
      {"tomography", "w_i_step_ps", &c.tomography.w_i_step_ps},
      {"tomography", "fixed_widths", &c.tomography.fixed_widths},
      {"fidelity", "j_values_uev", &c.fidelity.j_values_uev},
      {"fidelity", "w_i_max_ps", &c.fidelity.w_i_max_ps},
      {"fidelity", "w_i_step_ps", &c.fidelity.w_i_step_ps},
      {"fidelity", "eps_l_blocked_uev", &c.fidelity.eps_l_blocked_uev},
      {"fidelity", "n_pi", &c.fidelity.n_pi},
      {"lzs", "axis", &c.lzs.axis},
      {"lzs", "a2_min_uev", &c.lzs.a2_min_uev},
      {"lzs", "a2_max_uev", &c.lzs.a2_max_uev},
      {"lzs", "a2_step_uev", &c.lzs.a2_step_uev},
      {"lzs", "amplitude_uev", &c.lzs.amplitude_uev},
      {"lzs", "eps_l_min_uev", &c.lzs.eps_l_min_uev},
      {"lzs", "eps_l_max_uev", &c.lzs.eps_l_max_uev},
      {"lzs", "eps_l_step_uev", &c.lzs.eps_l_step_uev},
      {"lzs", "width_ps", &c.lzs.width_ps},
      {"universal", "eps_u_min_uev", &c.universal.eps_u_min_uev},
      {"universal", "eps_u_max_uev", &c.universal.eps_u_max_uev},
      {"universal", "eps_u_step_uev", &c.universal.eps_u_step_uev},
      {"universal", "eps_l_min_uev", &c.universal.eps_l_min_uev},
      {"universal", "eps_l_max_uev", &c.universal.eps_l_max_uev},
      {"universal", "eps_l_step_uev", &c.universal.eps_l_step_uev},
      {"universal", "amplitude_u_uev", &c.universal.amplitude_u_uev},
      {"universal", "amplitude_l_uev", &c.universal.amplitude_l_uev},
      {"universal", "width_ps", &c.universal.width_ps},
      {"sync", "delays_ps", &c.sync.delays_ps},
      {"sync", "a_min_uev", &c.sync.a_min_uev},
      {"sync", "a_max_uev", &c.sync.a_max_uev},
      {"sync", "a_step_uev", &c.sync.a_step_uev},
      {"sync", "width_ps", &c.sync.width_ps},
      {"fit", "w_max_ps", &c.fit.w_max_ps},
      {"fit", "w_step_ps", &c.fit.w_step_ps},
  };
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text, int line) {
  const std::string s(trim(text));
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s.empty()) throw ParseError(line, "expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || std::isnan(v)) {
    throw ParseError(line, "not a number: '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view text, int line) {
  const std::string s(trim(text));
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(line, "not an integer: '" + s + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view text, int line) {
  const std::string_view s = trim(text);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError(line, "expected true or false");
}

std::vector<double> parse_list(std::string_view text, int line) {
  std::vector<double> out;
  std::string_view rest = trim(text);
  if (rest.empty()) return out;
  for (;;) {
    const auto comma = rest.find(',');
    out.push_back(parse_double(rest.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require(bool ok, const char* key, const char* message) {
  if (!ok) throw ValidationError(key, message);
}

void require_finite(double v, const char* key) {
  require(std::isfinite(v), key, "must be finite");
}

void require_range(double lo, double hi, double step, const char* lo_key,
                   const char* hi_key, const char* step_key) {
  require_finite(lo, lo_key);
  require_finite(hi, hi_key);
  require(std::isfinite(step) && step > 0.0, step_key, "must be finite and > 0");
  require(hi >= lo, hi_key, "must be >= the matching minimum");
}

}  // namespace

void RunConfig::validate() const {
  require(std::isfinite(qubits.delta_u_ghz) && qubits.delta_u_ghz > 0.0,
          "delta_u_ghz", "must be finite and > 0");
  require(std::isfinite(qubits.delta_l_ghz) && qubits.delta_l_ghz > 0.0,
          "delta_l_ghz", "must be finite and > 0");
  require(std::isfinite(qubits.j_uev) && qubits.j_uev >= 0.0, "j_uev",
          "must be finite and >= 0");
  require_finite(qubits.eps_u0_uev, "eps_u0_uev");
  require_finite(qubits.eps_l0_uev, "eps_l0_uev");
  require(std::isfinite(qubits.temperature_k) && qubits.temperature_k > 0.0,
          "temperature_k", "must be finite and > 0");

  require(decoherence.t2_star_ps > 0.0, "t2_star_ps", "must be > 0 or inf");
  require(std::isfinite(decoherence.gamma1_per_ps) && decoherence.gamma1_per_ps >= 0.0,
          "gamma1_per_ps", "must be finite and >= 0");

  require(std::isfinite(integration.dt_ps) && integration.dt_ps > 0.0, "dt_ps",
          "must be finite and > 0");
  require(integration.record_stride >= 0, "record_stride", "must be >= 0");
  require(integration.readout == "instantaneous" || integration.readout == "averaged",
          "readout", "must be instantaneous or averaged");

  const std::pair<double, const char*> times[] = {
      {pulses.rise_ps, "rise_ps"},       {pulses.fall_ps, "fall_ps"},
      {pulses.rect_rise_ps, "rect_rise_ps"}, {pulses.rect_fall_ps, "rect_fall_ps"},
      {pulses.gap_ps, "gap_ps"},         {pulses.lead_ps, "lead_ps"},
      {pulses.tail_ps, "tail_ps"},       {pulses.sync_offset_ps, "sync_offset_ps"}};
  for (const auto& [v, key] : times) {
    require(std::isfinite(v) && v >= 0.0, key, "must be finite and >= 0");
  }

  require_range(sweep.w1_min_ps, sweep.w1_max_ps, sweep.w1_step_ps, "w1_min_ps",
                "w1_max_ps", "w1_step_ps");
  require(sweep.w1_min_ps >= 0.0, "w1_min_ps", "must be >= 0");
  require_range(sweep.w2_min_ps, sweep.w2_max_ps, sweep.w2_step_ps, "w2_min_ps",
                "w2_max_ps", "w2_step_ps");
  require(sweep.w2_min_ps >= 0.0, "w2_min_ps", "must be >= 0");
  require_range(sweep.eps_l_min_uev, sweep.eps_l_max_uev, sweep.eps_l_step_uev,
                "eps_l_min_uev", "eps_l_max_uev", "eps_l_step_uev");

  require_range(0.0, tomography.w_i_max_ps, tomography.w_i_step_ps, "w_i_max_ps",
                "w_i_max_ps", "w_i_step_ps");

  require(!fidelity.j_values_uev.empty(), "j_values_uev", "must not be empty");
  for (double j : fidelity.j_values_uev) {
    require(std::isfinite(j) && j > 0.0, "j_values_uev", "every value must be > 0");
  }
  require(std::isfinite(fidelity.w_i_max_ps) && fidelity.w_i_max_ps > 0.0,
          "w_i_max_ps", "must be finite and > 0");
  require(std::isfinite(fidelity.w_i_step_ps) && fidelity.w_i_step_ps > 0.0,
          "w_i_step_ps", "must be finite and > 0");
  require_finite(fidelity.eps_l_blocked_uev, "eps_l_blocked_uev");
  require(fidelity.n_pi >= 1 && fidelity.n_pi % 2 == 1, "n_pi",
          "must be an odd integer >= 1");

  require(lzs.axis == "amplitude" || lzs.axis == "detuning", "axis",
          "must be amplitude or detuning");
  require_range(lzs.a2_min_uev, lzs.a2_max_uev, lzs.a2_step_uev, "a2_min_uev",
                "a2_max_uev", "a2_step_uev");
  require_finite(lzs.amplitude_uev, "amplitude_uev");
  require_range(lzs.eps_l_min_uev, lzs.eps_l_max_uev, lzs.eps_l_step_uev,
                "eps_l_min_uev", "eps_l_max_uev", "eps_l_step_uev");
  require(std::isfinite(lzs.width_ps) && lzs.width_ps > 0.0, "width_ps",
          "must be finite and > 0");

  require_range(universal.eps_u_min_uev, universal.eps_u_max_uev,
                universal.eps_u_step_uev, "eps_u_min_uev", "eps_u_max_uev",
                "eps_u_step_uev");
  require_range(universal.eps_l_min_uev, universal.eps_l_max_uev,
                universal.eps_l_step_uev, "eps_l_min_uev", "eps_l_max_uev",
                "eps_l_step_uev");
  require_finite(universal.amplitude_u_uev, "amplitude_u_uev");
  require_finite(universal.amplitude_l_uev, "amplitude_l_uev");
  require(std::isfinite(universal.width_ps) && universal.width_ps > 0.0, "width_ps",
          "must be finite and > 0");

  require(!sync.delays_ps.empty(), "delays_ps", "must not be empty");
  for (double d : sync.delays_ps) require_finite(d, "delays_ps");
  require_range(sync.a_min_uev, sync.a_max_uev, sync.a_step_uev, "a_min_uev",
                "a_max_uev", "a_step_uev");
  require(std::isfinite(sync.width_ps) && sync.width_ps > 0.0, "width_ps",
          "must be finite and > 0");

  require_range(0.0, fit.w_max_ps, fit.w_step_ps, "w_max_ps", "w_max_ps",
                "w_step_ps");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  const std::vector<Field> table = fields(config);
  std::set<std::string> sections;
  for (const Field& f : table) sections.insert(f.section);
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;

  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    const auto comment = line.find_first_of("#;");
    line = trim(line.substr(0, comment));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.count(section)) {
        throw ParseError(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(line_no, "key '" + key + "' outside a section");

    const Field* field = nullptr;
    for (const Field& f : table) {
      if (section == f.section && key == f.key) field = &f;
    }
    if (field == nullptr) {
      throw ParseError(line_no, "unknown key '" + key + "' in [" + section + "]");
    }
    if (!seen.emplace(section, key).second) {
      throw ParseError(line_no, "duplicate key '" + key + "'");
    }
    std::visit(
        [&](auto* target) {
          using T = std::remove_pointer_t<decltype(target)>;
          if constexpr (std::is_same_v<T, double>) {
            *target = parse_double(value, line_no);
          } else if constexpr (std::is_same_v<T, int>) {
            *target = parse_int(value, line_no);
          } else if constexpr (std::is_same_v<T, bool>) {
            *target = parse_bool(value, line_no);
          } else if constexpr (std::is_same_v<T, std::string>) {
            *target = std::string(value);
          } else {
            *target = parse_list(value, line_no);
          }
        },
        field->ref);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const RunConfig& config) {
  RunConfig copy = config;
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields(copy)) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = ";
    std::visit(
        [&](auto* v) {
          using T = std::remove_pointer_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out << format_double(*v);
          } else if constexpr (std::is_same_v<T, int>) {
            out << *v;
          } else if constexpr (std::is_same_v<T, bool>) {
            out << (*v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::string>) {
            out << *v;
          } else {
            for (std::size_t i = 0; i < v->size(); ++i) {
              out << (i ? ", " : "") << format_double((*v)[i]);
            }
          }
        },
        f.ref);
    out << '\n';
  }
  return out.str();
}

ExperimentContext to_context(const RunConfig& c, int parallel) {
  c.validate();
  ExperimentContext ctx;
  ctx.params.delta_u = ghz_to_uev(c.qubits.delta_u_ghz);
  ctx.params.delta_l = ghz_to_uev(c.qubits.delta_l_ghz);
  ctx.params.j_coupling = c.qubits.j_uev;
  ctx.params.eps_u0 = c.qubits.eps_u0_uev;
  ctx.params.eps_l0 = c.qubits.eps_l0_uev;
  ctx.params.temperature = c.qubits.temperature_k;
  ctx.dec.t2_star = c.decoherence.t2_star_ps;
  ctx.dec.gamma1 = c.decoherence.gamma1_per_ps;
  ctx.cfg.dt = c.integration.dt_ps;
  ctx.cfg.record_stride = c.integration.record_stride;
  ctx.cfg.readout = c.integration.readout == "averaged" ? Readout::Averaged
                                                        : Readout::Instantaneous;
  ctx.shape.rise = c.pulses.rise_ps;
  ctx.shape.fall = c.pulses.fall_ps;
  ctx.shape.rect_rise = c.pulses.rect_rise_ps;
  ctx.shape.rect_fall = c.pulses.rect_fall_ps;
  ctx.shape.gap = c.pulses.gap_ps;
  ctx.shape.lead = c.pulses.lead_ps;
  ctx.shape.tail = c.pulses.tail_ps;
  ctx.parallel = parallel;
  return ctx;
}

}  // namespace dqdsim::cli
