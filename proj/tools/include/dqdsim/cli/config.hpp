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

// Run configuration: a flat, sectioned key = value document. Every key
// maps to one module parameter; omitted keys keep their defaults.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dqdsim/experiments.hpp"

namespace dqdsim::cli {

struct QubitSection {
  double delta_u_ghz = 6.2;
  double delta_l_ghz = 6.0;
  double j_uev = 119.0;
  double eps_u0_uev = -200.0;
  double eps_l0_uev = -200.0;
  double temperature_k = 0.010;
  bool operator==(const QubitSection&) const = default;
};

struct DecoherenceSection {
  double t2_star_ps = 1200.0;  // "inf" disables dephasing
  double gamma1_per_ps = 0.0;
  bool operator==(const DecoherenceSection&) const = default;
};

struct IntegrationSection {
  double dt_ps = 0.05;
  int record_stride = 0;
  std::string readout = "instantaneous";  // or "averaged"
  bool operator==(const IntegrationSection&) const = default;
};

struct PulseSection {
  double rise_ps = 65.0;
  double fall_ps = 65.0;
  double rect_rise_ps = 0.0;
  double rect_fall_ps = 0.0;
  double gap_ps = 100.0;
  double lead_ps = 0.0;
  double tail_ps = 0.0;
  double sync_offset_ps = 200.0;
  bool operator==(const PulseSection&) const = default;
};

struct SweepSection {
  double w1_min_ps = 0.0;
  double w1_max_ps = 1000.0;
  double w1_step_ps = 4.0;
  double w2_min_ps = 0.0;
  double w2_max_ps = 1000.0;
  double w2_step_ps = 4.0;
  // Odd values keep the grid off the degenerate points eps_L = 0 and J/2.
  double eps_l_min_uev = -199.0;
  double eps_l_max_uev = 199.0;
  double eps_l_step_uev = 2.0;
  bool operator==(const SweepSection&) const = default;
};

struct TomographySection {
  double w_i_max_ps = 1000.0;
  double w_i_step_ps = 4.0;
  bool fixed_widths = false;
  bool operator==(const TomographySection&) const = default;
};

struct FidelitySection {
  std::vector<double> j_values_uev = {10, 25, 50, 80, 119, 160, 200};
  double w_i_max_ps = 1000.0;
  double w_i_step_ps = 4.0;
  double eps_l_blocked_uev = 200.0;
  int n_pi = 3;
  bool operator==(const FidelitySection&) const = default;
};

struct LzsSection {
  std::string axis = "amplitude";  // or "detuning"
  double a2_min_uev = 0.0;
  double a2_max_uev = 400.0;
  double a2_step_uev = 4.0;
  double amplitude_uev = 300.0;
  double eps_l_min_uev = -300.0;
  double eps_l_max_uev = -100.0;
  double eps_l_step_uev = 2.0;
  double width_ps = 100.0;
  bool operator==(const LzsSection&) const = default;
};

struct UniversalSection {
  double eps_u_min_uev = -300.0;
  double eps_u_max_uev = -100.0;
  double eps_u_step_uev = 4.0;
  double eps_l_min_uev = -300.0;
  double eps_l_max_uev = -100.0;
  double eps_l_step_uev = 4.0;
  double amplitude_u_uev = 300.0;
  double amplitude_l_uev = 300.0;
  double width_ps = 100.0;
  bool operator==(const UniversalSection&) const = default;
};

struct SyncSection {
  std::vector<double> delays_ps = {-1000, -400, -300, -200, -100, 0};
  double a_min_uev = 150.0;
  double a_max_uev = 450.0;
  double a_step_uev = 10.0;
  double width_ps = 100.0;
  bool operator==(const SyncSection&) const = default;
};

struct FitSection {
  double w_max_ps = 2000.0;
  double w_step_ps = 4.0;
  bool operator==(const FitSection&) const = default;
};

struct RunConfig {
  QubitSection qubits;
  DecoherenceSection decoherence;
  IntegrationSection integration;
  PulseSection pulses;
  SweepSection sweep;
  TomographySection tomography;
  FidelitySection fidelity;
  LzsSection lzs;
  UniversalSection universal;
  SyncSection sync;
  FitSection fit;
  bool operator==(const RunConfig&) const = default;

  // Throws ValidationError naming the config key.
  void validate() const;
};

// Throws ParseError for malformed lines, unknown sections or keys and
// duplicates, ValidationError for values that break an invariant.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);  // IoError when unreadable

// Every key, in section order; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& config);

ExperimentContext to_context(const RunConfig& config, int parallel);

}  // namespace dqdsim::cli
