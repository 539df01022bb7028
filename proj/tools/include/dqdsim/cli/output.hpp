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

// Output writers: CSV tables (9 significant digits), waveform dumps and
// SVG heatmaps. All functions render to strings first so the bytes only
// depend on the data.

#pragma once

#include <string>

#include "dqdsim/analysis.hpp"
#include "dqdsim/experiments.hpp"
#include "dqdsim/pulses.hpp"

namespace dqdsim::cli {

std::string format_value(double v);  // %.9g

// 1-D maps: x,p_u0,p_l0. 2-D maps: x,y,p_u0,p_l0 with x varying fastest.
std::string map_csv(const ProbabilityMap& map);

// input,output,probability; 16 rows in tomography order.
std::string tomography_csv(const TomographyMatrix& d);
// input,00,10,01,11
std::string tomography_matrix_csv(const TomographyMatrix& d);
// input,x,output,probability
std::string tomography_traces_csv(const TomographyResult& result);

// j_uev,f,f_prime
std::string fidelity_csv(const FidelityCurve& curve);

// delay_ps,x,y,p_u0,p_l0
std::string sync_csv(const SyncScan& scan);

std::string fit_csv(const RabiFit& fit);
std::string fit_text(const RabiFit& fit);

// t_ps,eps_u_uev,eps_l_uev on a uniform grid that also includes every
// breakpoint of the schedule.
std::string waveform_csv(const Schedule& schedule, double step_ps = 0.5);

enum class MapField { PU0, PL0 };

struct SvgOptions {
  std::string colormap = "viridis";  // or "gray"
  int cell_px = 4;
};

// One heatmap of a 2-D map, colour scale linear over [0, 1]. Throws
// ValidationError for 1-D maps or unknown colormaps.
std::string render_svg(const ProbabilityMap& map, MapField field,
                       const SvgOptions& options = {});

// Throws IoError when the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace dqdsim::cli
