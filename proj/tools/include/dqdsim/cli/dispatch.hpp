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

// Subcommand dispatch for the dqdsim tool.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dqdsim/cli/config.hpp"
#include "dqdsim/cli/output.hpp"

namespace dqdsim::cli {

inline const std::vector<std::string> kSubcommands = {
    "rabi", "conditional-rabi", "two-pulse", "tomography", "fidelity-vs-j",
    "lzs",  "controlled-universal", "sync-scan", "fit"};

struct OutputSpec {
  std::string path;            // CSV path; empty means "<subcommand>.csv"
  std::string format = "csv";  // csv or svg (svg adds heatmaps next to the CSV)
  SvgOptions svg;
  std::string waveform_path;   // optional waveform dump
};

struct Invocation {
  std::string subcommand;
  RunConfig config;
  OutputSpec output;
  int parallel = 0;
  std::string fit_input;  // CSV with x and probability columns
};

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

// Runs one subcommand, writes its files and prints a one-line summary.
int dispatch(const Invocation& inv, std::ostream& out, std::ostream& err);

// Full command line: parses flags, loads the config and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace dqdsim::cli
