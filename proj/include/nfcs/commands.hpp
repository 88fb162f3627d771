// Copyright 2026 The nfcs Authors
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


#ifndef NFCS_COMMANDS_HPP
#define NFCS_COMMANDS_HPP

#include "nfcs/run_config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nfcs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Non-finite values or a broken numerical contract detected while running a command.
class NumericFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct CliOptions
{
    std::optional<std::filesystem::path> config;
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;   // overrides [scene] seed and [mask] seed
    std::optional<std::string> method;   // overrides [solver] method
    std::optional<std::filesystem::path> input; // export: cube to export (default: the image cube)
};

/// Defaults, then the preset, then the config file, then command-line overrides.
RunConfig load_run_config(const CliOptions &options);

/// Deterministic scatterers of the run: explicit points, the scene file, then random on-grid points.
PointScene build_scene(const RunConfig &config);
SamplingMask build_mask(const RunConfig &config);

// Each command writes its artifacts below [output] dir, echoes the effective configuration to
// `effective.cfg` there, and prints a short summary to `log`. Timings cover the numerical calls
// only, never file IO.
void cmd_simulate(const RunConfig &config, std::ostream &log);
void cmd_reconstruct(const RunConfig &config, std::ostream &log);
void cmd_solve(const RunConfig &config, std::ostream &log);
void cmd_psf(const RunConfig &config, std::ostream &log);
void cmd_bench(const RunConfig &config, std::ostream &log);
void cmd_export(const RunConfig &config, const std::filesystem::path &input, std::ostream &log);

/// Runs a subcommand by name and maps failures to exit codes (config errors 2, numeric failures 3).
int run_command(const std::string &command, const CliOptions &options, std::ostream &log, std::ostream &err);

} // namespace nfcs

#endif
