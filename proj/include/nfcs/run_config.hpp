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


#ifndef NFCS_RUN_CONFIG_HPP
#define NFCS_RUN_CONFIG_HPP

#include "nfcs/cube_file.hpp"
#include "nfcs/holo_operator.hpp"
#include "nfcs/sampling.hpp"
#include "nfcs/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfcs {

// Plain-text run configuration:
//
//   # comment
//   [section]
//   key = value
//
// Sections: aperture, frequency, volume, scene, mask, solver, output, psf, bench, sweep. Unknown
// sections and keys are errors. `point` in [scene] may repeat; every other key overrides any
// earlier value, so a preset can be refined by a user file. Relative paths resolve against the
// directory of the file that named them (the working directory for presets) and are stored
// absolute.

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct VolumeConfig
{
    std::size_t nz = 16;
    double z_min = 0.3;
    double z_max = 0.6;
};

struct SceneConfig
{
    std::filesystem::path file;     // scatterer list; empty when unused
    std::vector<Scatterer> points;
    std::size_t random_points = 0;  // on-grid points drawn from `seed`
    double snr_db = kNoNoise;
    std::uint64_t seed = 1;
};

struct MaskConfig
{
    MaskScheme scheme = MaskScheme::full;
    double ratio = 1.0;
    std::size_t group_y = 4;
    std::size_t group_x = 2;
    std::uint64_t seed = 1;
    std::filesystem::path file;     // required for scheme = custom
};

struct SolverConfig
{
    std::string method = "holo";    // holo | omegak
    KernelMode kernel_mode = KernelMode::adjoint_exact;
    std::size_t taps = 8;           // Stolt kernel length
    std::optional<double> lambda1;  // unset: data-scaled default
    std::optional<double> lambda2;
    std::optional<double> nu;
    std::size_t max_outer = 60;
    double alpha = 0.05;
    double beta = 0.6;
    std::size_t max_backtracks = 40;
    double grad_tol = 0.0;
};

struct OutputConfig
{
    std::filesystem::path dir = "out";
    std::filesystem::path data = "data.nfc";   // relative to dir
    std::filesystem::path image = "image.nfc"; // relative to dir
    CubeDtype dtype = CubeDtype::c128;
};

struct PsfConfig
{
    std::size_t trials = 1;
    std::vector<MaskScheme> schemes{MaskScheme::uniform_random};
    std::vector<std::string> operators{"holo"};
    std::optional<std::array<std::size_t, 3>> voxel; // (z, y, x); unset: volume center
    std::size_t main_lobe = 1;
};

struct BenchConfig
{
    std::vector<Dims3> sizes{{16, 16, 16}, {16, 32, 32}, {16, 64, 64}}; // (nz, ny, nx), n_f = nz
    std::size_t repeats = 3;
    std::size_t iterations = 10;
};

struct SweepConfig
{
    bool enabled = false;
    std::vector<double> snr_db{10.0, 20.0, 30.0};
    std::vector<double> ratios{0.2, 0.3, 0.4, 0.5};
    std::size_t trials = 10;
};

struct RunConfig
{
    ApertureGrid aperture{32, 32, 0.003, 0.003, 0.0};
    FrequencyGrid frequencies{72e9, 76e9, 16};
    VolumeConfig volume;
    SceneConfig scene;
    MaskConfig mask;
    SolverConfig solver;
    OutputConfig output;
    PsfConfig psf;
    BenchConfig bench;
    SweepConfig sweep;
};

/// Applies `text` on top of `config`. `source` names the text in error messages ("file:line: ...").
void apply_config_text(RunConfig &config, const std::string &text, const std::string &source,
                       const std::filesystem::path &base_dir = {});
void apply_config_file(RunConfig &config, const std::filesystem::path &path);

std::vector<std::string> preset_names();
/// Config text of a named preset; throws ConfigError for unknown names.
std::string preset_text(const std::string &name);

/// Effective configuration in the same format; parsing it reproduces `config`.
std::string to_text(const RunConfig &config);

/// Throws ConfigError if the grids are inconsistent or referenced files are missing.
void validate(const RunConfig &config);

VolumeGrid volume_grid(const RunConfig &config);

std::filesystem::path data_path(const RunConfig &config);
std::filesystem::path image_path(const RunConfig &config);

} // namespace nfcs

#endif
