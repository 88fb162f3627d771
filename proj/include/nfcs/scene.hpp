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

#ifndef NFCS_SCENE_HPP
#define NFCS_SCENE_HPP

#include "nfcs/geometry.hpp"
#include "nfcs/sensing_operator.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace nfcs {

struct Scatterer
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    cdouble amplitude{1.0, 0.0};
};

struct PointScene
{
    std::vector<Scatterer> points;
};

/// Throws std::invalid_argument if a scatterer falls outside the volume (half-voxel tolerance)
/// or has a non-finite amplitude.
void validate(const PointScene &scene, const VolumeGrid &volume);

struct SimulationOptions
{
    /// Round-trip 1/R^2 amplitude loss. Off by default: unit spherical phase only.
    bool spreading_loss = false;
};

/// S[f, y, x] = sum_t sigma_t * exp(-j 2 k_f R(element, t)), accumulated target by target.
DataCube simulate_scatter(const PointScene &scene, const ApertureGrid &aperture, const FrequencyGrid &freqs,
                          SimulationOptions options = {});

/// Ground-truth cube: each scatterer deposited into its nearest voxel, collisions summed.
ImageCube rasterize(const PointScene &scene, const VolumeGrid &volume);

/// Pass as snr_db to leave the data untouched.
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Adds circular complex white Gaussian noise with power mean|S|^2 / 10^(snr_db/10).
DataCube add_noise(const DataCube &data, double snr_db, std::uint64_t seed);

/// Scene text: one scatterer per line, `x y z re im`; '#' starts a comment.
PointScene read_scene(std::istream &in);
void write_scene(std::ostream &out, const PointScene &scene);

/// Center coordinates of voxel (iz, iy, ix).
Scatterer voxel_scatterer(const VolumeGrid &volume, std::size_t iz, std::size_t iy, std::size_t ix,
                          cdouble amplitude = {1.0, 0.0});

/// Matrix-free application of the exact spherical-wave model: column q of the implied matrix is the
/// simulated response of a unit scatterer at voxel q. `backward` is the exact conjugate transpose.
/// Cost is O(frequencies * elements * voxels); intended for small validation problems.
class SphericalWaveOperator : public SensingOperator
{
  public:
    SphericalWaveOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                          std::optional<SamplingMask> mask = std::nullopt);

    DataCube forward(const ImageCube &image) const override;
    ImageCube backward(const DataCube &data) const override;
    Dims3 image_dims() const override { return nfcs::image_dims(volume_); }
    Dims3 data_dims() const override { return nfcs::data_dims(freqs_, aperture_); }
    std::string name() const override { return "spherical"; }

  private:
    cdouble element(std::size_t f, std::size_t element_index, std::size_t voxel_index) const;

    ApertureGrid aperture_;
    FrequencyGrid freqs_;
    VolumeGrid volume_;
    std::vector<double> k_;
};

} // namespace nfcs

#endif
