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

#ifndef NFCS_GEOMETRY_HPP
#define NFCS_GEOMETRY_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfcs {

using cdouble = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

// ------------------------------------------------------------------------------------------------
// Grids
// ------------------------------------------------------------------------------------------------

/// Planar monostatic array lying in the plane z = plane_z. Element (ix, iy) sits at
/// ((ix - (nx-1)/2) * pitch_x, (iy - (ny-1)/2) * pitch_y, plane_z).
struct ApertureGrid
{
    std::size_t nx = 0;
    std::size_t ny = 0;
    double pitch_x = 0.0;
    double pitch_y = 0.0;
    double plane_z = 0.0;

    double x(std::size_t ix) const { return (static_cast<double>(ix) - 0.5 * static_cast<double>(nx - 1)) * pitch_x; }
    double y(std::size_t iy) const { return (static_cast<double>(iy) - 0.5 * static_cast<double>(ny - 1)) * pitch_y; }
    std::size_t size() const { return nx * ny; }

    bool operator==(const ApertureGrid &) const = default;
};

/// Uniform, endpoint-inclusive list of absolute transmit frequencies.
struct FrequencyGrid
{
    double f_start = 0.0;
    double f_stop = 0.0;
    std::size_t n_f = 0;

    /// Frequency step; zero for a single tone.
    double step() const { return n_f > 1 ? (f_stop - f_start) / static_cast<double>(n_f - 1) : 0.0; }
    double center() const { return 0.5 * (f_start + f_stop); }
    double frequency(std::size_t i) const;
    double wavenumber(std::size_t i) const { return 2.0 * kPi * frequency(i) / kSpeedOfLight; }
    std::vector<double> wavenumbers() const;

    bool operator==(const FrequencyGrid &) const = default;
};

/// Image voxels. The transverse sampling coincides with the aperture sampling;
/// range bins are chosen freely, but every bin must lie off the array plane.
struct VolumeGrid
{
    std::size_t nz = 0;
    std::size_t ny = 0;
    std::size_t nx = 0;
    double z_min = 0.0;
    double z_max = 0.0;
    double pitch_x = 0.0;
    double pitch_y = 0.0;

    double z(std::size_t iz) const;
    double x(std::size_t ix) const { return (static_cast<double>(ix) - 0.5 * static_cast<double>(nx - 1)) * pitch_x; }
    double y(std::size_t iy) const { return (static_cast<double>(iy) - 0.5 * static_cast<double>(ny - 1)) * pitch_y; }
    /// Range-bin spacing; zero for a single slice.
    double dz() const { return nz > 1 ? (z_max - z_min) / static_cast<double>(nz - 1) : 0.0; }
    std::size_t size() const { return nz * ny * nx; }

    bool operator==(const VolumeGrid &) const = default;
};

ApertureGrid build_aperture_grid(std::size_t nx, std::size_t ny, double pitch, double plane_z);
ApertureGrid build_aperture_grid(std::size_t nx, std::size_t ny, double pitch_x, double pitch_y, double plane_z);
FrequencyGrid build_frequency_grid(double f_start, double f_stop, std::size_t n_f);
VolumeGrid build_volume_grid(std::size_t nz, std::size_t ny, std::size_t nx, double z_min, double z_max,
                             const ApertureGrid &aperture);

/// Checks the grid invariants; throws std::invalid_argument naming the first violation.
void validate(const ApertureGrid &g);
void validate(const FrequencyGrid &g);
void validate(const VolumeGrid &g, const ApertureGrid &aperture);

// Text form used inside cube-file headers and effective-config echoes. Doubles are written
// with 17 significant digits so that parsing reproduces them bit for bit.
std::string to_text(const ApertureGrid &g);
std::string to_text(const FrequencyGrid &g);
std::string to_text(const VolumeGrid &g);
ApertureGrid aperture_from_text(const std::string &text);
FrequencyGrid frequency_from_text(const std::string &text);
VolumeGrid volume_from_text(const std::string &text);

// ------------------------------------------------------------------------------------------------
// Cubes
// ------------------------------------------------------------------------------------------------

using Dims3 = std::array<std::size_t, 3>;

struct DataAxes  // (f, y, x)
{
    static constexpr const char *name = "data";
};
struct ImageAxes // (z, y, x)
{
    static constexpr const char *name = "image";
};

/// Dense complex 3-D array, row-major with the last axis fastest.
template <typename Axes>
class Cube
{
  public:
    Cube() = default;
    explicit Cube(Dims3 dims) : dims_(dims), values_(dims[0] * dims[1] * dims[2]) {}
    Cube(Dims3 dims, std::vector<cdouble> values) : dims_(dims), values_(std::move(values))
    {
        if (values_.size() != dims_[0] * dims_[1] * dims_[2])
            throw std::invalid_argument("Cube: value count does not match dims");
    }

    const Dims3 &dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    std::size_t slice_size() const { return dims_[1] * dims_[2]; }

    cdouble &operator()(std::size_t a, std::size_t b, std::size_t c) { return values_[(a * dims_[1] + b) * dims_[2] + c]; }
    const cdouble &operator()(std::size_t a, std::size_t b, std::size_t c) const { return values_[(a * dims_[1] + b) * dims_[2] + c]; }
    cdouble &operator[](std::size_t i) { return values_[i]; }
    const cdouble &operator[](std::size_t i) const { return values_[i]; }

    std::span<cdouble> slice(std::size_t a) { return {values_.data() + a * slice_size(), slice_size()}; }
    std::span<const cdouble> slice(std::size_t a) const { return {values_.data() + a * slice_size(), slice_size()}; }

    std::vector<cdouble> &values() { return values_; }
    const std::vector<cdouble> &values() const { return values_; }

    bool operator==(const Cube &) const = default;

  private:
    Dims3 dims_{0, 0, 0};
    std::vector<cdouble> values_;
};

using DataCube = Cube<DataAxes>;
using ImageCube = Cube<ImageAxes>;

inline Dims3 data_dims(const FrequencyGrid &f, const ApertureGrid &a) { return {f.n_f, a.ny, a.nx}; }
inline Dims3 image_dims(const VolumeGrid &v) { return {v.nz, v.ny, v.nx}; }

// Real inner product / norms over complex cubes, shared by the solver and the operator tests.
cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b); // sum conj(a) * b
double norm2_squared(std::span<const cdouble> a);
bool all_finite(std::span<const cdouble> a);

} // namespace nfcs

#endif
