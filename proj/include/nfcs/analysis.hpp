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

#ifndef NFCS_ANALYSIS_HPP
#define NFCS_ANALYSIS_HPP

#include "nfcs/sensing_operator.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

namespace nfcs {

struct VoxelIndex
{
    std::size_t z = 0;
    std::size_t y = 0;
    std::size_t x = 0;
    bool operator==(const VoxelIndex &) const = default;
};

inline std::size_t linear_index(const Dims3 &d, VoxelIndex v) { return (v.z * d[1] + v.y) * d[2] + v.x; }
inline VoxelIndex voxel_index(const Dims3 &d, std::size_t i) { return {i / (d[1] * d[2]), (i / d[2]) % d[1], i % d[2]}; }
inline VoxelIndex center_voxel(const Dims3 &d) { return {d[0] / 2, d[1] / 2, d[2] / 2}; }

/// Position of the largest magnitude (first one on ties).
VoxelIndex argmax_abs(const ImageCube &image);

/// Voxels within this Chebyshev box around the peak count as main lobe, not sidelobe.
struct MainLobe
{
    std::size_t z = 1;
    std::size_t y = 1;
    std::size_t x = 1;

    static MainLobe uniform(std::size_t r) { return {r, r, r}; }
    bool contains(VoxelIndex peak, VoxelIndex v) const;
};

struct PsfStats
{
    ImageCube psf;          // normalized so psf(peak) = 1
    VoxelIndex peak;
    double main_lobe = 0.0; // |unnormalized psf(peak)|
    double mu = 0.0;        // largest sidelobe magnitude
    MainLobe exclusion;
    std::array<std::vector<double>, 3> projections; // max |psf| per index along z, y, x
};

/// Column i of Phi^H Phi: Phi^H(Phi e_i), normalized by its value at i.
PsfStats psf_column(const SensingOperator &op, VoxelIndex voxel, MainLobe exclusion = {});

/// Statistics of an already normalized PSF cube (e.g. a mean over trials).
PsfStats psf_stats(ImageCube normalized_psf, VoxelIndex peak, MainLobe exclusion = {});

/// max |psf(j)| / |psf(peak)| over voxels outside the main-lobe box.
double coherence_estimate(const ImageCube &psf, VoxelIndex peak, MainLobe exclusion = {});
inline double coherence_estimate(const PsfStats &stats) { return coherence_estimate(stats.psf, stats.peak, stats.exclusion); }

/// Per-axis 1-D max projections of |cube|.
std::array<std::vector<double>, 3> axis_projections(const ImageCube &cube);

// ------------------------------------------------------------------------------------------------
// Explicit sensing matrix (small problems only)
// ------------------------------------------------------------------------------------------------

/// Row-major dense complex matrix.
struct DenseMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cdouble> values;

    cdouble operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::vector<cdouble> multiply(std::span<const cdouble> x) const;
    std::vector<cdouble> multiply_adjoint(std::span<const cdouble> y) const;
    std::vector<cdouble> column(std::size_t c) const;
};

inline constexpr std::size_t kExplicitMatrixCap = 1'000'000;

class MatrixTooLarge : public std::length_error
{
  public:
    using std::length_error::length_error;
};

/// phi[(f, ey, ex), (z, y, x)] = exp(-j 2 k_f |voxel - element|). Rows of unselected aperture
/// positions are zero when a mask is given. Refuses matrices with more than `cap` entries.
DenseMatrix explicit_matrix_oracle(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                                   const std::optional<SamplingMask> &mask = std::nullopt,
                                   std::size_t cap = kExplicitMatrixCap);

/// max_{i != j} |<phi_i, phi_j>| / (||phi_i|| ||phi_j||). Zero columns are skipped.
double matrix_coherence(const DenseMatrix &m);

/// Column i of M^H M normalized by its diagonal entry, shaped as an image cube.
ImageCube matrix_psf_column(const DenseMatrix &m, const Dims3 &image_dims, std::size_t column);

// ------------------------------------------------------------------------------------------------
// Image comparison and display
// ------------------------------------------------------------------------------------------------

/// sqrt(mean((|truth|/max|truth| - |recon|/max|recon|)^2)). An all-zero recon normalizes to zero.
double rmse(const ImageCube &truth, const ImageCube &recon);

inline constexpr double kDisplayFloorDb = -30.0;

struct Projection
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> db; // row-major, in [floor, 0]
};

/// Per-pixel max of |image| along `axis` (0 = z, 1 = y, 2 = x), in dB relative to the global peak,
/// floored at `floor_db`. The remaining axes keep their order.
Projection max_projection(const ImageCube &image, std::size_t axis, double floor_db = kDisplayFloorDb);

/// Binary 8-bit PGM, floor_db mapped to 0 and 0 dB to 255.
void write_pgm(std::ostream &out, const Projection &p, double floor_db = kDisplayFloorDb);

// ------------------------------------------------------------------------------------------------
// Operation counts
// ------------------------------------------------------------------------------------------------

/// Floating-point operation counts of the two non-iterative reconstructions, per pipeline stage,
/// for an N_R x N_A x N_E data/image size and an N_l-tap interpolation kernel.
struct FlopModel
{
    struct Stages
    {
        double azimuth_fft = 0.0;
        double elevation_fft = 0.0;
        double matched_filter = 0.0;
        double stolt_interpolation = 0.0;
        double azimuth_ifft = 0.0;
        double elevation_ifft = 0.0;
        double range_ifft = 0.0;
        double frequency_summation = 0.0;

        double total() const;
    };

    Stages omegak;
    Stages holo;
    double flops_omegak = 0.0;
    double flops_holo = 0.0;
    double xi = 0.0; // flops_omegak / flops_holo
};

FlopModel flop_model(double n_range, double n_azimuth, double n_elevation, double n_taps);

/// 6 N P Q + 2 N P (Q - 1): one product of the explicit N P x Q matrix with a vector.
double explicit_matrix_flops(double n_freq, double n_positions, double n_voxels);

} // namespace nfcs

#endif
