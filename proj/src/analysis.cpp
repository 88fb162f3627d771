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

#include "nfcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace nfcs {

VoxelIndex argmax_abs(const ImageCube &image)
{
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t i = 0; i < image.size(); ++i)
    {
        const double v = std::norm(image[i]);
        if (v > best_v)
        {
            best_v = v;
            best = i;
        }
    }
    return voxel_index(image.dims(), best);
}

namespace {
std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }
} // namespace

bool MainLobe::contains(VoxelIndex peak, VoxelIndex v) const
{
    return distance(peak.z, v.z) <= z && distance(peak.y, v.y) <= y && distance(peak.x, v.x) <= x;
}

double coherence_estimate(const ImageCube &psf, VoxelIndex peak, MainLobe exclusion)
{
    const Dims3 &d = psf.dims();
    const double main = std::abs(psf[linear_index(d, peak)]);
    if (main == 0.0)
        throw std::invalid_argument("coherence_estimate: PSF is zero at the peak");
    double mu = 0.0;
    for (std::size_t i = 0; i < psf.size(); ++i)
    {
        if (exclusion.contains(peak, voxel_index(d, i)))
            continue;
        mu = std::max(mu, std::abs(psf[i]));
    }
    return mu / main;
}

std::array<std::vector<double>, 3> axis_projections(const ImageCube &cube)
{
    const Dims3 &d = cube.dims();
    std::array<std::vector<double>, 3> p{std::vector<double>(d[0], 0.0), std::vector<double>(d[1], 0.0),
                                         std::vector<double>(d[2], 0.0)};
    for (std::size_t i = 0; i < cube.size(); ++i)
    {
        const auto v = voxel_index(d, i);
        const double a = std::abs(cube[i]);
        p[0][v.z] = std::max(p[0][v.z], a);
        p[1][v.y] = std::max(p[1][v.y], a);
        p[2][v.x] = std::max(p[2][v.x], a);
    }
    return p;
}

PsfStats psf_stats(ImageCube normalized_psf, VoxelIndex peak, MainLobe exclusion)
{
    PsfStats s;
    s.peak = peak;
    s.exclusion = exclusion;
    s.main_lobe = std::abs(normalized_psf[linear_index(normalized_psf.dims(), peak)]);
    s.mu = coherence_estimate(normalized_psf, peak, exclusion);
    s.projections = axis_projections(normalized_psf);
    s.psf = std::move(normalized_psf);
    return s;
}

PsfStats psf_column(const SensingOperator &op, VoxelIndex voxel, MainLobe exclusion)
{
    const Dims3 d = op.image_dims();
    if (voxel.z >= d[0] || voxel.y >= d[1] || voxel.x >= d[2])
        throw std::invalid_argument("psf_column: voxel outside the volume");
    ImageCube e(d);
    e(voxel.z, voxel.y, voxel.x) = 1.0;
    ImageCube col = op.backward(op.forward(e));
    const cdouble peak = col(voxel.z, voxel.y, voxel.x);
    if (peak == cdouble{})
        throw std::invalid_argument("psf_column: zero response at the voxel");
    for (auto &v : col.values())
        v /= peak;
    PsfStats s = psf_stats(std::move(col), voxel, exclusion);
    s.main_lobe = std::abs(peak);
    return s;
}

// ------------------------------------------------------------------------------------------------

std::vector<cdouble> DenseMatrix::multiply(std::span<const cdouble> x) const
{
    if (x.size() != cols)
        throw std::invalid_argument("DenseMatrix::multiply: size mismatch");
    std::vector<cdouble> y(rows);
    for (std::size_t r = 0; r < rows; ++r)
    {
        cdouble acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
            acc += values[r * cols + c] * x[c];
        y[r] = acc;
    }
    return y;
}

std::vector<cdouble> DenseMatrix::multiply_adjoint(std::span<const cdouble> y) const
{
    if (y.size() != rows)
        throw std::invalid_argument("DenseMatrix::multiply_adjoint: size mismatch");
    std::vector<cdouble> x(cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            x[c] += std::conj(values[r * cols + c]) * y[r];
    return x;
}

std::vector<cdouble> DenseMatrix::column(std::size_t c) const
{
    std::vector<cdouble> v(rows);
    for (std::size_t r = 0; r < rows; ++r)
        v[r] = values[r * cols + c];
    return v;
}

DenseMatrix explicit_matrix_oracle(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                                   const std::optional<SamplingMask> &mask, std::size_t cap)
{
    const std::size_t rows = freqs.n_f * aperture.size();
    const std::size_t cols = volume.size();
    if (cols != 0 && rows > cap / cols)
        throw MatrixTooLarge("explicit_matrix_oracle: " + std::to_string(rows) + " x " + std::to_string(cols) +
                             " exceeds the cap of " + std::to_string(cap) + " entries");
    if (mask && (mask->ny != aperture.ny || mask->nx != aperture.nx))
        throw std::invalid_argument("explicit_matrix_oracle: mask dims do not match the aperture");

    DenseMatrix m{rows, cols, std::vector<cdouble>(rows * cols)};
    for (std::size_t f = 0; f < freqs.n_f; ++f)
    {
        const double k = freqs.wavenumber(f);
        for (std::size_t ey = 0; ey < aperture.ny; ++ey)
            for (std::size_t ex = 0; ex < aperture.nx; ++ex)
            {
                if (mask && !(*mask)(ey, ex))
                    continue;
                const std::size_t row = (f * aperture.ny + ey) * aperture.nx + ex;
                for (std::size_t z = 0; z < volume.nz; ++z)
                    for (std::size_t y = 0; y < volume.ny; ++y)
                        for (std::size_t x = 0; x < volume.nx; ++x)
                        {
                            const double dx = volume.x(x) - aperture.x(ex);
                            const double dy = volume.y(y) - aperture.y(ey);
                            const double dz = volume.z(z) - aperture.plane_z;
                            const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                            m.values[row * cols + (z * volume.ny + y) * volume.nx + x] = std::polar(1.0, -2.0 * k * r);
                        }
            }
    }
    return m;
}

double matrix_coherence(const DenseMatrix &m)
{
    std::vector<std::vector<cdouble>> cols(m.cols);
    std::vector<double> norms(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c)
    {
        cols[c] = m.column(c);
        norms[c] = std::sqrt(norm2_squared(cols[c]));
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < m.cols; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            if (norms[i] > 0.0 && norms[j] > 0.0)
                mu = std::max(mu, std::abs(dot(cols[i], cols[j])) / (norms[i] * norms[j]));
    return mu;
}

ImageCube matrix_psf_column(const DenseMatrix &m, const Dims3 &image_dims, std::size_t column)
{
    if (image_dims[0] * image_dims[1] * image_dims[2] != m.cols || column >= m.cols)
        throw std::invalid_argument("matrix_psf_column: dims do not match the matrix");
    auto v = m.multiply_adjoint(m.column(column));
    const cdouble peak = v[column];
    for (auto &x : v)
        x /= peak;
    return {image_dims, std::move(v)};
}

// ------------------------------------------------------------------------------------------------

double rmse(const ImageCube &truth, const ImageCube &recon)
{
    if (truth.dims() != recon.dims())
        throw std::invalid_argument("rmse: dimension mismatch");
    double t_max = 0.0, r_max = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        t_max = std::max(t_max, std::abs(truth[i]));
        r_max = std::max(r_max, std::abs(recon[i]));
    }
    if (t_max == 0.0)
        throw std::invalid_argument("rmse: all-zero truth");
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
    {
        const double a = std::abs(truth[i]) / t_max;
        const double b = r_max > 0.0 ? std::abs(recon[i]) / r_max : 0.0;
        s += (a - b) * (a - b);
    }
    return std::sqrt(s / static_cast<double>(truth.size()));
}

Projection max_projection(const ImageCube &image, std::size_t axis, double floor_db)
{
    if (axis > 2)
        throw std::invalid_argument("max_projection: axis must be 0, 1 or 2");
    const Dims3 &d = image.dims();
    Projection p;
    p.rows = axis == 0 ? d[1] : d[0];
    p.cols = axis == 2 ? d[1] : d[2];
    std::vector<double> mag(p.rows * p.cols, 0.0);
    double peak = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i)
    {
        const auto v = voxel_index(d, i);
        const std::size_t r = axis == 0 ? v.y : v.z;
        const std::size_t c = axis == 2 ? v.y : v.x;
        const double a = std::abs(image[i]);
        mag[r * p.cols + c] = std::max(mag[r * p.cols + c], a);
        peak = std::max(peak, a);
    }
    p.db.resize(mag.size());
    for (std::size_t i = 0; i < mag.size(); ++i)
    {
        const double db = peak > 0.0 && mag[i] > 0.0 ? 20.0 * std::log10(mag[i] / peak) : floor_db;
        p.db[i] = std::max(db, floor_db);
    }
    return p;
}

void write_pgm(std::ostream &out, const Projection &p, double floor_db)
{
    out << "P5\n" << p.cols << ' ' << p.rows << "\n255\n";
    for (double db : p.db)
    {
        const double t = std::clamp((db - floor_db) / -floor_db, 0.0, 1.0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
}

// ------------------------------------------------------------------------------------------------

double FlopModel::Stages::total() const
{
    return azimuth_fft + elevation_fft + matched_filter + stolt_interpolation + azimuth_ifft + elevation_ifft +
           range_ifft + frequency_summation;
}

FlopModel flop_model(double nr, double na, double ne, double nl)
{
    if (!(nr > 0 && na > 0 && ne > 0 && nl > 0))
        throw std::invalid_argument("flop_model: dimensions must be positive");
    const double vol = nr * na * ne;
    FlopModel m;
    for (auto *s : {&m.omegak, &m.holo})
    {
        s->azimuth_fft = 5.0 * vol * std::log2(na);
        s->elevation_fft = 5.0 * vol * std::log2(ne);
        s->matched_filter = 6.0 * vol;
        s->azimuth_ifft = 5.0 * vol * std::log2(na);
        s->elevation_ifft = 5.0 * vol * std::log2(ne);
    }
    m.omegak.stolt_interpolation = 2.0 * (2.0 * nl - 1.0) * vol;
    m.omegak.range_ifft = 5.0 * vol * std::log2(nr);
    m.holo.frequency_summation = 2.0 * (nr - 1.0) * vol;
    m.flops_omegak = m.omegak.total();
    m.flops_holo = m.holo.total();
    m.xi = m.flops_omegak / m.flops_holo;
    return m;
}

double explicit_matrix_flops(double n_freq, double n_positions, double n_voxels)
{
    return 6.0 * n_freq * n_positions * n_voxels + 2.0 * n_freq * n_positions * (n_voxels - 1.0);
}

} // namespace nfcs
