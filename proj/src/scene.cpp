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

#include "nfcs/scene.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace nfcs {

namespace {

// Nearest voxel index along one axis, or -1 when more than half a voxel outside.
long nearest_index(double value, double first, double step, std::size_t n)
{
    if (n == 1)
        return std::abs(value - first) <= 0.5 * std::max(step, 1e-12) || step == 0.0 ? 0 : -1;
    const double u = (value - first) / step;
    const long i = std::lround(u);
    if (u < -0.5 - 1e-9 || u > static_cast<double>(n) - 0.5 + 1e-9)
        return -1;
    return std::clamp(i, 0L, static_cast<long>(n) - 1);
}

struct VoxelIndex
{
    long z, y, x;
};

VoxelIndex locate(const Scatterer &s, const VolumeGrid &v)
{
    // A single range slice accepts anything within the transverse bounds at exactly that range.
    const long iz = v.nz == 1 ? (s.z == v.z_min ? 0 : -1) : nearest_index(s.z, v.z_min, v.dz(), v.nz);
    return {iz, nearest_index(s.y, v.y(0), v.pitch_y, v.ny), nearest_index(s.x, v.x(0), v.pitch_x, v.nx)};
}

} // namespace

void validate(const PointScene &scene, const VolumeGrid &volume)
{
    for (std::size_t i = 0; i < scene.points.size(); ++i)
    {
        const auto &p = scene.points[i];
        if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag()))
            throw std::invalid_argument("scene: scatterer " + std::to_string(i) + " has a non-finite amplitude");
        const auto idx = locate(p, volume);
        if (idx.z < 0 || idx.y < 0 || idx.x < 0)
            throw std::invalid_argument("scene: scatterer " + std::to_string(i) + " lies outside the volume");
    }
}

DataCube simulate_scatter(const PointScene &scene, const ApertureGrid &aperture, const FrequencyGrid &freqs,
                          SimulationOptions options)
{
    validate(aperture);
    validate(freqs);
    if (scene.points.empty())
        throw std::invalid_argument("simulate_scatter: empty scene");
    for (const auto &p : scene.points)
        if (p.z == aperture.plane_z)
            throw std::invalid_argument("simulate_scatter: scatterer on the array plane");

    DataCube data(data_dims(freqs, aperture));
    const auto k = freqs.wavenumbers();
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < freqs.n_f; ++f)
    {
        auto slice = data.slice(f);
        for (const auto &p : scene.points)
        {
            const double dz2 = (p.z - aperture.plane_z) * (p.z - aperture.plane_z);
            for (std::size_t iy = 0; iy < aperture.ny; ++iy)
            {
                const double dy = p.y - aperture.y(iy);
                for (std::size_t ix = 0; ix < aperture.nx; ++ix)
                {
                    const double dx = p.x - aperture.x(ix);
                    const double r2 = dx * dx + dy * dy + dz2;
                    const double r = std::sqrt(r2);
                    const double amp = options.spreading_loss ? 1.0 / r2 : 1.0;
                    slice[iy * aperture.nx + ix] += p.amplitude * std::polar(amp, -2.0 * k[f] * r);
                }
            }
        }
    }
    return data;
}

ImageCube rasterize(const PointScene &scene, const VolumeGrid &volume)
{
    validate(scene, volume);
    ImageCube truth(image_dims(volume));
    for (const auto &p : scene.points)
    {
        const auto idx = locate(p, volume);
        truth(static_cast<std::size_t>(idx.z), static_cast<std::size_t>(idx.y), static_cast<std::size_t>(idx.x)) +=
            p.amplitude;
    }
    return truth;
}

DataCube add_noise(const DataCube &data, double snr_db, std::uint64_t seed)
{
    if (data.size() == 0)
        throw std::invalid_argument("add_noise: empty cube");
    if (std::isnan(snr_db))
        throw std::invalid_argument("add_noise: SNR must not be NaN");
    if (std::isinf(snr_db) && snr_db > 0)
        return data;

    const double signal_power = norm2_squared(data.values()) / static_cast<double>(data.size());
    const double noise_power = signal_power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(noise_power / 2.0);

    DataCube out = data;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (auto &v : out.values())
    {
        const double re = normal(rng);
        v += cdouble(re, normal(rng));
    }
    return out;
}

PointScene read_scene(std::istream &in)
{
    PointScene scene;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        Scatterer s;
        double re = 0.0, im = 0.0;
        if (!(ls >> s.x))
            continue; // blank line
        if (!(ls >> s.y >> s.z >> re >> im))
            throw std::invalid_argument("scene line " + std::to_string(line_no) + ": expected `x y z re im`");
        std::string extra;
        if (ls >> extra)
            throw std::invalid_argument("scene line " + std::to_string(line_no) + ": trailing tokens");
        s.amplitude = {re, im};
        scene.points.push_back(s);
    }
    return scene;
}

void write_scene(std::ostream &out, const PointScene &scene)
{
    char buf[160];
    for (const auto &p : scene.points)
    {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", p.x, p.y, p.z, p.amplitude.real(),
                      p.amplitude.imag());
        out << buf;
    }
}

Scatterer voxel_scatterer(const VolumeGrid &volume, std::size_t iz, std::size_t iy, std::size_t ix, cdouble amplitude)
{
    return {volume.x(ix), volume.y(iy), volume.z(iz), amplitude};
}

// ------------------------------------------------------------------------------------------------

SphericalWaveOperator::SphericalWaveOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs,
                                             const VolumeGrid &volume, std::optional<SamplingMask> mask)
    : aperture_(aperture), freqs_(freqs), volume_(volume), k_(freqs.wavenumbers())
{
    validate(aperture);
    validate(freqs);
    validate(volume, aperture);
    set_mask(std::move(mask));
}

cdouble SphericalWaveOperator::element(std::size_t f, std::size_t e, std::size_t q) const
{
    const std::size_t ex = e % aperture_.nx, ey = e / aperture_.nx;
    const std::size_t qx = q % volume_.nx, qy = (q / volume_.nx) % volume_.ny, qz = q / (volume_.nx * volume_.ny);
    const double dx = volume_.x(qx) - aperture_.x(ex);
    const double dy = volume_.y(qy) - aperture_.y(ey);
    const double dz = volume_.z(qz) - aperture_.plane_z;
    return std::polar(1.0, -2.0 * k_[f] * std::sqrt(dx * dx + dy * dy + dz * dz));
}

DataCube SphericalWaveOperator::forward(const ImageCube &image) const
{
    if (image.dims() != image_dims())
        throw std::invalid_argument("spherical forward: image dims mismatch");
    DataCube data(data_dims());
    const std::size_t ne = aperture_.size();
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < freqs_.n_f; ++f)
        for (std::size_t e = 0; e < ne; ++e)
        {
            cdouble acc = 0.0;
            for (std::size_t q = 0; q < image.size(); ++q)
                if (image[q] != cdouble{})
                    acc += element(f, e, q) * image[q];
            data[f * ne + e] = acc;
        }
    mask_data(data);
    return data;
}

ImageCube SphericalWaveOperator::backward(const DataCube &data) const
{
    if (data.dims() != data_dims())
        throw std::invalid_argument("spherical backward: data dims mismatch");
    DataCube masked = data;
    mask_data(masked);
    ImageCube image(image_dims());
    const std::size_t ne = aperture_.size();
#pragma omp parallel for schedule(static)
    for (std::size_t q = 0; q < image.size(); ++q)
    {
        cdouble acc = 0.0;
        for (std::size_t f = 0; f < freqs_.n_f; ++f)
            for (std::size_t e = 0; e < ne; ++e)
                acc += std::conj(element(f, e, q)) * masked[f * ne + e];
        image[q] = acc;
    }
    return image;
}

} // namespace nfcs
