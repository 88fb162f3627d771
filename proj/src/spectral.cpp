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

#include "nfcs/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace nfcs {

std::vector<double> spatial_freq_axis(std::size_t n, double pitch)
{
    std::vector<double> axis(n);
    const double scale = 2.0 * kPi / (static_cast<double>(n) * pitch);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto m = i <= n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
        axis[i] = m * scale;
    }
    return axis;
}

std::pair<std::vector<double>, std::vector<double>> spatial_freq_axes(const ApertureGrid &aperture)
{
    return {spatial_freq_axis(aperture.nx, aperture.pitch_x), spatial_freq_axis(aperture.ny, aperture.pitch_y)};
}

Dispersion dispersion_kz(double k, double kx, double ky)
{
    const double four_k2 = 4.0 * k * k;
    const double arg = four_k2 - kx * kx - ky * ky;
    if (arg > kEvanescentEpsilon * four_k2)
        return {true, std::sqrt(arg)};
    return {false, 0.0};
}

double jacobian(double k, double kx, double ky)
{
    const auto d = dispersion_kz(k, kx, ky);
    if (!d.propagating)
        throw UndefinedJacobian("jacobian: evanescent or boundary spectral bin");
    return 4.0 * k / d.kz;
}

// ------------------------------------------------------------------------------------------------

std::mutex &detail::fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

Fft2::Fft2(std::size_t ny, std::size_t nx) : ny_(ny), nx_(nx), scale_(1.0 / std::sqrt(static_cast<double>(ny * nx)))
{
    if (ny == 0 || nx == 0)
        throw std::invalid_argument("Fft2: empty slice");
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_complex *buf = fftw_alloc_complex(ny * nx);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!forward_plan_ || !inverse_plan_)
        throw std::runtime_error("Fft2: FFTW planning failed");
}

Fft2::~Fft2()
{
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Fft2::check(std::span<cdouble> slice) const
{
    if (slice.size() != ny_ * nx_)
        throw std::invalid_argument("Fft2: slice size does not match the plan");
}

void Fft2::forward(std::span<cdouble> slice) const
{
    check(slice);
    auto *p = reinterpret_cast<fftw_complex *>(slice.data());
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
    for (auto &v : slice)
        v *= scale_;
}

void Fft2::inverse(std::span<cdouble> slice) const
{
    check(slice);
    auto *p = reinterpret_cast<fftw_complex *>(slice.data());
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), p, p);
    for (auto &v : slice)
        v *= scale_;
}

std::vector<cdouble> fft2_aperture(std::span<const cdouble> slice, std::size_t ny, std::size_t nx)
{
    if (slice.size() != ny * nx)
        throw std::invalid_argument("fft2_aperture: dimension mismatch");
    std::vector<cdouble> out(slice.begin(), slice.end());
    Fft2(ny, nx).forward(out);
    return out;
}

std::vector<cdouble> ifft2_aperture(std::span<const cdouble> spectrum, std::size_t ny, std::size_t nx)
{
    if (spectrum.size() != ny * nx)
        throw std::invalid_argument("ifft2_aperture: dimension mismatch");
    std::vector<cdouble> out(spectrum.begin(), spectrum.end());
    Fft2(ny, nx).inverse(out);
    return out;
}

// ------------------------------------------------------------------------------------------------

SpectralPlan::SpectralPlan(const ApertureGrid &aperture, const FrequencyGrid &freqs)
    : aperture_(aperture), freqs_(freqs), k_(freqs.wavenumbers()),
      fft_(std::make_shared<Fft2>(aperture.ny, aperture.nx))
{
    validate(aperture);
    validate(freqs);
    std::tie(kx_, ky_) = spatial_freq_axes(aperture);

    const std::size_t nb = bins();
    propagating_.assign(freqs.n_f * nb, 0);
    kz_.assign(freqs.n_f * nb, 0.0);
    jacobian_.assign(freqs.n_f * nb, 0.0);
    for (std::size_t f = 0; f < freqs.n_f; ++f)
    {
        for (std::size_t iy = 0; iy < aperture.ny; ++iy)
        {
            for (std::size_t ix = 0; ix < aperture.nx; ++ix)
            {
                const std::size_t idx = f * nb + iy * aperture.nx + ix;
                const auto d = dispersion_kz(k_[f], kx_[ix], ky_[iy]);
                if (!d.propagating)
                    continue;
                propagating_[idx] = 1;
                kz_[idx] = d.kz;
                jacobian_[idx] = 4.0 * k_[f] / d.kz;
            }
        }
    }
}

std::size_t SpectralPlan::propagating_count() const
{
    std::size_t n = 0;
    for (auto p : propagating_)
        n += p;
    return n;
}

} // namespace nfcs
