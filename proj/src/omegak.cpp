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

#include "nfcs/omegak.hpp"

#include <fftw3.h>

#include <algorithm>
#include <climits>
#include <cmath>

namespace nfcs {

double StoltKernel::tap(double t) const
{
    const double half_width = 0.5 * static_cast<double>(taps) + 0.5;
    const double a = std::abs(t);
    if (a >= half_width)
        return 0.0;
    const double window = 0.5 * (1.0 + std::cos(kPi * a / half_width));
    const double sinc = a < 1e-12 ? 1.0 : std::sin(kPi * t) / (kPi * t);
    return sinc * window;
}

long StoltKernel::weights(double u, long lo, long hi, std::vector<double> &w) const
{
    const long half = static_cast<long>(taps / 2);
    const long base = static_cast<long>(std::floor(u));
    const long first = std::max(lo, base - half + 1);
    const long last = std::min(hi, base + half);
    w.clear();
    double sum = 0.0;
    for (long i = first; i <= last; ++i)
    {
        w.push_back(tap(u - static_cast<double>(i)));
        sum += w.back();
    }
    if (sum != 0.0)
        for (auto &x : w)
            x /= sum;
    return first;
}

StoltKernel make_stolt_kernel(std::size_t taps)
{
    if (taps < 2 || taps % 2 != 0)
        throw std::invalid_argument("Stolt kernel length must be even and >= 2");
    return StoltKernel{taps};
}

StoltResult stolt_resample(std::span<const cdouble> line, std::span<const double> kz_source,
                           std::span<const double> kz_target, const StoltKernel &kernel)
{
    if (line.size() != kz_source.size())
        throw std::invalid_argument("stolt_resample: line and kz_source lengths differ");

    StoltResult out;
    out.values.assign(kz_target.size(), 0.0);

    std::size_t first = 0;
    while (first < kz_source.size() && !(kz_source[first] > 0.0))
        ++first;
    const std::size_t n = kz_source.size() - first;
    if (n < kernel.taps)
    {
        out.warnings = 1;
        return out;
    }
    for (std::size_t i = first + 1; i < kz_source.size(); ++i)
        if (!(kz_source[i] > kz_source[i - 1]))
            throw std::invalid_argument("stolt_resample: kz_source must be strictly increasing where propagating");

    const auto src = kz_source.subspan(first);
    std::vector<double> w;
    for (std::size_t t = 0; t < kz_target.size(); ++t)
    {
        const double kz = kz_target[t];
        if (kz < src.front() || kz > src.back())
            continue;
        const auto it = std::upper_bound(src.begin(), src.end(), kz);
        const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - src.begin()), n - 1);
        const std::size_t lo = hi - 1;
        const double u = static_cast<double>(lo) + (kz - src[lo]) / (src[hi] - src[lo]);
        const long start = kernel.weights(u, 0, static_cast<long>(n) - 1, w);
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            acc += w[i] * line[first + static_cast<std::size_t>(start) + i];
        out.values[t] = acc;
    }
    return out;
}

// ------------------------------------------------------------------------------------------------

OmegaKOperator::OmegaKOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                               StoltKernel kernel, std::optional<SamplingMask> mask)
    : plan_(aperture, freqs), volume_(volume), kernel_(kernel)
{
    validate(volume, aperture);
    make_stolt_kernel(kernel.taps);
    set_mask(std::move(mask));

    const double first = volume.z(0) - aperture.plane_z;
    const double last = volume.z(volume.nz - 1) - aperture.plane_z;
    reversed_ = first < 0.0;
    d0_ = std::min(std::abs(first), std::abs(last));

    const std::size_t nf = freqs.n_f;
    if (nf >= 2)
    {
        const double r_unamb = kSpeedOfLight / (2.0 * freqs.step());
        dz_ = volume.nz > 1 ? volume.dz() : r_unamb / static_cast<double>(nf);
        n_range_ = std::max<std::size_t>(volume.nz, static_cast<std::size_t>(std::ceil(r_unamb / dz_ - 1e-9)));
    }
    else
    {
        dz_ = volume.nz > 1 ? volume.dz() : 1.0;
        n_range_ = volume.nz;
    }
    dkz_ = 2.0 * kPi / (static_cast<double>(n_range_) * dz_);

    const std::size_t nb = plan_.bins();
    ref_phase_.assign(nf * nb, 0.0);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t b = 0; b < nb; ++b)
            if (plan_.propagating(f, b))
                ref_phase_[f * nb + b] = std::polar(1.0, plan_.kz(f, b) * d0_);

    const auto &k = plan_.k();
    const double dk = nf >= 2 ? k[1] - k[0] : 0.0;
    std::vector<double> w;
    const auto n_fold = static_cast<std::int64_t>(n_range_);
    auto fold = [&](std::int64_t q) { return ((q % n_fold) + n_fold) % n_fold; };
    backward_begin_.assign(nb + 1, 0);
    forward_begin_.assign(nb + 1, 0);
    for (std::size_t b = 0; b < nb; ++b)
    {
        backward_begin_[b] = backward_taps_.size();
        forward_begin_[b] = forward_taps_.size();

        std::size_t f_first = 0;
        while (f_first < nf && !plan_.propagating(f_first, b))
            ++f_first;
        if (nf - f_first < kernel_.taps)
        {
            if (f_first < nf)
                ++warnings_;
            continue;
        }
        const double kx = plan_.kx()[b % aperture.nx];
        const double ky = plan_.ky()[b / aperture.nx];
        const double krho2 = kx * kx + ky * ky;

        // nonuniform (k) -> uniform kz
        const double kz_lo = plan_.kz(f_first, b);
        const double kz_hi = plan_.kz(nf - 1, b);
        const auto q_lo = static_cast<std::int64_t>(std::ceil(kz_lo / dkz_));
        const auto q_hi = static_cast<std::int64_t>(std::floor(kz_hi / dkz_));
        for (std::int64_t q = q_lo; q <= q_hi; ++q)
        {
            const double kz_t = static_cast<double>(q) * dkz_;
            const double k_t = 0.5 * std::sqrt(kz_t * kz_t + krho2);
            const double u = (k_t - k[0]) / dk;
            const long start = kernel_.weights(u, static_cast<long>(f_first), static_cast<long>(nf) - 1, w);
            backward_taps_.push_back({fold(q), static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(w.size()),
                                      weights_.size()});
            weights_.insert(weights_.end(), w.begin(), w.end());
        }

        // uniform kz -> nonuniform (k)
        for (std::size_t f = f_first; f < nf; ++f)
        {
            const double v = plan_.kz(f, b) / dkz_;
            const long start = kernel_.weights(v, LONG_MIN / 4, LONG_MAX / 4, w);
            forward_taps_.push_back({fold(start), static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(w.size()),
                                     weights_.size()});
            weights_.insert(weights_.end(), w.begin(), w.end());
        }
    }
    backward_begin_[nb] = backward_taps_.size();
    forward_begin_[nb] = forward_taps_.size();

    std::lock_guard lock(detail::fftw_planner_mutex());
    const int n = static_cast<int>(n_range_);
    const int howmany = static_cast<int>(nb);
    fftw_complex *buf = fftw_alloc_complex(n_range_ * nb);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    range_forward_plan_ =
        fftw_plan_many_dft(1, &n, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1, FFTW_FORWARD, flags);
    range_inverse_plan_ =
        fftw_plan_many_dft(1, &n, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!range_forward_plan_ || !range_inverse_plan_)
        throw std::runtime_error("omegak: FFTW planning failed");
}

OmegaKOperator::~OmegaKOperator()
{
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(range_forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(range_inverse_plan_));
}

void OmegaKOperator::range_transform(std::vector<cdouble> &buffer, bool inverse) const
{
    auto *p = reinterpret_cast<fftw_complex *>(buffer.data());
    fftw_execute_dft(static_cast<fftw_plan>(inverse ? range_inverse_plan_ : range_forward_plan_), p, p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_range_));
    for (auto &v : buffer)
        v *= scale;
}

std::size_t OmegaKOperator::image_slot(std::size_t m) const
{
    return reversed_ ? volume_.nz - 1 - m : m;
}

ImageCube OmegaKOperator::backward(const DataCube &data) const
{
    if (data.dims() != data_dims())
        throw std::invalid_argument("omegak backward: data dims do not match the operator");
    const std::size_t nf = plan_.frequencies().n_f;
    const std::size_t nb = plan_.bins();
    const Fft2 &fft = plan_.fft();

    DataCube spectra = data;
    mask_data(spectra);
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < nf; ++f)
    {
        auto s = spectra.slice(f);
        fft.forward(s);
        for (std::size_t b = 0; b < nb; ++b)
            s[b] *= ref_phase_[f * nb + b];
    }

    std::vector<cdouble> buffer(n_range_ * nb);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b)
    {
        for (std::size_t t = backward_begin_[b]; t < backward_begin_[b + 1]; ++t)
        {
            const Tap &tap = backward_taps_[t];
            const double *w = weights_.data() + tap.offset;
            cdouble acc = 0.0;
            for (std::uint32_t i = 0; i < tap.n; ++i)
                acc += w[i] * spectra[(tap.f + i) * nb + b];
            buffer[static_cast<std::size_t>(tap.q) * nb + b] += acc;
        }
    }

    range_transform(buffer, true);
#pragma omp parallel for schedule(static)
    for (std::size_t m = 0; m < n_range_; ++m)
        fft.inverse(std::span<cdouble>(buffer.data() + m * nb, nb));

    ImageCube image(image_dims());
    for (std::size_t m = 0; m < volume_.nz; ++m)
        std::copy_n(buffer.begin() + static_cast<std::ptrdiff_t>(m * nb), nb, image.slice(image_slot(m)).begin());
    return image;
}

DataCube OmegaKOperator::forward(const ImageCube &image) const
{
    if (image.dims() != image_dims())
        throw std::invalid_argument("omegak forward: image dims do not match the operator");
    const std::size_t nf = plan_.frequencies().n_f;
    const std::size_t nb = plan_.bins();
    const Fft2 &fft = plan_.fft();

    std::vector<cdouble> buffer(n_range_ * nb);
    for (std::size_t m = 0; m < volume_.nz; ++m)
    {
        const auto src = image.slice(image_slot(m));
        std::copy(src.begin(), src.end(), buffer.begin() + static_cast<std::ptrdiff_t>(m * nb));
    }
#pragma omp parallel for schedule(static)
    for (std::size_t m = 0; m < n_range_; ++m)
        fft.forward(std::span<cdouble>(buffer.data() + m * nb, nb));
    range_transform(buffer, false);

    DataCube data(data_dims());
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b)
    {
        for (std::size_t t = forward_begin_[b]; t < forward_begin_[b + 1]; ++t)
        {
            const Tap &tap = forward_taps_[t];
            const double *w = weights_.data() + tap.offset;
            cdouble acc = 0.0;
            auto slot = static_cast<std::size_t>(tap.q);
            for (std::uint32_t i = 0; i < tap.n; ++i)
            {
                acc += w[i] * buffer[slot * nb + b];
                if (++slot == n_range_)
                    slot = 0;
            }
            data[tap.f * nb + b] = acc * std::conj(ref_phase_[tap.f * nb + b]);
        }
    }
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < nf; ++f)
        fft.inverse(data.slice(f));
    mask_data(data);
    return data;
}

ImageCube reconstruct_omegak(const DataCube &data, const ApertureGrid &aperture, const FrequencyGrid &freqs,
                             const VolumeGrid &volume, StoltKernel kernel)
{
    return OmegaKOperator(aperture, freqs, volume, kernel).backward(data);
}

std::unique_ptr<OmegaKOperator> omegak_operator_pair(const ApertureGrid &aperture, const FrequencyGrid &freqs,
                                                     const VolumeGrid &volume, std::optional<SamplingMask> mask,
                                                     StoltKernel kernel)
{
    return std::make_unique<OmegaKOperator>(aperture, freqs, volume, kernel, std::move(mask));
}

} // namespace nfcs
