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

#include "nfcs/holo_operator.hpp"

#include <algorithm>
#include <cmath>

namespace nfcs {

namespace {
// Bins handled together by one thread; keeps the per-block accumulators in cache.
constexpr std::size_t kBinBlock = 256;

// acc += c; c *= st. Complex arrays viewed as interleaved (re, im) doubles.
void accumulate_and_advance(double *__restrict acc, double *__restrict c, const double *__restrict st,
                            std::size_t n)
{
    for (std::size_t b = 0; b < n; ++b)
    {
        const double cr = c[2 * b], ci = c[2 * b + 1];
        const double sr = st[2 * b], si = st[2 * b + 1];
        acc[2 * b] += cr;
        acc[2 * b + 1] += ci;
        c[2 * b] = cr * sr - ci * si;
        c[2 * b + 1] = cr * si + ci * sr;
    }
}

// acc = g + conj(st) * acc.
void horner_step(double *__restrict acc, const double *__restrict g, const double *__restrict st, std::size_t n)
{
    for (std::size_t b = 0; b < n; ++b)
    {
        const double ar = acc[2 * b], ai = acc[2 * b + 1];
        const double sr = st[2 * b], si = st[2 * b + 1];
        acc[2 * b] = g[2 * b] + sr * ar + si * ai;
        acc[2 * b + 1] = g[2 * b + 1] + sr * ai - si * ar;
    }
}

double *as_real(cdouble *p) { return reinterpret_cast<double *>(p); }
const double *as_real(const cdouble *p) { return reinterpret_cast<const double *>(p); }
} // namespace

std::string to_string(KernelMode m)
{
    return m == KernelMode::paper_faithful ? "paper_faithful" : "adjoint_exact";
}

KernelMode kernel_mode_from_string(const std::string &s)
{
    if (s == "paper_faithful")
        return KernelMode::paper_faithful;
    if (s == "adjoint_exact")
        return KernelMode::adjoint_exact;
    throw std::invalid_argument("unknown kernel mode '" + s + "'");
}

HoloOperator::HoloOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                           KernelMode mode, std::optional<SamplingMask> mask)
    : plan_(aperture, freqs), volume_(volume), mode_(mode)
{
    validate(volume, aperture);
    set_mask(std::move(mask));

    const double d_first = std::abs(volume.z(0) - aperture.plane_z);
    const double d_step = volume.nz > 1 ? std::abs(volume.z(1) - aperture.plane_z) - d_first : 0.0;

    const std::size_t nf = freqs.n_f;
    const std::size_t nb = plan_.bins();
    backward_.assign(nf * nb, 0.0);
    forward_.assign(nf * nb, 0.0);
    step_.assign(nf * nb, 0.0);
    for (std::size_t f = 0; f < nf; ++f)
    {
        for (std::size_t b = 0; b < nb; ++b)
        {
            if (!plan_.propagating(f, b))
                continue;
            const std::size_t i = f * nb + b;
            const double j = plan_.jacobian(f, b);
            const double kz = plan_.kz(f, b);
            const cdouble base = std::polar(1.0, kz * d_first);
            forward_[i] = std::conj(base) / j;
            backward_[i] = base * (mode == KernelMode::paper_faithful ? j : 1.0 / j);
            step_[i] = std::polar(1.0, kz * d_step);
        }
    }
}

std::string HoloOperator::name() const
{
    return "holo/" + to_string(mode_);
}

ImageCube HoloOperator::backward(const DataCube &data) const
{
    if (data.dims() != data_dims())
        throw std::invalid_argument("backproject: data dims do not match the operator");

    const std::size_t nf = plan_.frequencies().n_f;
    const std::size_t nb = plan_.bins();
    const Fft2 &fft = plan_.fft();

    DataCube spectra = data;
    mask_data(spectra);
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < nf; ++f)
        fft.forward(spectra.slice(f));

    ImageCube image(image_dims());
    const std::size_t nz = volume_.nz;
    const std::size_t blocks = (nb + kBinBlock - 1) / kBinBlock;
#pragma omp parallel
    {
        std::vector<cdouble> c(kBinBlock);
#pragma omp for schedule(static)
        for (std::size_t blk = 0; blk < blocks; ++blk)
        {
            const std::size_t b0 = blk * kBinBlock;
            const std::size_t n = std::min(kBinBlock, nb - b0);
            for (std::size_t f = 0; f < nf; ++f)
            {
                const auto s = spectra.slice(f).subspan(b0, n);
                const cdouble *w = backward_.data() + f * nb + b0;
                const cdouble *st = step_.data() + f * nb + b0;
                for (std::size_t b = 0; b < n; ++b)
                    c[b] = s[b] * w[b];
                for (std::size_t z = 0; z < nz; ++z)
                    accumulate_and_advance(as_real(image.slice(z).data() + b0), as_real(c.data()), as_real(st), n);
            }
        }
#pragma omp for schedule(static)
        for (std::size_t z = 0; z < nz; ++z)
            fft.inverse(image.slice(z));
    }
    return image;
}

DataCube HoloOperator::forward(const ImageCube &image) const
{
    if (image.dims() != image_dims())
        throw std::invalid_argument("project: image dims do not match the operator");

    const std::size_t nf = plan_.frequencies().n_f;
    const std::size_t nb = plan_.bins();
    const Fft2 &fft = plan_.fft();

    ImageCube spectra = image;
#pragma omp parallel for schedule(static)
    for (std::size_t z = 0; z < volume_.nz; ++z)
        fft.forward(spectra.slice(z));

    DataCube data(data_dims());
    const std::size_t nz = volume_.nz;
#pragma omp parallel for schedule(static)
    for (std::size_t f = 0; f < nf; ++f)
    {
        auto acc = data.slice(f);
        const cdouble *w = forward_.data() + f * nb;
        const cdouble *st = step_.data() + f * nb;
        // Horner: sum_z G_z conj(st)^z, starting from the last range bin.
        const auto last = spectra.slice(nz - 1);
        std::copy(last.begin(), last.end(), acc.begin());
        for (std::size_t z = nz - 1; z-- > 0;)
        {
            horner_step(as_real(acc.data()), as_real(spectra.slice(z).data()), as_real(st), nb);
        }
        for (std::size_t b = 0; b < nb; ++b)
            acc[b] *= w[b];
        fft.inverse(acc);
    }
    mask_data(data);
    return data;
}

} // namespace nfcs
