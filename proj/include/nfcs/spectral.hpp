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

#ifndef NFCS_SPECTRAL_HPP
#define NFCS_SPECTRAL_HPP

#include "nfcs/geometry.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nfcs {

namespace detail {
// The FFTW planner is not thread-safe; plan execution is.
std::mutex &fftw_planner_mutex();
} // namespace detail

/// Relative guard on 4k^2 - kx^2 - ky^2 below which a bin is treated as evanescent.
inline constexpr double kEvanescentEpsilon = 1e-9;

/// Spatial-frequency axis in transform index order: 2*pi*m/(n*pitch), m = 0..n/2, then negative.
std::vector<double> spatial_freq_axis(std::size_t n, double pitch);
std::pair<std::vector<double>, std::vector<double>> spatial_freq_axes(const ApertureGrid &aperture); // (kx, ky)

struct Dispersion
{
    bool propagating = false;
    double kz = 0.0;
};

/// kz = sqrt(4k^2 - kx^2 - ky^2) when the argument exceeds the evanescent guard.
Dispersion dispersion_kz(double k, double kx, double ky);

class UndefinedJacobian : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// dkz/dk = 4k / kz. Throws UndefinedJacobian outside the propagating region.
double jacobian(double k, double kx, double ky);

/// In-place unitary 2-D DFT over a row-major ny x nx slice (FFTW backed).
/// Plans are built once; execution is re-entrant so one instance may be shared across threads.
class Fft2
{
  public:
    Fft2(std::size_t ny, std::size_t nx);
    ~Fft2();
    Fft2(const Fft2 &) = delete;
    Fft2 &operator=(const Fft2 &) = delete;

    void forward(std::span<cdouble> slice) const;
    void inverse(std::span<cdouble> slice) const;

    std::size_t ny() const { return ny_; }
    std::size_t nx() const { return nx_; }

  private:
    void check(std::span<cdouble> slice) const;

    std::size_t ny_;
    std::size_t nx_;
    double scale_;
    void *forward_plan_ = nullptr;
    void *inverse_plan_ = nullptr;
};

std::vector<cdouble> fft2_aperture(std::span<const cdouble> slice, std::size_t ny, std::size_t nx);
std::vector<cdouble> ifft2_aperture(std::span<const cdouble> spectrum, std::size_t ny, std::size_t nx);

/// Wavenumber-domain tables shared by both operator families: spatial-frequency axes, and per
/// (frequency, spectral bin) the propagating flag, kz and the Jacobian.
class SpectralPlan
{
  public:
    SpectralPlan(const ApertureGrid &aperture, const FrequencyGrid &freqs);

    const ApertureGrid &aperture() const { return aperture_; }
    const FrequencyGrid &frequencies() const { return freqs_; }
    const std::vector<double> &kx() const { return kx_; }
    const std::vector<double> &ky() const { return ky_; }
    const std::vector<double> &k() const { return k_; }

    std::size_t bins() const { return aperture_.size(); }
    // Row-major (frequency, iy, ix).
    bool propagating(std::size_t f, std::size_t bin) const { return propagating_[f * bins() + bin] != 0; }
    double kz(std::size_t f, std::size_t bin) const { return kz_[f * bins() + bin]; }
    double jacobian(std::size_t f, std::size_t bin) const { return jacobian_[f * bins() + bin]; }
    std::size_t propagating_count() const;

    /// Largest |kx|, |ky| representable on this aperture (Nyquist); compare against 2k.
    double max_kx() const { return kPi / aperture_.pitch_x; }
    double max_ky() const { return kPi / aperture_.pitch_y; }

    const Fft2 &fft() const { return *fft_; }

  private:
    ApertureGrid aperture_;
    FrequencyGrid freqs_;
    std::vector<double> kx_;
    std::vector<double> ky_;
    std::vector<double> k_;
    std::vector<std::uint8_t> propagating_;
    std::vector<double> kz_;
    std::vector<double> jacobian_;
    std::shared_ptr<Fft2> fft_;
};

} // namespace nfcs

#endif
