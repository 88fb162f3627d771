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

#ifndef NFCS_OMEGAK_HPP
#define NFCS_OMEGAK_HPP

#include "nfcs/sensing_operator.hpp"
#include "nfcs/spectral.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace nfcs {

/// Windowed-sinc interpolation kernel over a uniformly indexed sequence. The raised-cosine window
/// reaches zero half a sample beyond the outermost tap; weights are renormalized to sum to one.
struct StoltKernel
{
    std::size_t taps = 8;

    /// Fills `weights` for the taps first..first+n-1 around fractional position u, restricted to
    /// the index range [lo, hi]. Returns the first tap index.
    long weights(double u, long lo, long hi, std::vector<double> &weights) const;
    double tap(double offset) const;
};

StoltKernel make_stolt_kernel(std::size_t taps);

struct StoltResult
{
    std::vector<cdouble> values;
    std::size_t warnings = 0; // lines zeroed for lack of propagating samples
};

/// Resamples a line known at nonuniform, increasing kz_source positions onto kz_target.
/// Entries with kz_source <= 0 are treated as evanescent and ignored. Targets outside the
/// propagating support are zero. The fractional source index of each target comes from piecewise
/// linear inversion of kz_source.
StoltResult stolt_resample(std::span<const cdouble> line, std::span<const double> kz_source,
                           std::span<const double> kz_target, const StoltKernel &kernel);

/// omega-k (range migration) pair built on Stolt interpolation.
///
/// backward: FFT2 -> reference phase exp(+j kz d0) -> per-(kx,ky) Stolt resampling onto a uniform kz
/// grid -> 3-D inverse FFT over the whole unambiguous range -> crop to the volume.
/// forward: the reverse chain with uniform -> nonuniform resampling using the same kernel.
///
/// The uniform kz grid has spacing 2*pi / (N dz) with N = ceil(R_unamb / dz), so that the range
/// samples coincide with the volume's bins and the transform spans the full unambiguous range
/// R_unamb = c / (2 df). Uniform samples are folded modulo N, which is exact for the range samples.
class OmegaKOperator : public SensingOperator
{
  public:
    OmegaKOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                   StoltKernel kernel = {}, std::optional<SamplingMask> mask = std::nullopt);
    ~OmegaKOperator() override;

    DataCube forward(const ImageCube &image) const override;
    ImageCube backward(const DataCube &data) const override;

    Dims3 image_dims() const override { return nfcs::image_dims(volume_); }
    Dims3 data_dims() const override { return nfcs::data_dims(plan_.frequencies(), plan_.aperture()); }
    std::string name() const override { return "omegak"; }

    std::size_t range_bins() const { return n_range_; }
    double kz_step() const { return dkz_; }
    double unambiguous_range() const { return static_cast<double>(n_range_) * dz_; }
    /// Spectral lines with fewer propagating samples than kernel taps; zeroed.
    std::size_t stolt_warnings() const { return warnings_; }

  private:
    struct Tap
    {
        std::int64_t q;     // folded range slot: target (backward) or first tap (forward)
        std::uint32_t f;    // first source tap (backward) or source sample (forward)
        std::uint32_t n;    // tap count
        std::size_t offset; // into weights_
    };

    void range_transform(std::vector<cdouble> &buffer, bool inverse) const;
    std::size_t image_slot(std::size_t m) const; // range sample -> volume index

    SpectralPlan plan_;
    VolumeGrid volume_;
    StoltKernel kernel_;
    double d0_ = 0.0;
    double dz_ = 0.0;
    double dkz_ = 0.0;
    std::size_t n_range_ = 0;
    bool reversed_ = false;
    std::size_t warnings_ = 0;

    std::vector<std::size_t> backward_begin_; // per bin, into backward_taps_
    std::vector<Tap> backward_taps_;
    std::vector<std::size_t> forward_begin_;
    std::vector<Tap> forward_taps_;
    std::vector<double> weights_;
    std::vector<cdouble> ref_phase_; // (f, bin) exp(+j kz d0), zero where evanescent

    void *range_forward_plan_ = nullptr;
    void *range_inverse_plan_ = nullptr;
};

ImageCube reconstruct_omegak(const DataCube &data, const ApertureGrid &aperture, const FrequencyGrid &freqs,
                             const VolumeGrid &volume, StoltKernel kernel = {});

std::unique_ptr<OmegaKOperator> omegak_operator_pair(const ApertureGrid &aperture, const FrequencyGrid &freqs,
                                                     const VolumeGrid &volume,
                                                     std::optional<SamplingMask> mask = std::nullopt,
                                                     StoltKernel kernel = {});

} // namespace nfcs

#endif
