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

#ifndef NFCS_HOLO_OPERATOR_HPP
#define NFCS_HOLO_OPERATOR_HPP

#include "nfcs/sensing_operator.hpp"
#include "nfcs/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nfcs {

enum class KernelMode
{
    /// Backward weighted by J, forward by 1/J. Reproduces the imaging equations as written;
    /// the two maps are not conjugate transposes of each other.
    paper_faithful,
    /// Forward weighted by 1/J; backward is its exact conjugate transpose.
    adjoint_exact,
};

std::string to_string(KernelMode m);
KernelMode kernel_mode_from_string(const std::string &s);

/// Interpolation-free holographic operator pair.
///
/// backward: G_z = sum_k IFFT2( FFT2(S_k) * exp(+j kz |z - Z|) * W_b(k, kx, ky) )
/// forward:  S_k = sum_z IFFT2( FFT2(G_z) * exp(-j kz |z - Z|) * W_f(k, kx, ky) )
///
/// Evanescent bins are masked before weighting. The range window of the volume is arbitrary;
/// nothing ties it to the FFT-unambiguous range. Both maps sum in the spectral domain, so each
/// output slice costs a single 2-D inverse transform. Because range bins are uniformly spaced, the
/// per-bin phase over z is a geometric sequence: backward advances it by repeated multiplication
/// and forward evaluates the z sum by Horner's rule. Each output element is accumulated in a fixed
/// order regardless of the thread count.
class HoloOperator : public SensingOperator
{
  public:
    HoloOperator(const ApertureGrid &aperture, const FrequencyGrid &freqs, const VolumeGrid &volume,
                 KernelMode mode = KernelMode::adjoint_exact, std::optional<SamplingMask> mask = std::nullopt);

    DataCube forward(const ImageCube &image) const override;
    ImageCube backward(const DataCube &data) const override;

    DataCube project(const ImageCube &image) const { return forward(image); }
    ImageCube backproject(const DataCube &data) const { return backward(data); }

    Dims3 image_dims() const override { return nfcs::image_dims(volume_); }
    Dims3 data_dims() const override { return nfcs::data_dims(plan_.frequencies(), plan_.aperture()); }
    std::string name() const override;
    bool paper_faithful() const override { return mode_ == KernelMode::paper_faithful; }

    KernelMode mode() const { return mode_; }
    const SpectralPlan &plan() const { return plan_; }
    const VolumeGrid &volume() const { return volume_; }

  private:
    SpectralPlan plan_;
    VolumeGrid volume_;
    KernelMode mode_;
    std::vector<cdouble> backward_;  // (f, bin) W_b exp(+j kz d_first), zero where evanescent
    std::vector<cdouble> forward_;   // (f, bin) W_f exp(-j kz d_first), zero where evanescent
    std::vector<cdouble> step_;      // (f, bin) exp(+j kz (d_{z+1} - d_z)), d = |z - Z|
};

} // namespace nfcs

#endif
