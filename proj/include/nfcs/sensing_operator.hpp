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

#ifndef NFCS_SENSING_OPERATOR_HPP
#define NFCS_SENSING_OPERATOR_HPP

#include "nfcs/geometry.hpp"
#include "nfcs/sampling.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace nfcs {

/// Matrix-free linear map between an image cube (z, y, x) and a data cube (f, y, x).
/// `forward` plays the role of the sensing matrix, `backward` of its (approximate) adjoint.
/// An attached sampling mask zeroes unselected aperture positions on the data side of both maps.
class SensingOperator
{
  public:
    virtual ~SensingOperator() = default;

    virtual DataCube forward(const ImageCube &image) const = 0;
    virtual ImageCube backward(const DataCube &data) const = 0;

    virtual Dims3 image_dims() const = 0;
    virtual Dims3 data_dims() const = 0;
    virtual std::string name() const = 0;

    /// True when `backward` is only an imaging operator and not the conjugate transpose of
    /// `forward`; the solver refuses such pairs.
    virtual bool paper_faithful() const { return false; }

    void set_mask(std::optional<SamplingMask> mask);
    const std::optional<SamplingMask> &mask() const { return mask_; }

  protected:
    void mask_data(DataCube &data) const;

  private:
    std::optional<SamplingMask> mask_;
};

/// |<Ax, y> - <x, A^H y>| / (||Ax|| ||y||) for seeded complex Gaussian x, y.
double adjoint_dot_test(const SensingOperator &op, std::uint64_t seed);

ImageCube random_image(Dims3 dims, std::uint64_t seed);
DataCube random_data(Dims3 dims, std::uint64_t seed);

} // namespace nfcs

#endif
