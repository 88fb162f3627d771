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

#include "nfcs/sensing_operator.hpp"

#include <cmath>
#include <random>

namespace nfcs {

void SensingOperator::set_mask(std::optional<SamplingMask> mask)
{
    if (mask)
    {
        const Dims3 d = data_dims();
        if (mask->ny != d[1] || mask->nx != d[2])
            throw std::invalid_argument("sampling mask dims do not match the aperture");
    }
    mask_ = std::move(mask);
}

void SensingOperator::mask_data(DataCube &data) const
{
    if (mask_)
        apply_mask_in_place(data, *mask_);
}

namespace {
std::vector<cdouble> gaussian_values(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cdouble> v(n);
    for (auto &x : v)
    {
        const double re = normal(rng);
        x = {re, normal(rng)};
    }
    return v;
}
} // namespace

ImageCube random_image(Dims3 dims, std::uint64_t seed)
{
    return {dims, gaussian_values(dims[0] * dims[1] * dims[2], seed)};
}

DataCube random_data(Dims3 dims, std::uint64_t seed)
{
    return {dims, gaussian_values(dims[0] * dims[1] * dims[2], seed)};
}

double adjoint_dot_test(const SensingOperator &op, std::uint64_t seed)
{
    const ImageCube x = random_image(op.image_dims(), seed);
    const DataCube y = random_data(op.data_dims(), seed ^ 0x9e3779b97f4a7c15ULL);
    const DataCube ax = op.forward(x);
    const ImageCube aty = op.backward(y);
    const cdouble lhs = dot(ax.values(), y.values());
    const cdouble rhs = dot(x.values(), aty.values());
    const double scale = std::sqrt(norm2_squared(ax.values()) * norm2_squared(y.values()));
    if (scale == 0.0)
        return std::abs(lhs - rhs);
    return std::abs(lhs - rhs) / scale;
}

} // namespace nfcs
