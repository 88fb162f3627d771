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

#ifndef NFCS_SAMPLING_HPP
#define NFCS_SAMPLING_HPP

#include "nfcs/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nfcs {

enum class MaskScheme
{
    full,
    random,
    uniform_random,
    custom,
};

std::string to_string(MaskScheme s);
MaskScheme mask_scheme_from_string(const std::string &s);

/// Selection over aperture positions (ny x nx, row-major). Unselected positions are
/// represented by zero-filled samples; the operators keep their full FFT dims.
struct SamplingMask
{
    std::size_t ny = 0;
    std::size_t nx = 0;
    std::vector<std::uint8_t> selected;
    MaskScheme scheme = MaskScheme::full;
    double ratio = 1.0;
    std::size_t group_y = 1;
    std::size_t group_x = 1;
    std::uint64_t seed = 0;

    bool operator()(std::size_t iy, std::size_t ix) const { return selected[iy * nx + ix] != 0; }
    std::size_t count() const;
    bool operator==(const SamplingMask &) const = default;
};

SamplingMask mask_full(const ApertureGrid &aperture);

/// Exactly round(ratio * N) positions drawn uniformly without replacement.
SamplingMask mask_random(const ApertureGrid &aperture, double ratio, std::uint64_t seed);

/// The aperture is tiled by disjoint group_y x group_x blocks; round(ratio * group size)
/// positions are drawn uniformly inside every block.
SamplingMask mask_uniform_random(const ApertureGrid &aperture, double ratio, std::size_t group_y,
                                 std::size_t group_x, std::uint64_t seed);

/// Zeroes unselected aperture columns across every frequency.
DataCube apply_mask(const DataCube &data, const SamplingMask &mask);
void apply_mask_in_place(DataCube &data, const SamplingMask &mask);

void write_mask(std::ostream &out, const SamplingMask &mask);
SamplingMask read_mask(std::istream &in);

} // namespace nfcs

#endif
