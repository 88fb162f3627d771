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

#include "nfcs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace nfcs {

std::string to_string(MaskScheme s)
{
    switch (s)
    {
    case MaskScheme::full: return "full";
    case MaskScheme::random: return "random";
    case MaskScheme::uniform_random: return "uniform_random";
    case MaskScheme::custom: return "custom";
    }
    return "custom";
}

MaskScheme mask_scheme_from_string(const std::string &s)
{
    if (s == "full" || s == "none")
        return MaskScheme::full;
    if (s == "random")
        return MaskScheme::random;
    if (s == "uniform_random")
        return MaskScheme::uniform_random;
    if (s == "custom")
        return MaskScheme::custom;
    throw std::invalid_argument("unknown mask scheme '" + s + "'");
}

std::size_t SamplingMask::count() const
{
    return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), std::uint8_t{1}));
}

SamplingMask mask_full(const ApertureGrid &aperture)
{
    SamplingMask m;
    m.ny = aperture.ny;
    m.nx = aperture.nx;
    m.selected.assign(aperture.size(), 1);
    return m;
}

namespace {

void check_ratio(double ratio)
{
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::invalid_argument("sampling ratio must lie in (0, 1]");
}

// Partial Fisher-Yates: the first `take` entries of `pool` become a uniform draw without replacement.
void draw(std::vector<std::size_t> &pool, std::size_t take, std::mt19937_64 &rng)
{
    for (std::size_t i = 0; i < take; ++i)
    {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
}

} // namespace

SamplingMask mask_random(const ApertureGrid &aperture, double ratio, std::uint64_t seed)
{
    check_ratio(ratio);
    SamplingMask m;
    m.ny = aperture.ny;
    m.nx = aperture.nx;
    m.scheme = MaskScheme::random;
    m.ratio = ratio;
    m.seed = seed;
    m.selected.assign(aperture.size(), 0);

    const std::size_t n = aperture.size();
    const auto take = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    draw(pool, take, rng);
    for (std::size_t i = 0; i < take; ++i)
        m.selected[pool[i]] = 1;
    return m;
}

SamplingMask mask_uniform_random(const ApertureGrid &aperture, double ratio, std::size_t group_y,
                                 std::size_t group_x, std::uint64_t seed)
{
    check_ratio(ratio);
    if (group_y == 0 || group_x == 0 || aperture.ny % group_y != 0 || aperture.nx % group_x != 0)
        throw std::invalid_argument("group shape must divide the aperture dimensions");
    const std::size_t group_size = group_y * group_x;
    const auto take = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(group_size)));
    if (take < 1)
        throw std::invalid_argument("ratio * group size must be >= 1");

    SamplingMask m;
    m.ny = aperture.ny;
    m.nx = aperture.nx;
    m.scheme = MaskScheme::uniform_random;
    m.ratio = ratio;
    m.group_y = group_y;
    m.group_x = group_x;
    m.seed = seed;
    m.selected.assign(aperture.size(), 0);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> pool(group_size);
    for (std::size_t gy = 0; gy < aperture.ny; gy += group_y)
    {
        for (std::size_t gx = 0; gx < aperture.nx; gx += group_x)
        {
            std::iota(pool.begin(), pool.end(), std::size_t{0});
            draw(pool, take, rng);
            for (std::size_t i = 0; i < take; ++i)
            {
                const std::size_t iy = gy + pool[i] / group_x;
                const std::size_t ix = gx + pool[i] % group_x;
                m.selected[iy * aperture.nx + ix] = 1;
            }
        }
    }
    return m;
}

void apply_mask_in_place(DataCube &data, const SamplingMask &mask)
{
    const auto &d = data.dims();
    if (d[1] != mask.ny || d[2] != mask.nx || mask.selected.size() != mask.ny * mask.nx)
        throw std::invalid_argument("apply_mask: mask dims do not match the data aperture dims");
    const std::size_t plane = data.slice_size();
    for (std::size_t f = 0; f < d[0]; ++f)
    {
        auto s = data.slice(f);
        for (std::size_t i = 0; i < plane; ++i)
            if (!mask.selected[i])
                s[i] = 0.0;
    }
}

DataCube apply_mask(const DataCube &data, const SamplingMask &mask)
{
    DataCube out = data;
    apply_mask_in_place(out, mask);
    return out;
}

void write_mask(std::ostream &out, const SamplingMask &mask)
{
    char ratio[40];
    std::snprintf(ratio, sizeof ratio, "%.17g", mask.ratio);
    out << "scheme " << to_string(mask.scheme) << '\n'
        << "ratio " << ratio << '\n'
        << "group " << mask.group_y << ' ' << mask.group_x << '\n'
        << "seed " << mask.seed << '\n'
        << "size " << mask.ny << ' ' << mask.nx << '\n';
    for (std::size_t iy = 0; iy < mask.ny; ++iy)
    {
        for (std::size_t ix = 0; ix < mask.nx; ++ix)
            out << (mask(iy, ix) ? '1' : '0');
        out << '\n';
    }
}

SamplingMask read_mask(std::istream &in)
{
    SamplingMask m;
    auto expect = [&](const char *key) {
        std::string k;
        if (!(in >> k) || k != key)
            throw std::invalid_argument(std::string("mask file: expected '") + key + "'");
    };
    std::string scheme;
    expect("scheme");
    in >> scheme;
    m.scheme = mask_scheme_from_string(scheme);
    expect("ratio");
    in >> m.ratio;
    expect("group");
    in >> m.group_y >> m.group_x;
    expect("seed");
    in >> m.seed;
    expect("size");
    in >> m.ny >> m.nx;
    if (!in || m.ny == 0 || m.nx == 0)
        throw std::invalid_argument("mask file: malformed header");
    m.selected.assign(m.ny * m.nx, 0);
    for (std::size_t iy = 0; iy < m.ny; ++iy)
    {
        std::string row;
        if (!(in >> row) || row.size() != m.nx)
            throw std::invalid_argument("mask file: row " + std::to_string(iy) + " has the wrong length");
        for (std::size_t ix = 0; ix < m.nx; ++ix)
        {
            if (row[ix] != '0' && row[ix] != '1')
                throw std::invalid_argument("mask file: rows must contain only 0 and 1");
            m.selected[iy * m.nx + ix] = row[ix] == '1';
        }
    }
    return m;
}

} // namespace nfcs
