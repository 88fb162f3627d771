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

#include "catch_amalgamated.hpp"

#include "nfcs/sampling.hpp"

#include <random>
#include <sstream>

using namespace nfcs;

namespace {

DataCube random_cube(Dims3 dims, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    DataCube c(dims);
    for (auto &v : c.values())
        v = {g(rng), g(rng)};
    return c;
}

} // namespace

TEST_CASE("random mask counts")
{
    const auto ap = build_aperture_grid(64, 64, 0.003, 0.0);
    CHECK(mask_random(ap, 0.125, 1).count() == 512);
    CHECK(mask_random(ap, 1.0, 1).count() == 4096);
    CHECK(mask_random(ap, 0.3, 4).count() == 1229);
    CHECK(mask_random(ap, 0.125, 7) == mask_random(ap, 0.125, 7));
    CHECK_FALSE(mask_random(ap, 0.125, 7).selected == mask_random(ap, 0.125, 8).selected);
    CHECK_THROWS_AS(mask_random(ap, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(mask_random(ap, 1.5, 1), std::invalid_argument);
}

TEST_CASE("uniform-random mask selects a fixed count per group")
{
    const auto ap = build_aperture_grid(64, 64, 0.003, 0.0);
    const auto m = mask_uniform_random(ap, 0.125, 4, 2, 3);
    CHECK(m.count() == 512);
    for (std::size_t gy = 0; gy < 64; gy += 4)
        for (std::size_t gx = 0; gx < 64; gx += 2)
        {
            std::size_t n = 0;
            for (std::size_t y = gy; y < gy + 4; ++y)
                for (std::size_t x = gx; x < gx + 2; ++x)
                    n += m(y, x);
            CHECK(n == 1);
        }
    CHECK(mask_uniform_random(ap, 1.0, 4, 2, 3).count() == 4096);
    CHECK(mask_uniform_random(ap, 0.5, 4, 2, 3).count() == 2048);
    CHECK(mask_uniform_random(ap, 0.125, 4, 2, 3) == m);
}

TEST_CASE("uniform-random mask preconditions")
{
    const auto ap = build_aperture_grid(30, 30, 0.003, 0.0);
    CHECK_THROWS_AS(mask_uniform_random(ap, 0.125, 4, 2, 1), std::invalid_argument);
    const auto ok = build_aperture_grid(32, 32, 0.003, 0.0);
    CHECK_THROWS_AS(mask_uniform_random(ok, 0.05, 4, 2, 1), std::invalid_argument);
}

TEST_CASE("mask application is an orthogonal projection")
{
    const auto ap = build_aperture_grid(16, 8, 0.003, 0.0);
    const auto m = mask_random(ap, 0.4, 2);
    const auto d = random_cube({3, 8, 16}, 1);
    const auto once = apply_mask(d, m);
    CHECK(apply_mask(once, m) == once);
    CHECK(apply_mask(d, mask_full(ap)) == d);

    double kept = 0.0;
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t y = 0; y < 8; ++y)
            for (std::size_t x = 0; x < 16; ++x)
            {
                if (m(y, x))
                    kept += std::norm(d(f, y, x));
                else
                    CHECK(once(f, y, x) == cdouble(0.0));
            }
    CHECK(norm2_squared(once.values()) == Catch::Approx(kept).epsilon(1e-15));
    CHECK(norm2_squared(once.values()) <= norm2_squared(d.values()));

    const auto e = random_cube({3, 8, 16}, 2);
    const cdouble lhs = dot(apply_mask(d, m).values(), e.values());
    const cdouble rhs = dot(d.values(), apply_mask(e, m).values());
    CHECK(std::abs(lhs - rhs) < 1e-12);

    const auto other = build_aperture_grid(8, 8, 0.003, 0.0);
    CHECK_THROWS_AS(apply_mask(d, mask_full(other)), std::invalid_argument);
}

TEST_CASE("mask text round trip")
{
    const auto ap = build_aperture_grid(16, 8, 0.003, 0.0);
    for (const auto &m : {mask_random(ap, 0.3, 5), mask_uniform_random(ap, 0.25, 4, 2, 6), mask_full(ap)})
    {
        std::stringstream ss;
        write_mask(ss, m);
        CHECK(read_mask(ss) == m);
    }
    std::istringstream bad("scheme random\n");
    CHECK_THROWS_AS(read_mask(bad), std::invalid_argument);
}

TEST_CASE("scheme names")
{
    for (auto s : {MaskScheme::full, MaskScheme::random, MaskScheme::uniform_random, MaskScheme::custom})
        CHECK(mask_scheme_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(mask_scheme_from_string("checkerboard"), std::invalid_argument);
}
