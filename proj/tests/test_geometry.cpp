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

#include "nfcs/geometry.hpp"

#include <cmath>
#include <stdexcept>

using namespace nfcs;
using Catch::Approx;

TEST_CASE("aperture coordinates are centered")
{
    const auto a = build_aperture_grid(64, 64, 0.003, 0.0);
    CHECK(a.x(0) == Approx(-0.0945).margin(1e-15));
    CHECK(a.x(63) == Approx(0.0945).margin(1e-15));
    CHECK(a.y(0) == Approx(-0.0945).margin(1e-15));
    CHECK(a.size() == 4096);

    const auto two = build_aperture_grid(2, 2, 1.0, 0.0);
    CHECK(two.x(0) == -0.5);
    CHECK(two.x(1) == 0.5);

    const auto odd = build_aperture_grid(5, 3, 0.01, 0.0);
    CHECK(odd.x(2) == 0.0);
    CHECK(odd.y(1) == 0.0);
}

TEST_CASE("aperture coordinates are symmetric")
{
    for (std::size_t n : {2u, 3u, 16u, 17u, 64u})
    {
        const auto a = build_aperture_grid(n, n, 0.003, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(a.x(i) == -a.x(n - 1 - i));
    }
}

TEST_CASE("aperture validation")
{
    CHECK_THROWS_AS(build_aperture_grid(1, 4, 0.003, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_aperture_grid(4, 4, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_aperture_grid(4, 4, -0.003, 0.0), std::invalid_argument);
    CHECK_NOTHROW(build_aperture_grid(4, 8, 0.003, 0.002, 0.1));
}

TEST_CASE("frequency grid endpoints and step")
{
    const auto f = build_frequency_grid(72e9, 76e9, 64);
    CHECK(f.frequency(0) == 72e9);
    CHECK(f.frequency(63) == 76e9);
    CHECK(f.step() == Approx(63.492063e6).epsilon(1e-7));
    CHECK(f.center() == 74e9);
    CHECK(f.wavenumber(0) == Approx(2.0 * kPi * 72e9 / kSpeedOfLight).epsilon(1e-15));
    CHECK(f.wavenumbers().size() == 64);
}

TEST_CASE("single frequency uses the band center")
{
    const auto f = build_frequency_grid(72e9, 76e9, 1);
    CHECK(f.frequency(0) == 74e9);
    CHECK(f.step() == 0.0);
    CHECK_NOTHROW(build_frequency_grid(74e9, 74e9, 1));
}

TEST_CASE("frequency validation")
{
    CHECK_THROWS_AS(build_frequency_grid(72e9, 76e9, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_frequency_grid(0.0, 76e9, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_frequency_grid(76e9, 72e9, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_frequency_grid(74e9, 74e9, 4), std::invalid_argument);
}

TEST_CASE("volume grid follows the aperture")
{
    const auto a = build_aperture_grid(32, 32, 0.003, 0.0);
    const auto v = build_volume_grid(16, 32, 32, 0.3, 0.6, a);
    CHECK(v.size() == 16 * 32 * 32);
    CHECK(v.z(0) == 0.3);
    CHECK(v.z(15) == Approx(0.6).epsilon(1e-15));
    CHECK(v.dz() == Approx(0.02).epsilon(1e-14));
    CHECK(v.pitch_x == a.pitch_x);
    CHECK(v.x(0) == a.x(0));
    CHECK(v.y(31) == a.y(31));

    const auto one = build_volume_grid(1, 32, 32, 0.4, 0.4, a);
    CHECK(one.z(0) == 0.4);
    CHECK(one.dz() == 0.0);
}

TEST_CASE("volume validation")
{
    const auto a = build_aperture_grid(8, 8, 0.003, 0.0);
    CHECK_THROWS_AS(build_volume_grid(0, 8, 8, 0.3, 0.6, a), std::invalid_argument);
    CHECK_THROWS_AS(build_volume_grid(4, 8, 8, 0.6, 0.3, a), std::invalid_argument);
    CHECK_THROWS_AS(build_volume_grid(4, 8, 8, -0.1, 0.3, a), std::invalid_argument);
    CHECK_THROWS_AS(build_volume_grid(4, 8, 8, 0.0, 0.3, a), std::invalid_argument);
    CHECK_NOTHROW(build_volume_grid(4, 8, 8, -0.6, -0.3, a));
}

TEST_CASE("grid text round trip is exact")
{
    const auto a = build_aperture_grid(48, 40, 0.0031, 0.0027, 0.0125);
    const auto f = build_frequency_grid(72.1e9, 75.9e9, 37);
    const auto v = build_volume_grid(13, 40, 48, 0.3 / 7.0, 0.61, a);
    CHECK(aperture_from_text(to_text(a)) == a);
    CHECK(frequency_from_text(to_text(f)) == f);
    CHECK(volume_from_text(to_text(v)) == v);
}

TEST_CASE("cube storage and reductions")
{
    ImageCube c({2, 3, 4});
    CHECK(c.size() == 24);
    CHECK(c.slice_size() == 12);
    c(1, 2, 3) = {3.0, 4.0};
    CHECK(c[23] == cdouble(3.0, 4.0));
    CHECK(norm2_squared(c.values()) == 25.0);
    CHECK(dot(c.values(), c.values()) == cdouble(25.0, 0.0));
    CHECK(all_finite(c.values()));
    c[0] = {std::nan(""), 0.0};
    CHECK_FALSE(all_finite(c.values()));
    CHECK_THROWS_AS(ImageCube({2, 2, 2}, std::vector<cdouble>(7)), std::invalid_argument);
}
