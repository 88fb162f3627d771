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

#include "nfcs/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace nfcs {

double FrequencyGrid::frequency(std::size_t i) const
{
    if (n_f == 1)
        return center();
    return f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(n_f - 1);
}

std::vector<double> FrequencyGrid::wavenumbers() const
{
    std::vector<double> k(n_f);
    for (std::size_t i = 0; i < n_f; ++i)
        k[i] = wavenumber(i);
    return k;
}

double VolumeGrid::z(std::size_t iz) const
{
    if (nz == 1)
        return z_min;
    return z_min + (z_max - z_min) * static_cast<double>(iz) / static_cast<double>(nz - 1);
}

void validate(const ApertureGrid &g)
{
    if (g.nx < 2 || g.ny < 2)
        throw std::invalid_argument("aperture: element counts must be >= 2");
    if (!(g.pitch_x > 0.0) || !(g.pitch_y > 0.0) || !std::isfinite(g.pitch_x) || !std::isfinite(g.pitch_y))
        throw std::invalid_argument("aperture: pitch must be positive and finite");
    if (!std::isfinite(g.plane_z))
        throw std::invalid_argument("aperture: plane_z must be finite");
}

void validate(const FrequencyGrid &g)
{
    if (g.n_f == 0)
        throw std::invalid_argument("frequency: n_f must be >= 1");
    if (!(g.f_start > 0.0) || !std::isfinite(g.f_stop))
        throw std::invalid_argument("frequency: f_start must be positive");
    if (g.f_stop < g.f_start)
        throw std::invalid_argument("frequency: f_stop must be >= f_start");
    if (g.n_f > 1 && !(g.f_stop > g.f_start))
        throw std::invalid_argument("frequency: f_stop must exceed f_start when n_f > 1");
}

void validate(const VolumeGrid &g, const ApertureGrid &aperture)
{
    if (g.nz == 0 || g.ny == 0 || g.nx == 0)
        throw std::invalid_argument("volume: counts must be >= 1");
    if (!std::isfinite(g.z_min) || !std::isfinite(g.z_max))
        throw std::invalid_argument("volume: z range must be finite");
    if (g.nz > 1 && !(g.z_min < g.z_max))
        throw std::invalid_argument("volume: z_min must be < z_max");
    if (g.nz == 1 && g.z_max < g.z_min)
        throw std::invalid_argument("volume: z_max must be >= z_min");
    const double lo = g.z_min - aperture.plane_z;
    const double hi = g.z(g.nz - 1) - aperture.plane_z;
    if (!(lo * hi > 0.0))
        throw std::invalid_argument("volume: range bins intersect the array plane");
    if (g.nx != aperture.nx || g.ny != aperture.ny)
        throw std::invalid_argument("volume: transverse counts must match the aperture");
    if (g.pitch_x != aperture.pitch_x || g.pitch_y != aperture.pitch_y)
        throw std::invalid_argument("volume: transverse pitch must match the aperture");
}

ApertureGrid build_aperture_grid(std::size_t nx, std::size_t ny, double pitch_x, double pitch_y, double plane_z)
{
    ApertureGrid g{nx, ny, pitch_x, pitch_y, plane_z};
    validate(g);
    return g;
}

ApertureGrid build_aperture_grid(std::size_t nx, std::size_t ny, double pitch, double plane_z)
{
    return build_aperture_grid(nx, ny, pitch, pitch, plane_z);
}

FrequencyGrid build_frequency_grid(double f_start, double f_stop, std::size_t n_f)
{
    FrequencyGrid g{f_start, f_stop, n_f};
    validate(g);
    return g;
}

VolumeGrid build_volume_grid(std::size_t nz, std::size_t ny, std::size_t nx, double z_min, double z_max,
                             const ApertureGrid &aperture)
{
    VolumeGrid g{nz, ny, nx, z_min, z_max, aperture.pitch_x, aperture.pitch_y};
    validate(g, aperture);
    return g;
}

// ------------------------------------------------------------------------------------------------

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::map<std::string, std::string> parse_fields(const std::string &text, const std::string &tag)
{
    std::istringstream in(text);
    std::string head;
    in >> head;
    if (head != tag)
        throw std::invalid_argument("grid text: expected '" + tag + "', got '" + head + "'");
    std::map<std::string, std::string> out;
    std::string tok;
    while (in >> tok)
    {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("grid text: malformed field '" + tok + "'");
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

const std::string &field(const std::map<std::string, std::string> &m, const std::string &key)
{
    auto it = m.find(key);
    if (it == m.end())
        throw std::invalid_argument("grid text: missing field '" + key + "'");
    return it->second;
}

double as_double(const std::map<std::string, std::string> &m, const std::string &key)
{
    const std::string &s = field(m, key);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("grid text: bad number for '" + key + "'");
    return v;
}

std::size_t as_count(const std::map<std::string, std::string> &m, const std::string &key)
{
    const std::string &s = field(m, key);
    char *end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("grid text: bad count for '" + key + "'");
    return static_cast<std::size_t>(v);
}

} // namespace

std::string to_text(const ApertureGrid &g)
{
    return "aperture nx=" + std::to_string(g.nx) + " ny=" + std::to_string(g.ny) + " pitch_x=" + fmt_double(g.pitch_x) +
           " pitch_y=" + fmt_double(g.pitch_y) + " plane_z=" + fmt_double(g.plane_z);
}

std::string to_text(const FrequencyGrid &g)
{
    return "frequency f_start=" + fmt_double(g.f_start) + " f_stop=" + fmt_double(g.f_stop) +
           " n_f=" + std::to_string(g.n_f);
}

std::string to_text(const VolumeGrid &g)
{
    return "volume nz=" + std::to_string(g.nz) + " ny=" + std::to_string(g.ny) + " nx=" + std::to_string(g.nx) +
           " z_min=" + fmt_double(g.z_min) + " z_max=" + fmt_double(g.z_max) + " pitch_x=" + fmt_double(g.pitch_x) +
           " pitch_y=" + fmt_double(g.pitch_y);
}

ApertureGrid aperture_from_text(const std::string &text)
{
    const auto m = parse_fields(text, "aperture");
    return {as_count(m, "nx"), as_count(m, "ny"), as_double(m, "pitch_x"), as_double(m, "pitch_y"),
            as_double(m, "plane_z")};
}

FrequencyGrid frequency_from_text(const std::string &text)
{
    const auto m = parse_fields(text, "frequency");
    return {as_double(m, "f_start"), as_double(m, "f_stop"), as_count(m, "n_f")};
}

VolumeGrid volume_from_text(const std::string &text)
{
    const auto m = parse_fields(text, "volume");
    return {as_count(m, "nz"),     as_count(m, "ny"),      as_count(m, "nx"),     as_double(m, "z_min"),
            as_double(m, "z_max"), as_double(m, "pitch_x"), as_double(m, "pitch_y")};
}

// ------------------------------------------------------------------------------------------------

cdouble dot(std::span<const cdouble> a, std::span<const cdouble> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("dot: size mismatch");
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

double norm2_squared(std::span<const cdouble> a)
{
    double s = 0.0;
    for (const auto &v : a)
        s += std::norm(v);
    return s;
}

bool all_finite(std::span<const cdouble> a)
{
    for (const auto &v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

} // namespace nfcs
