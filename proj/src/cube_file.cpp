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


#include "nfcs/cube_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace nfcs {

static_assert(std::endian::native == std::endian::little, "cube files assume a little-endian host");

namespace {

template <typename T>
void put(std::ostream &out, T v)
{
    out.write(reinterpret_cast<const char *>(&v), sizeof v);
}

template <typename T>
T get(std::istream &in, const char *what)
{
    T v{};
    if (!in.read(reinterpret_cast<char *>(&v), sizeof v))
        throw CubeFormatError(std::string("cube file: truncated while reading ") + what);
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char *what)
{
    if (v > std::numeric_limits<std::uint32_t>::max())
        throw CubeFormatError(std::string("cube file: ") + what + " exceeds 32 bits");
    return static_cast<std::uint32_t>(v);
}

template <typename Cube>
CubeFile make(const Cube &cube, CubeAxes axes, std::string metadata, CubeDtype dtype)
{
    return CubeFile{axes, dtype, cube.dims(), std::move(metadata), cube.values()};
}

} // namespace

CubeFile make_cube_file(const DataCube &cube, std::string metadata, CubeDtype dtype)
{
    return make(cube, CubeAxes::data, std::move(metadata), dtype);
}

CubeFile make_cube_file(const ImageCube &cube, std::string metadata, CubeDtype dtype)
{
    return make(cube, CubeAxes::image, std::move(metadata), dtype);
}

DataCube to_data_cube(const CubeFile &file)
{
    if (file.axes != CubeAxes::data)
        throw CubeFormatError("cube file: expected a data cube (f, y, x), found an image cube");
    return DataCube(file.dims, file.values);
}

ImageCube to_image_cube(const CubeFile &file)
{
    if (file.axes != CubeAxes::image)
        throw CubeFormatError("cube file: expected an image cube (z, y, x), found a data cube");
    return ImageCube(file.dims, file.values);
}

void write_cube(std::ostream &out, const CubeFile &file)
{
    const std::size_t count = file.dims[0] * file.dims[1] * file.dims[2];
    if (count != file.values.size())
        throw std::invalid_argument("cube file: value count does not match dims");
    out.write(kCubeMagic, 4);
    put<std::uint8_t>(out, kCubeVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(file.dtype));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(file.axes));
    for (auto d : file.dims)
        put<std::uint32_t>(out, checked_u32(d, "dimension"));
    put<std::uint32_t>(out, checked_u32(file.metadata.size(), "metadata length"));
    out.write(file.metadata.data(), static_cast<std::streamsize>(file.metadata.size()));

    if (file.dtype == CubeDtype::c128)
    {
        out.write(reinterpret_cast<const char *>(file.values.data()),
                  static_cast<std::streamsize>(count * sizeof(cdouble)));
    }
    else
    {
        std::vector<float> buf(2 * count);
        for (std::size_t i = 0; i < count; ++i)
        {
            buf[2 * i] = static_cast<float>(file.values[i].real());
            buf[2 * i + 1] = static_cast<float>(file.values[i].imag());
        }
        out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out)
        throw std::runtime_error("cube file: write failed");
}

CubeFile read_cube(std::istream &in)
{
    char magic[4];
    if (!in.read(magic, 4))
        throw CubeFormatError("cube file: truncated header");
    if (std::memcmp(magic, kCubeMagic, 4) != 0)
        throw CubeFormatError("cube file: bad magic (expected NFC1)");
    const auto version = get<std::uint8_t>(in, "version");
    if (version != kCubeVersion)
        throw CubeFormatError("cube file: unsupported version " + std::to_string(version));

    CubeFile f;
    const auto dtype = get<std::uint8_t>(in, "dtype");
    if (dtype > 1)
        throw CubeFormatError("cube file: unknown dtype " + std::to_string(dtype));
    f.dtype = static_cast<CubeDtype>(dtype);
    const auto axes = get<std::uint8_t>(in, "axis tag");
    if (axes > 1)
        throw CubeFormatError("cube file: unknown axis tag " + std::to_string(axes));
    f.axes = static_cast<CubeAxes>(axes);
    for (auto &d : f.dims)
        d = get<std::uint32_t>(in, "dims");
    const auto meta_len = get<std::uint32_t>(in, "metadata length");
    f.metadata.resize(meta_len);
    if (meta_len && !in.read(f.metadata.data(), meta_len))
        throw CubeFormatError("cube file: truncated metadata");

    const std::size_t count = f.dims[0] * f.dims[1] * f.dims[2];
    f.values.resize(count);
    if (f.dtype == CubeDtype::c128)
    {
        if (!in.read(reinterpret_cast<char *>(f.values.data()), static_cast<std::streamsize>(count * sizeof(cdouble))))
            throw CubeFormatError("cube file: truncated payload");
    }
    else
    {
        std::vector<float> buf(2 * count);
        if (!in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float))))
            throw CubeFormatError("cube file: truncated payload");
        for (std::size_t i = 0; i < count; ++i)
            f.values[i] = {buf[2 * i], buf[2 * i + 1]};
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw CubeFormatError("cube file: trailing bytes after payload");
    return f;
}

void write_cube_file(const std::filesystem::path &path, const CubeFile &file)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_cube(out, file);
}

CubeFile read_cube_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    try
    {
        return read_cube(in);
    }
    catch (const CubeFormatError &e)
    {
        throw CubeFormatError(path.string() + ": " + e.what());
    }
}

std::string grids_metadata(const CubeGrids &grids)
{
    std::string s;
    if (grids.aperture)
        s += to_text(*grids.aperture) + "\n";
    if (grids.frequencies)
        s += to_text(*grids.frequencies) + "\n";
    if (grids.volume)
        s += to_text(*grids.volume) + "\n";
    return s;
}

CubeGrids parse_grids_metadata(const std::string &metadata)
{
    CubeGrids g;
    std::istringstream in(metadata);
    std::string line;
    while (std::getline(in, line))
    {
        if (line.rfind("aperture ", 0) == 0)
            g.aperture = aperture_from_text(line);
        else if (line.rfind("frequency ", 0) == 0)
            g.frequencies = frequency_from_text(line);
        else if (line.rfind("volume ", 0) == 0)
            g.volume = volume_from_text(line);
    }
    return g;
}

} // namespace nfcs
