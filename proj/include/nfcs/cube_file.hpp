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


#ifndef NFCS_CUBE_FILE_HPP
#define NFCS_CUBE_FILE_HPP

#include "nfcs/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfcs {

// Binary cube container, all integers and floats little-endian:
//
//   "NFC1" | version u8 = 1 | dtype u8 | axes u8 | dims 3 x u32 | meta_len u32 | meta bytes | payload
//
// dtype 0 stores each sample as two float32 (re, im), dtype 1 as two float64. The payload is
// row-major with the last axis fastest. The metadata block is free text; the CLI writes one grid
// description per line (see to_text in geometry.hpp).

enum class CubeDtype : std::uint8_t
{
    c64 = 0,
    c128 = 1,
};

enum class CubeAxes : std::uint8_t
{
    data = 0,  // (f, y, x)
    image = 1, // (z, y, x)
};

inline constexpr char kCubeMagic[4] = {'N', 'F', 'C', '1'};
inline constexpr std::uint8_t kCubeVersion = 1;

class CubeFormatError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct CubeFile
{
    CubeAxes axes = CubeAxes::data;
    CubeDtype dtype = CubeDtype::c128;
    Dims3 dims{0, 0, 0};
    std::string metadata;
    std::vector<cdouble> values;

    bool operator==(const CubeFile &) const = default;
};

CubeFile make_cube_file(const DataCube &cube, std::string metadata = {}, CubeDtype dtype = CubeDtype::c128);
CubeFile make_cube_file(const ImageCube &cube, std::string metadata = {}, CubeDtype dtype = CubeDtype::c128);

/// Throw CubeFormatError if the axis tag does not match.
DataCube to_data_cube(const CubeFile &file);
ImageCube to_image_cube(const CubeFile &file);

void write_cube(std::ostream &out, const CubeFile &file);
CubeFile read_cube(std::istream &in);

void write_cube_file(const std::filesystem::path &path, const CubeFile &file);
CubeFile read_cube_file(const std::filesystem::path &path);

/// Grids recorded in a metadata block; absent lines stay empty.
struct CubeGrids
{
    std::optional<ApertureGrid> aperture;
    std::optional<FrequencyGrid> frequencies;
    std::optional<VolumeGrid> volume;
};

std::string grids_metadata(const CubeGrids &grids);
CubeGrids parse_grids_metadata(const std::string &metadata);

} // namespace nfcs

#endif
