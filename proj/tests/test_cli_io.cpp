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

#include "nfcs/commands.hpp"
#include "nfcs/cube_file.hpp"
#include "nfcs/run_config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace nfcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("nfcs_cli_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path &p, const std::string &text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int run_cli(const std::string &args, const fs::path &log)
{
    const std::string cmd = std::string("\"") + NFCS_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tiny_config(const fs::path &out_dir)
{
    return "[aperture]\nnx = 16\nny = 16\n[frequency]\nn_f = 8\n[volume]\nnz = 4\nz_min = 0.3\nz_max = 0.45\n"
           "[scene]\nrandom_points = 3\nsnr_db = 20\nseed = 4\n[mask]\nscheme = uniform_random\nratio = 0.5\n"
           "[solver]\nmax_outer = 5\n[output]\ndir = " +
           out_dir.string() + "\n";
}

} // namespace

TEST_CASE("cube files round trip losslessly")
{
    const auto img = nfcs::random_image({3, 4, 5}, 1);
    std::stringstream ss;
    write_cube(ss, make_cube_file(img, "volume line\n"));
    const auto back = read_cube(ss);
    CHECK(back.axes == CubeAxes::image);
    CHECK(back.metadata == "volume line\n");
    CHECK(to_image_cube(back) == img);
    CHECK_THROWS_AS(to_data_cube(back), CubeFormatError);

    const auto data = nfcs::random_data({2, 3, 4}, 2);
    std::stringstream s64;
    write_cube(s64, make_cube_file(data, {}, CubeDtype::c64));
    const std::string bytes = s64.str();
    const auto narrow = read_cube(s64);
    CHECK(narrow.dtype == CubeDtype::c64);
    for (std::size_t i = 0; i < data.size(); ++i)
    {
        CHECK(narrow.values[i].real() == static_cast<double>(static_cast<float>(data[i].real())));
        CHECK(narrow.values[i].imag() == static_cast<double>(static_cast<float>(data[i].imag())));
    }
    std::stringstream again;
    write_cube(again, narrow);
    CHECK(again.str() == bytes);

    const auto dir = scratch_dir("cube");
    const auto file = make_cube_file(img, "m");
    write_cube_file(dir / "a.nfc", file);
    CHECK(read_cube_file(dir / "a.nfc") == file);
}

TEST_CASE("malformed cube files are rejected")
{
    std::stringstream ss;
    write_cube(ss, make_cube_file(nfcs::random_image({2, 2, 2}, 3)));
    const std::string good = ss.str();

    auto reject = [](std::string bytes) {
        std::istringstream in(bytes);
        CHECK_THROWS_AS(read_cube(in), CubeFormatError);
    };
    std::string bad = good;
    bad[0] = 'X';
    reject(bad);
    bad = good;
    bad[4] = 2;
    reject(bad);
    bad = good;
    bad[5] = 7;
    reject(bad);
    bad = good;
    bad[6] = 9;
    reject(bad);
    reject(good.substr(0, good.size() - 1));
    reject(good + "x");
    reject("");
}

TEST_CASE("grid metadata round trip")
{
    CubeGrids g;
    g.aperture = build_aperture_grid(8, 6, 0.003, 0.0);
    g.frequencies = build_frequency_grid(72e9, 76e9, 3);
    const auto m = parse_grids_metadata(grids_metadata(g));
    CHECK(m.aperture == g.aperture);
    CHECK(m.frequencies == g.frequencies);
    CHECK_FALSE(m.volume.has_value());
}

TEST_CASE("config parsing reports the offending line")
{
    RunConfig c;
    apply_config_text(c, "# comment\n[aperture]\nnx = 48\n\n[volume]\nnz = 8   # inline\n", "t.cfg");
    CHECK(c.aperture.nx == 48);
    CHECK(c.volume.nz == 8);

    auto message = [](const std::string &text) {
        RunConfig r;
        try
        {
            apply_config_text(r, text, "t.cfg");
        }
        catch (const ConfigError &e)
        {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[aperture]\nnx = 8\nbogus = 1\n").rfind("t.cfg:3:", 0) == 0);
    CHECK(message("[nowhere]\n").rfind("t.cfg:1:", 0) == 0);
    CHECK(message("[aperture]\nnx = eight\n").rfind("t.cfg:2:", 0) == 0);
    CHECK(message("nx = 8\n").rfind("t.cfg:1:", 0) == 0);
    CHECK(message("[mask]\nscheme = checkerboard\n").rfind("t.cfg:2:", 0) == 0);
    CHECK(message("[solver]\nlambda1 = auto\n").empty());
}

TEST_CASE("scene points accumulate and can be cleared")
{
    RunConfig c;
    apply_config_text(c, "[scene]\npoint = 0 0 0.4\npoint = 0.003 0 0.5 0 1\n", "a");
    REQUIRE(c.scene.points.size() == 2);
    CHECK(c.scene.points[1].amplitude == cdouble(0.0, 1.0));
    apply_config_text(c, "[scene]\nclear_points = true\npoint = 0 0 0.45\n", "b");
    CHECK(c.scene.points.size() == 1);
}

TEST_CASE("presets and effective config round trip")
{
    const auto names = preset_names();
    CHECK(std::find(names.begin(), names.end(), "fig3-psf") != names.end());
    CHECK_THROWS_AS(preset_text("nope"), ConfigError);
    for (const auto &name : names)
    {
        RunConfig c;
        apply_config_text(c, preset_text(name), name);
        CHECK_NOTHROW(validate(c));
        const std::string text = to_text(c);
        RunConfig again;
        apply_config_text(again, text, "effective");
        CHECK(to_text(again) == text);
    }

    RunConfig psf;
    apply_config_text(psf, preset_text("fig3-psf"), "fig3-psf");
    CHECK(psf.mask.ratio == 0.125);
    CHECK(psf.psf.trials >= 50);
}

TEST_CASE("command-line overrides apply last")
{
    const auto dir = scratch_dir("override");
    write_text(dir / "run.cfg", "[scene]\nseed = 3\n[mask]\nseed = 3\n[solver]\nmethod = holo\n");
    CliOptions o;
    o.config = dir / "run.cfg";
    o.seed = 42;
    o.method = "omegak";
    const auto c = load_run_config(o);
    CHECK(c.scene.seed == 42);
    CHECK(c.mask.seed == 42);
    CHECK(c.solver.method == "omegak");
    o.method = "matrix";
    CHECK_THROWS_AS(load_run_config(o), ConfigError);
}

TEST_CASE("relative paths resolve against the config file")
{
    const auto dir = scratch_dir("paths");
    write_text(dir / "scene.txt", "0 0 0.4 1 0\n");
    write_text(dir / "run.cfg", "[scene]\nfile = scene.txt\n[output]\ndir = results\n");
    RunConfig c;
    apply_config_file(c, dir / "run.cfg");
    CHECK(fs::equivalent(c.scene.file, dir / "scene.txt"));
    CHECK(c.output.dir.is_absolute());
    CHECK_NOTHROW(validate(c));

    write_text(dir / "missing.cfg", "[scene]\nfile = nowhere.txt\n");
    RunConfig m;
    apply_config_file(m, dir / "missing.cfg");
    CHECK_THROWS_AS(validate(m), ConfigError);
}

TEST_CASE("simulate is deterministic")
{
    const auto dir = scratch_dir("determinism");
    write_text(dir / "a.cfg", tiny_config(dir / "a"));
    write_text(dir / "b.cfg", tiny_config(dir / "b"));
    REQUIRE(run_cli("simulate --config \"" + (dir / "a.cfg").string() + "\"", dir / "a.log") == 0);
    REQUIRE(run_cli("simulate --config \"" + (dir / "b.cfg").string() + "\"", dir / "b.log") == 0);
    CHECK(slurp(dir / "a" / "data.nfc") == slurp(dir / "b" / "data.nfc"));
    CHECK(slurp(dir / "a" / "mask.txt") == slurp(dir / "b" / "mask.txt"));
    CHECK_FALSE(slurp(dir / "a" / "data.nfc").empty());

    REQUIRE(run_cli("simulate --seed 9 --config \"" + (dir / "b.cfg").string() + "\"", dir / "c.log") == 0);
    CHECK(slurp(dir / "a" / "data.nfc") != slurp(dir / "b" / "data.nfc"));
}

TEST_CASE("pipeline commands write their artifacts")
{
    const auto dir = scratch_dir("pipeline");
    write_text(dir / "run.cfg", tiny_config(dir / "out"));
    const std::string cfg = " --config \"" + (dir / "run.cfg").string() + "\"";
    REQUIRE(run_cli("simulate" + cfg, dir / "sim.log") == 0);
    CHECK(run_cli("reconstruct" + cfg, dir / "rec.log") == 0);
    CHECK(run_cli("reconstruct --method omegak" + cfg, dir / "rec2.log") == 0);
    CHECK(run_cli("solve" + cfg, dir / "solve.log") == 0);
    CHECK(run_cli("export" + cfg, dir / "export.log") == 0);
    CHECK(fs::exists(dir / "out" / "image.nfc"));
    CHECK(fs::exists(dir / "out" / "solve_holo.csv"));
    CHECK(fs::exists(dir / "out" / "effective.cfg"));

    const auto image = read_cube_file(dir / "out" / "image.nfc");
    CHECK(image.axes == CubeAxes::image);
    CHECK(image.dims == Dims3{4, 16, 16});
    CHECK(parse_grids_metadata(image.metadata).volume.has_value());

    CHECK(run_cli("simulate --config \"" + (dir / "out" / "effective.cfg").string() + "\"", dir / "re.log") == 0);
}

TEST_CASE("exit codes")
{
    const auto dir = scratch_dir("exit");
    write_text(dir / "bad_key.cfg", "[aperture]\nnx = 16\nwidth = 3\n");
    CHECK(run_cli("simulate --config \"" + (dir / "bad_key.cfg").string() + "\"", dir / "1.log") == kExitConfig);
    CHECK(slurp(dir / "1.log").find("bad_key.cfg:3:") != std::string::npos);

    write_text(dir / "no_scene.cfg", "[scene]\nfile = absent.txt\n");
    CHECK(run_cli("simulate --config \"" + (dir / "no_scene.cfg").string() + "\"", dir / "2.log") == kExitConfig);

    CHECK(run_cli("simulate --preset nope", dir / "3.log") == kExitConfig);
    CHECK(run_cli("frobnicate", dir / "4.log") == kExitConfig);

    write_text(dir / "faithful.cfg", tiny_config(dir / "f") + "[solver]\nkernel_mode = paper_faithful\n");
    REQUIRE(run_cli("simulate --config \"" + (dir / "faithful.cfg").string() + "\"", dir / "5.log") == 0);
    CHECK(run_cli("solve --config \"" + (dir / "faithful.cfg").string() + "\"", dir / "6.log") == kExitConfig);

    write_text(dir / "garbage.nfc", "not a cube");
    write_text(dir / "g.cfg", tiny_config(dir / "g"));
    CHECK(run_cli("export --input \"" + (dir / "garbage.nfc").string() + "\" --config \"" +
                      (dir / "g.cfg").string() + "\"",
                  dir / "7.log") == kExitConfig);
}
