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


#include "nfcs/run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nfcs {

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

std::vector<std::string> words(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

double parse_double(const std::string &s)
{
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string &s)
{
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string &s) { return static_cast<std::size_t>(parse_u64(s)); }

bool parse_bool(const std::string &s)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::optional<double> parse_auto_double(const std::string &s)
{
    if (s == "auto")
        return std::nullopt;
    return parse_double(s);
}

Dims3 parse_size(const std::string &s)
{
    const auto parts = split(s, 'x');
    if (parts.size() != 3)
        throw std::invalid_argument("expected a size like 16x32x32, got '" + s + "'");
    return {parse_count(parts[0]), parse_count(parts[1]), parse_count(parts[2])};
}

std::filesystem::path resolve(const std::string &value, const std::filesystem::path &base)
{
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty())
        p = base / p;
    return std::filesystem::absolute(p).lexically_normal();
}

std::string fmt(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T> &xs, F &&f, const char *sep = ", ")
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? sep : "") + f(xs[i]);
    return s;
}

std::string opt(const std::optional<double> &v) { return v ? fmt(*v) : "auto"; }

using Setter = std::function<void(const std::string &)>;
using Table = std::map<std::string, std::map<std::string, Setter>>;

Table make_table(RunConfig &c, const std::filesystem::path &base)
{
    Table t;
    auto &ap = t["aperture"];
    ap["nx"] = [&](const std::string &v) { c.aperture.nx = parse_count(v); };
    ap["ny"] = [&](const std::string &v) { c.aperture.ny = parse_count(v); };
    ap["pitch"] = [&](const std::string &v) { c.aperture.pitch_x = c.aperture.pitch_y = parse_double(v); };
    ap["pitch_x"] = [&](const std::string &v) { c.aperture.pitch_x = parse_double(v); };
    ap["pitch_y"] = [&](const std::string &v) { c.aperture.pitch_y = parse_double(v); };
    ap["plane_z"] = [&](const std::string &v) { c.aperture.plane_z = parse_double(v); };

    auto &fr = t["frequency"];
    fr["f_start"] = [&](const std::string &v) { c.frequencies.f_start = parse_double(v); };
    fr["f_stop"] = [&](const std::string &v) { c.frequencies.f_stop = parse_double(v); };
    fr["n_f"] = [&](const std::string &v) { c.frequencies.n_f = parse_count(v); };

    auto &vo = t["volume"];
    vo["nz"] = [&](const std::string &v) { c.volume.nz = parse_count(v); };
    vo["z_min"] = [&](const std::string &v) { c.volume.z_min = parse_double(v); };
    vo["z_max"] = [&](const std::string &v) { c.volume.z_max = parse_double(v); };

    auto &sc = t["scene"];
    sc["file"] = [&, base](const std::string &v) { c.scene.file = v.empty() ? std::filesystem::path{} : resolve(v, base); };
    sc["point"] = [&](const std::string &v) {
        const auto w = words(v);
        if (w.size() != 3 && w.size() != 5)
            throw std::invalid_argument("point expects 'x y z [re im]'");
        Scatterer s{parse_double(w[0]), parse_double(w[1]), parse_double(w[2]), {1.0, 0.0}};
        if (w.size() == 5)
            s.amplitude = {parse_double(w[3]), parse_double(w[4])};
        c.scene.points.push_back(s);
    };
    sc["clear_points"] = [&](const std::string &v) {
        if (parse_bool(v))
            c.scene.points.clear();
    };
    sc["random_points"] = [&](const std::string &v) { c.scene.random_points = parse_count(v); };
    sc["snr_db"] = [&](const std::string &v) { c.scene.snr_db = parse_double(v); };
    sc["seed"] = [&](const std::string &v) { c.scene.seed = parse_u64(v); };

    auto &ma = t["mask"];
    ma["scheme"] = [&](const std::string &v) { c.mask.scheme = mask_scheme_from_string(v); };
    ma["ratio"] = [&](const std::string &v) { c.mask.ratio = parse_double(v); };
    ma["group_y"] = [&](const std::string &v) { c.mask.group_y = parse_count(v); };
    ma["group_x"] = [&](const std::string &v) { c.mask.group_x = parse_count(v); };
    ma["seed"] = [&](const std::string &v) { c.mask.seed = parse_u64(v); };
    ma["file"] = [&, base](const std::string &v) { c.mask.file = v.empty() ? std::filesystem::path{} : resolve(v, base); };

    auto &so = t["solver"];
    so["method"] = [&](const std::string &v) {
        if (v != "holo" && v != "omegak")
            throw std::invalid_argument("method must be holo or omegak");
        c.solver.method = v;
    };
    so["kernel_mode"] = [&](const std::string &v) { c.solver.kernel_mode = kernel_mode_from_string(v); };
    so["taps"] = [&](const std::string &v) { c.solver.taps = parse_count(v); };
    so["lambda1"] = [&](const std::string &v) { c.solver.lambda1 = parse_auto_double(v); };
    so["lambda2"] = [&](const std::string &v) { c.solver.lambda2 = parse_auto_double(v); };
    so["nu"] = [&](const std::string &v) { c.solver.nu = parse_auto_double(v); };
    so["max_outer"] = [&](const std::string &v) { c.solver.max_outer = parse_count(v); };
    so["alpha"] = [&](const std::string &v) { c.solver.alpha = parse_double(v); };
    so["beta"] = [&](const std::string &v) { c.solver.beta = parse_double(v); };
    so["max_backtracks"] = [&](const std::string &v) { c.solver.max_backtracks = parse_count(v); };
    so["grad_tol"] = [&](const std::string &v) { c.solver.grad_tol = parse_double(v); };

    auto &ou = t["output"];
    ou["dir"] = [&, base](const std::string &v) { c.output.dir = resolve(v, base); };
    ou["data"] = [&](const std::string &v) { c.output.data = v; };
    ou["image"] = [&](const std::string &v) { c.output.image = v; };
    ou["dtype"] = [&](const std::string &v) {
        if (v == "c64")
            c.output.dtype = CubeDtype::c64;
        else if (v == "c128")
            c.output.dtype = CubeDtype::c128;
        else
            throw std::invalid_argument("dtype must be c64 or c128");
    };

    auto &ps = t["psf"];
    ps["trials"] = [&](const std::string &v) { c.psf.trials = parse_count(v); };
    ps["schemes"] = [&](const std::string &v) {
        c.psf.schemes.clear();
        for (const auto &s : split(v, ','))
            c.psf.schemes.push_back(mask_scheme_from_string(s));
    };
    ps["operators"] = [&](const std::string &v) {
        c.psf.operators.clear();
        for (const auto &s : split(v, ','))
        {
            if (s != "holo" && s != "omegak")
                throw std::invalid_argument("operators must be holo and/or omegak");
            c.psf.operators.push_back(s);
        }
    };
    ps["voxel"] = [&](const std::string &v) {
        if (v == "center")
        {
            c.psf.voxel.reset();
            return;
        }
        const auto w = words(v);
        if (w.size() != 3)
            throw std::invalid_argument("voxel expects 'center' or 'z y x'");
        c.psf.voxel = std::array<std::size_t, 3>{parse_count(w[0]), parse_count(w[1]), parse_count(w[2])};
    };
    ps["main_lobe"] = [&](const std::string &v) { c.psf.main_lobe = parse_count(v); };

    auto &be = t["bench"];
    be["sizes"] = [&](const std::string &v) {
        c.bench.sizes.clear();
        for (const auto &s : split(v, ','))
            c.bench.sizes.push_back(parse_size(s));
    };
    be["repeats"] = [&](const std::string &v) { c.bench.repeats = parse_count(v); };
    be["iterations"] = [&](const std::string &v) { c.bench.iterations = parse_count(v); };

    auto &sw = t["sweep"];
    sw["enabled"] = [&](const std::string &v) { c.sweep.enabled = parse_bool(v); };
    sw["snr_db"] = [&](const std::string &v) {
        c.sweep.snr_db.clear();
        for (const auto &s : split(v, ','))
            c.sweep.snr_db.push_back(parse_double(s));
    };
    sw["ratios"] = [&](const std::string &v) {
        c.sweep.ratios.clear();
        for (const auto &s : split(v, ','))
            c.sweep.ratios.push_back(parse_double(s));
    };
    sw["trials"] = [&](const std::string &v) { c.sweep.trials = parse_count(v); };
    return t;
}

} // namespace

void apply_config_text(RunConfig &config, const std::string &text, const std::string &source,
                       const std::filesystem::path &base_dir)
{
    const Table table = make_table(config, base_dir);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &msg) {
        throw ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw))
    {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                fail("malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (!table.count(section))
                fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected 'key = value', got '" + line + "'");
        if (section.empty())
            fail("key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto &keys = table.at(section);
        const auto it = keys.find(key);
        if (it == keys.end())
            fail("unknown key '" + key + "' in [" + section + "]");
        try
        {
            it->second(value);
        }
        catch (const std::exception &e)
        {
            fail("[" + section + "] " + key + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig &config, const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str(), path.string(), path.parent_path());
}

std::vector<std::string> preset_names()
{
    return {"fig9-small", "fig9-medium", "fig9-large", "fig3-psf", "fig10-rmse-sweep"};
}

std::string preset_text(const std::string &name)
{
    // Desk-scale scenes: 3 mm pitch, 72-76 GHz, range window 0.3-0.6 m, as many frequencies as
    // range bins.
    auto grid = [](std::size_t n, std::size_t nz) {
        return "[aperture]\nnx = " + std::to_string(n) + "\nny = " + std::to_string(n) +
               "\npitch = 0.003\nplane_z = 0\n"
               "[frequency]\nf_start = 72e9\nf_stop = 76e9\nn_f = " +
               std::to_string(nz) + "\n[volume]\nnz = " + std::to_string(nz) + "\nz_min = 0.3\nz_max = 0.6\n";
    };
    const std::string points = "[scene]\nrandom_points = 5\nseed = 1\n";
    if (name == "fig9-small")
        return grid(32, 16) + points + "[output]\ndir = out/fig9-small\n";
    if (name == "fig9-medium")
        return grid(48, 16) + points + "[output]\ndir = out/fig9-medium\n";
    if (name == "fig9-large")
        return grid(64, 16) + points + "[output]\ndir = out/fig9-large\n";
    if (name == "fig3-psf")
        return grid(32, 16) +
               "[mask]\nscheme = uniform_random\nratio = 0.125\ngroup_y = 4\ngroup_x = 2\nseed = 1\n"
               "[psf]\ntrials = 50\nschemes = random, uniform_random\noperators = holo, omegak\nmain_lobe = 1\n"
               "[output]\ndir = out/fig3-psf\n";
    if (name == "fig10-rmse-sweep")
        return grid(32, 16) + points +
               "[mask]\nscheme = uniform_random\nratio = 0.3\ngroup_y = 4\ngroup_x = 4\n"
               "[solver]\nmax_outer = 30\n"
               "[sweep]\nenabled = true\nsnr_db = 10, 20, 30\nratios = 0.2, 0.3, 0.4, 0.5\ntrials = 10\n"
               "[output]\ndir = out/fig10-rmse-sweep\n";
    throw ConfigError("unknown preset '" + name + "' (known: " +
                      join(preset_names(), [](const std::string &s) { return s; }) + ")");
}

std::string to_text(const RunConfig &c)
{
    std::ostringstream o;
    o << "[aperture]\n"
      << "nx = " << c.aperture.nx << "\nny = " << c.aperture.ny << "\npitch_x = " << fmt(c.aperture.pitch_x)
      << "\npitch_y = " << fmt(c.aperture.pitch_y) << "\nplane_z = " << fmt(c.aperture.plane_z) << "\n\n";
    o << "[frequency]\n"
      << "f_start = " << fmt(c.frequencies.f_start) << "\nf_stop = " << fmt(c.frequencies.f_stop)
      << "\nn_f = " << c.frequencies.n_f << "\n\n";
    o << "[volume]\n"
      << "nz = " << c.volume.nz << "\nz_min = " << fmt(c.volume.z_min) << "\nz_max = " << fmt(c.volume.z_max)
      << "\n\n";
    o << "[scene]\n";
    if (!c.scene.file.empty())
        o << "file = " << c.scene.file.string() << "\n";
    for (const auto &p : c.scene.points)
        o << "point = " << fmt(p.x) << " " << fmt(p.y) << " " << fmt(p.z) << " " << fmt(p.amplitude.real()) << " "
          << fmt(p.amplitude.imag()) << "\n";
    o << "random_points = " << c.scene.random_points << "\nsnr_db = " << fmt(c.scene.snr_db)
      << "\nseed = " << c.scene.seed << "\n\n";
    o << "[mask]\n"
      << "scheme = " << to_string(c.mask.scheme) << "\nratio = " << fmt(c.mask.ratio)
      << "\ngroup_y = " << c.mask.group_y << "\ngroup_x = " << c.mask.group_x << "\nseed = " << c.mask.seed << "\n";
    if (!c.mask.file.empty())
        o << "file = " << c.mask.file.string() << "\n";
    o << "\n[solver]\n"
      << "method = " << c.solver.method << "\nkernel_mode = " << to_string(c.solver.kernel_mode)
      << "\ntaps = " << c.solver.taps << "\nlambda1 = " << opt(c.solver.lambda1) << "\nlambda2 = "
      << opt(c.solver.lambda2) << "\nnu = " << opt(c.solver.nu) << "\nmax_outer = " << c.solver.max_outer
      << "\nalpha = " << fmt(c.solver.alpha) << "\nbeta = " << fmt(c.solver.beta)
      << "\nmax_backtracks = " << c.solver.max_backtracks << "\ngrad_tol = " << fmt(c.solver.grad_tol) << "\n\n";
    o << "[output]\n"
      << "dir = " << c.output.dir.string() << "\ndata = " << c.output.data.string()
      << "\nimage = " << c.output.image.string()
      << "\ndtype = " << (c.output.dtype == CubeDtype::c64 ? "c64" : "c128") << "\n\n";
    o << "[psf]\n"
      << "trials = " << c.psf.trials << "\nschemes = "
      << join(c.psf.schemes, [](MaskScheme s) { return to_string(s); })
      << "\noperators = " << join(c.psf.operators, [](const std::string &s) { return s; }) << "\nvoxel = ";
    if (c.psf.voxel)
        o << (*c.psf.voxel)[0] << " " << (*c.psf.voxel)[1] << " " << (*c.psf.voxel)[2];
    else
        o << "center";
    o << "\nmain_lobe = " << c.psf.main_lobe << "\n\n";
    o << "[bench]\n"
      << "sizes = "
      << join(c.bench.sizes,
              [](const Dims3 &d) {
                  return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
              })
      << "\nrepeats = " << c.bench.repeats << "\niterations = " << c.bench.iterations << "\n\n";
    o << "[sweep]\n"
      << "enabled = " << (c.sweep.enabled ? "true" : "false")
      << "\nsnr_db = " << join(c.sweep.snr_db, [](double v) { return fmt(v); })
      << "\nratios = " << join(c.sweep.ratios, [](double v) { return fmt(v); }) << "\ntrials = " << c.sweep.trials
      << "\n";
    return o.str();
}

VolumeGrid volume_grid(const RunConfig &c)
{
    return build_volume_grid(c.volume.nz, c.aperture.ny, c.aperture.nx, c.volume.z_min, c.volume.z_max, c.aperture);
}

void validate(const RunConfig &c)
{
    try
    {
        validate(c.aperture);
        validate(c.frequencies);
        volume_grid(c);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!c.scene.file.empty() && !std::filesystem::exists(c.scene.file))
        throw ConfigError("config: [scene] file '" + c.scene.file.string() + "' does not exist");
    if (c.mask.scheme == MaskScheme::custom)
    {
        if (c.mask.file.empty())
            throw ConfigError("config: [mask] scheme = custom needs a file");
        if (!std::filesystem::exists(c.mask.file))
            throw ConfigError("config: [mask] file '" + c.mask.file.string() + "' does not exist");
    }
    if (!(c.mask.ratio > 0.0 && c.mask.ratio <= 1.0))
        throw ConfigError("config: [mask] ratio must lie in (0, 1]");
    if (c.solver.taps < 2 || c.solver.taps % 2 != 0)
        throw ConfigError("config: [solver] taps must be even and >= 2");
    if (c.psf.trials == 0)
        throw ConfigError("config: [psf] trials must be >= 1");
    if (c.psf.schemes.empty() || c.psf.operators.empty())
        throw ConfigError("config: [psf] schemes and operators must not be empty");
    if (c.bench.repeats == 0)
        throw ConfigError("config: [bench] repeats must be >= 1");
    if (c.sweep.trials == 0)
        throw ConfigError("config: [sweep] trials must be >= 1");
}

std::filesystem::path data_path(const RunConfig &c)
{
    return c.output.data.is_absolute() ? c.output.data : c.output.dir / c.output.data;
}

std::filesystem::path image_path(const RunConfig &c)
{
    return c.output.image.is_absolute() ? c.output.image : c.output.dir / c.output.image;
}

} // namespace nfcs
