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


#include "nfcs/commands.hpp"

#include "nfcs/analysis.hpp"
#include "nfcs/cs_solver.hpp"
#include "nfcs/omegak.hpp"
#include "nfcs/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>

namespace nfcs {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

template <typename Fn>
double timed(Fn &&fn)
{
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

struct MeanStd
{
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double> &xs)
{
    MeanStd r;
    if (xs.empty())
        return r;
    r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double s = 0.0;
    for (double x : xs)
        s += (x - r.mean) * (x - r.mean);
    r.std = std::sqrt(s / static_cast<double>(xs.size()));
    return r;
}

std::ofstream open_out(const fs::path &path, bool binary = false)
{
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void prepare_output(const RunConfig &config)
{
    fs::create_directories(config.output.dir);
    open_out(config.output.dir / "effective.cfg") << to_text(config);
}

CubeGrids run_grids(const RunConfig &config, bool with_volume)
{
    CubeGrids g{config.aperture, config.frequencies, std::nullopt};
    if (with_volume)
        g.volume = volume_grid(config);
    return g;
}

void require_finite(std::span<const cdouble> values, const std::string &what)
{
    if (!all_finite(values))
        throw NumericFailure(what + " contains non-finite values");
}

DataCube load_data(const RunConfig &config)
{
    const fs::path path = data_path(config);
    if (!fs::exists(path))
        throw ConfigError("data cube '" + path.string() + "' does not exist (run `simulate` first)");
    const CubeFile file = read_cube_file(path);
    DataCube data = to_data_cube(file);
    if (data.dims() != data_dims(config.frequencies, config.aperture))
        throw ConfigError("data cube '" + path.string() + "' does not match the configured aperture/frequency grids");
    const CubeGrids recorded = parse_grids_metadata(file.metadata);
    if ((recorded.aperture && !(*recorded.aperture == config.aperture)) ||
        (recorded.frequencies && !(*recorded.frequencies == config.frequencies)))
        throw ConfigError("data cube '" + path.string() + "' was generated with different grids");
    return data;
}

std::unique_ptr<SensingOperator> make_operator(const RunConfig &config, const std::string &method,
                                               std::optional<SamplingMask> mask, KernelMode mode)
{
    const VolumeGrid volume = volume_grid(config);
    if (method == "holo")
        return std::make_unique<HoloOperator>(config.aperture, config.frequencies, volume, mode, std::move(mask));
    return std::make_unique<OmegaKOperator>(config.aperture, config.frequencies, volume,
                                            make_stolt_kernel(config.solver.taps), std::move(mask));
}

std::optional<SamplingMask> optional_mask(const RunConfig &config)
{
    if (config.mask.scheme == MaskScheme::full)
        return std::nullopt;
    return build_mask(config);
}

SolverParams solver_params(const RunConfig &config, const SensingOperator &op, const DataCube &data)
{
    SolverParams p = default_solver_params(op, data);
    const auto &s = config.solver;
    if (s.lambda1)
        p.lambda1 = *s.lambda1;
    if (s.lambda2)
        p.lambda2 = *s.lambda2;
    if (s.nu)
        p.nu = *s.nu;
    p.max_outer = s.max_outer;
    p.alpha = s.alpha;
    p.beta = s.beta;
    p.max_backtracks = s.max_backtracks;
    p.grad_tol = s.grad_tol;
    try
    {
        validate(p);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("config: [solver] ") + e.what());
    }
    return p;
}

void write_projections(const ImageCube &image, const fs::path &dir, const std::string &stem)
{
    static constexpr const char *names[3] = {"yx", "zx", "zy"};
    for (std::size_t axis = 0; axis < 3; ++axis)
    {
        auto out = open_out(dir / (stem + "_" + names[axis] + ".pgm"), true);
        write_pgm(out, max_projection(image, axis));
    }
}

void write_image(const RunConfig &config, const ImageCube &image, const fs::path &path)
{
    write_cube_file(path, make_cube_file(image, grids_metadata(run_grids(config, true)), config.output.dtype));
}

void log_psf_mu(const SensingOperator &op, MainLobe lobe, std::ostream &log)
{
    double mu = 0.0;
    try
    {
        mu = psf_column(op, center_voxel(op.image_dims()), lobe).mu;
    }
    catch (const std::invalid_argument &)
    {
        log << "psf_mu n/a (zero response at the center voxel)\n";
        return;
    }
    log << "psf_mu " << fmt("%.6f", mu) << "\n";
}

void log_operator_warnings(const SensingOperator &op, std::ostream &log)
{
    const auto *wk = dynamic_cast<const OmegaKOperator *>(&op);
    if (wk && wk->stolt_warnings() > 0)
        log << "warning: " << wk->stolt_warnings()
            << " spectral lines have fewer propagating samples than Stolt taps and were zeroed\n";
}

DataCube simulate_truth_data(const RunConfig &config, const PointScene &scene, double snr_db, std::uint64_t noise_seed)
{
    DataCube data = simulate_scatter(scene, config.aperture, config.frequencies);
    return add_noise(data, snr_db, noise_seed);
}

} // namespace

RunConfig load_run_config(const CliOptions &options)
{
    RunConfig config;
    if (options.preset)
        apply_config_text(config, preset_text(*options.preset), "preset:" + *options.preset);
    if (options.config)
        apply_config_file(config, *options.config);
    if (options.seed)
    {
        config.scene.seed = *options.seed;
        config.mask.seed = *options.seed;
    }
    if (options.method)
    {
        if (*options.method != "holo" && *options.method != "omegak")
            throw ConfigError("--method must be holo or omegak");
        config.solver.method = *options.method;
    }
    validate(config);
    return config;
}

PointScene build_scene(const RunConfig &config)
{
    const VolumeGrid volume = volume_grid(config);
    PointScene scene;
    scene.points = config.scene.points;
    if (!config.scene.file.empty())
    {
        std::ifstream in(config.scene.file);
        if (!in)
            throw ConfigError("cannot open scene file '" + config.scene.file.string() + "'");
        const PointScene from_file = read_scene(in);
        scene.points.insert(scene.points.end(), from_file.points.begin(), from_file.points.end());
    }
    if (config.scene.random_points > 0)
    {
        // Keep one voxel of range margin and an eighth of the aperture on each transverse side.
        std::mt19937_64 rng(config.scene.seed);
        auto draw = [&](std::size_t n, std::size_t margin) {
            const std::size_t lo = std::min(margin, (n - 1) / 2);
            const std::size_t hi = n - 1 - lo;
            return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
        };
        for (std::size_t i = 0; i < config.scene.random_points; ++i)
        {
            const std::size_t iz = draw(volume.nz, 1);
            const std::size_t iy = draw(volume.ny, volume.ny / 8);
            const std::size_t ix = draw(volume.nx, volume.nx / 8);
            scene.points.push_back(voxel_scatterer(volume, iz, iy, ix));
        }
    }
    try
    {
        validate(scene, volume);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("scene: ") + e.what());
    }
    return scene;
}

SamplingMask build_mask(const RunConfig &config)
{
    const auto &m = config.mask;
    try
    {
        switch (m.scheme)
        {
        case MaskScheme::full:
            return mask_full(config.aperture);
        case MaskScheme::random:
            return mask_random(config.aperture, m.ratio, m.seed);
        case MaskScheme::uniform_random:
            return mask_uniform_random(config.aperture, m.ratio, m.group_y, m.group_x, m.seed);
        case MaskScheme::custom:
        {
            std::ifstream in(m.file);
            if (!in)
                throw ConfigError("cannot open mask file '" + m.file.string() + "'");
            SamplingMask mask = read_mask(in);
            if (mask.ny != config.aperture.ny || mask.nx != config.aperture.nx)
                throw ConfigError("mask file '" + m.file.string() + "' does not match the aperture");
            return mask;
        }
        }
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("mask: ") + e.what());
    }
    throw ConfigError("mask: unknown scheme");
}

void cmd_simulate(const RunConfig &config, std::ostream &log)
{
    prepare_output(config);
    const PointScene scene = build_scene(config);
    if (scene.points.empty())
        throw ConfigError("simulate: the scene has no scatterers (set [scene] point, file or random_points)");

    DataCube data;
    const double seconds = timed([&] { data = simulate_truth_data(config, scene, config.scene.snr_db, config.scene.seed); });
    const auto mask = optional_mask(config);
    if (mask)
    {
        apply_mask_in_place(data, *mask);
        auto out = open_out(config.output.dir / "mask.txt");
        write_mask(out, *mask);
    }
    require_finite(data.values(), "simulated data");

    {
        auto out = open_out(config.output.dir / "scene.txt");
        write_scene(out, scene);
    }
    write_cube_file(data_path(config), make_cube_file(data, grids_metadata(run_grids(config, false)), config.output.dtype));
    log << "simulate: " << scene.points.size() << " scatterers, data " << data.dims()[0] << "x" << data.dims()[1]
        << "x" << data.dims()[2] << ", mask " << to_string(config.mask.scheme)
        << (mask ? " (" + std::to_string(mask->count()) + " positions)" : std::string()) << ", snr_db "
        << fmt("%g", config.scene.snr_db) << "\n"
        << "wrote " << data_path(config).string() << "\n"
        << "time_s " << fmt("%.6f", seconds) << "\n";
}

void cmd_reconstruct(const RunConfig &config, std::ostream &log)
{
    prepare_output(config);
    DataCube data = load_data(config);
    const auto mask = optional_mask(config);
    const auto op = make_operator(config, config.solver.method, mask, config.solver.kernel_mode);
    log_operator_warnings(*op, log);

    ImageCube image;
    const double seconds = timed([&] { image = op->backward(data); });
    require_finite(image.values(), "reconstruction");

    write_image(config, image, image_path(config));
    write_projections(image, config.output.dir, "reconstruct_" + config.solver.method);
    const VoxelIndex peak = argmax_abs(image);
    log << "reconstruct: method " << op->name() << ", argmax (z, y, x) = (" << peak.z << ", " << peak.y << ", "
        << peak.x << ")\n";
    if (mask)
        log_psf_mu(*op, MainLobe::uniform(config.psf.main_lobe), log);
    const PointScene scene = build_scene(config);
    if (!scene.points.empty())
        log << "rmse " << fmt("%.6f", rmse(rasterize(scene, volume_grid(config)), image)) << "\n";
    log << "wrote " << image_path(config).string() << "\n"
        << "time_s " << fmt("%.6f", seconds) << "\n";
}

namespace {

struct SweepRow
{
    double snr_db;
    double ratio;
    std::size_t trial;
    std::string method;
    double rmse;
    double seconds;
};

void run_sweep(const RunConfig &config, std::ostream &log)
{
    const VolumeGrid volume = volume_grid(config);
    std::vector<SweepRow> rows;
    const MaskScheme scheme =
        config.mask.scheme == MaskScheme::random ? MaskScheme::random : MaskScheme::uniform_random;
    for (double snr : config.sweep.snr_db)
    {
        for (double ratio : config.sweep.ratios)
        {
            for (std::size_t trial = 0; trial < config.sweep.trials; ++trial)
            {
                RunConfig c = config;
                c.scene.seed = config.scene.seed + trial;
                c.mask.seed = config.mask.seed + trial;
                c.mask.scheme = scheme;
                c.mask.ratio = ratio;
                const PointScene scene = build_scene(c);
                if (scene.points.empty())
                    throw ConfigError("sweep: the scene has no scatterers");
                const ImageCube truth = rasterize(scene, volume);
                const SamplingMask mask = build_mask(c);
                const DataCube data = apply_mask(simulate_truth_data(c, scene, snr, c.scene.seed), mask);

                ImageCube fourier;
                const OmegaKOperator omegak(c.aperture, c.frequencies, volume, make_stolt_kernel(c.solver.taps));
                const double t_fourier = timed([&] { fourier = omegak.backward(data); });
                rows.push_back({snr, ratio, trial, "fourier", rmse(truth, fourier), t_fourier});
                for (const char *method : {"holo", "omegak"})
                {
                    const auto op = make_operator(c, method, mask, KernelMode::adjoint_exact);
                    const SolverParams p = solver_params(c, *op, data);
                    SolveResult r;
                    const double t = timed([&] { r = solve_ncg(data, *op, p); });
                    require_finite(r.image.values(), std::string(method) + "-cs image");
                    rows.push_back({snr, ratio, trial, std::string(method) + "-cs", rmse(truth, r.image), t});
                }
            }
        }
    }

    auto out = open_out(config.output.dir / "rmse_sweep.csv");
    out << "snr_db,ratio,trial,method,rmse,seconds\n";
    for (const auto &r : rows)
        out << fmt("%g", r.snr_db) << "," << fmt("%g", r.ratio) << "," << r.trial << "," << r.method << ","
            << fmt("%.9g", r.rmse) << "," << fmt("%.6f", r.seconds) << "\n";

    auto summary = open_out(config.output.dir / "rmse_summary.csv");
    summary << "snr_db,ratio,method,trials,rmse_mean,rmse_std\n";
    log << "sweep: snr_db ratio method rmse_mean rmse_std\n";
    for (double snr : config.sweep.snr_db)
        for (double ratio : config.sweep.ratios)
            for (const char *method : {"fourier", "holo-cs", "omegak-cs"})
            {
                std::vector<double> xs;
                for (const auto &r : rows)
                    if (r.snr_db == snr && r.ratio == ratio && r.method == method)
                        xs.push_back(r.rmse);
                const MeanStd ms = mean_std(xs);
                summary << fmt("%g", snr) << "," << fmt("%g", ratio) << "," << method << "," << xs.size() << ","
                        << fmt("%.9g", ms.mean) << "," << fmt("%.9g", ms.std) << "\n";
                log << "  " << fmt("%g", snr) << " " << fmt("%g", ratio) << " " << method << " "
                    << fmt("%.6f", ms.mean) << " " << fmt("%.6f", ms.std) << "\n";
            }
    log << "wrote " << (config.output.dir / "rmse_sweep.csv").string() << "\n";
}

} // namespace

void cmd_solve(const RunConfig &config, std::ostream &log)
{
    prepare_output(config);
    if (config.solver.kernel_mode == KernelMode::paper_faithful && config.solver.method == "holo")
        throw ConfigError("solve: kernel_mode = paper_faithful is not an adjoint pair; use adjoint_exact");
    if (config.sweep.enabled)
    {
        run_sweep(config, log);
        return;
    }

    const DataCube data = load_data(config);
    const auto mask = optional_mask(config);
    const auto op = make_operator(config, config.solver.method, mask, KernelMode::adjoint_exact);
    log_operator_warnings(*op, log);
    const SolverParams params = solver_params(config, *op, data);

    const SolveResult result = solve_ncg(data, *op, params);
    {
        auto csv = open_out(config.output.dir / ("solve_" + config.solver.method + ".csv"));
        write_report_csv(csv, result.report);
    }
    require_finite(result.image.values(), "solver image");
    write_image(config, result.image, image_path(config));
    write_projections(result.image, config.output.dir, "solve_" + config.solver.method);

    const auto &rep = result.report;
    log << "solve: operator " << op->name() << ", lambda1 " << fmt("%.6g", params.lambda1) << ", lambda2 "
        << fmt("%.6g", params.lambda2) << ", nu " << fmt("%.3g", params.nu) << "\n"
        << "iterations " << (rep.iterations.empty() ? 0 : rep.iterations.back().iteration) << ", stop "
        << rep.stop_reason << ", objective " << fmt("%.9g", rep.iterations.back().objective) << "\n";
    if (rep.line_search_failed)
        log << "warning: line search failed; the image is the last accepted iterate\n";
    const PointScene scene = build_scene(config);
    if (!scene.points.empty())
    {
        const ImageCube truth = rasterize(scene, volume_grid(config));
        const ImageCube fourier = reconstruct_omegak(data, config.aperture, config.frequencies, volume_grid(config),
                                                     make_stolt_kernel(config.solver.taps));
        log << "rmse " << fmt("%.6f", rmse(truth, result.image)) << " (fourier " << fmt("%.6f", rmse(truth, fourier))
            << ")\n";
    }
    if (mask)
        log_psf_mu(*op, MainLobe::uniform(config.psf.main_lobe), log);
    log << "wrote " << image_path(config).string() << "\n"
        << "time_s " << fmt("%.6f", rep.seconds) << "\n";
}

void cmd_psf(const RunConfig &config, std::ostream &log)
{
    prepare_output(config);
    const VolumeGrid volume = volume_grid(config);
    const Dims3 dims = image_dims(volume);
    const VoxelIndex voxel =
        config.psf.voxel ? VoxelIndex{(*config.psf.voxel)[0], (*config.psf.voxel)[1], (*config.psf.voxel)[2]}
                         : center_voxel(dims);
    if (voxel.z >= dims[0] || voxel.y >= dims[1] || voxel.x >= dims[2])
        throw ConfigError("psf: voxel lies outside the volume");
    const MainLobe lobe = MainLobe::uniform(config.psf.main_lobe);

    auto trials_csv = open_out(config.output.dir / "psf_trials.csv");
    trials_csv << "scheme,operator,trial,seed,mu\n";
    auto summary = open_out(config.output.dir / "psf_summary.csv");
    summary << "scheme,operator,trials,mu_mean,mu_std,mean_psf_mu\n";
    auto proj_csv = open_out(config.output.dir / "psf_projections.csv");
    proj_csv << "scheme,operator,axis,index,value_db\n";

    log << "psf: voxel (" << voxel.z << ", " << voxel.y << ", " << voxel.x << "), ratio "
        << fmt("%g", config.mask.ratio) << ", trials " << config.psf.trials << "\n";
    for (MaskScheme scheme : config.psf.schemes)
    {
        for (const auto &name : config.psf.operators)
        {
            std::vector<double> mus;
            ImageCube mean(dims);
            for (std::size_t t = 0; t < config.psf.trials; ++t)
            {
                RunConfig c = config;
                c.mask.scheme = scheme;
                c.mask.seed = config.mask.seed + t;
                const auto op = make_operator(c, name, build_mask(c), KernelMode::adjoint_exact);
                const PsfStats stats = psf_column(*op, voxel, lobe);
                require_finite(stats.psf.values(), "psf");
                mus.push_back(stats.mu);
                trials_csv << to_string(scheme) << "," << name << "," << t << "," << c.mask.seed << ","
                           << fmt("%.9g", stats.mu) << "\n";
                for (std::size_t i = 0; i < mean.size(); ++i)
                    mean[i] += std::abs(stats.psf[i]) / static_cast<double>(config.psf.trials);
            }
            const PsfStats mean_stats = psf_stats(mean, voxel, lobe);
            const MeanStd ms = mean_std(mus);
            summary << to_string(scheme) << "," << name << "," << mus.size() << "," << fmt("%.9g", ms.mean) << ","
                    << fmt("%.9g", ms.std) << "," << fmt("%.9g", mean_stats.mu) << "\n";
            for (std::size_t axis = 0; axis < 3; ++axis)
                for (std::size_t i = 0; i < mean_stats.projections[axis].size(); ++i)
                {
                    const double v = mean_stats.projections[axis][i];
                    proj_csv << to_string(scheme) << "," << name << "," << "zyx"[axis] << "," << i << ","
                             << fmt("%.6f", v > 0.0 ? 20.0 * std::log10(v) : -300.0) << "\n";
                }
            write_projections(mean, config.output.dir, "psf_" + to_string(scheme) + "_" + name);
            log << "  " << to_string(scheme) << " " << name << ": mu_mean " << fmt("%.6f", ms.mean) << ", mu_std "
                << fmt("%.6f", ms.std) << ", mean_psf_mu " << fmt("%.6f", mean_stats.mu) << "\n";
        }
    }
    log << "wrote " << (config.output.dir / "psf_summary.csv").string() << "\n";
}

void cmd_bench(const RunConfig &config, std::ostream &log)
{
    prepare_output(config);
    auto csv = open_out(config.output.dir / "bench.csv");
    csv << "size,method,stage,repeats,seconds_mean,seconds_std,model_flops,xi\n";
    log << "bench: size method stage seconds_mean seconds_std\n";
    for (const Dims3 &size : config.bench.sizes)
    {
        RunConfig c = config;
        c.volume.nz = size[0];
        c.aperture.ny = size[1];
        c.aperture.nx = size[2];
        c.frequencies.n_f = size[0];
        validate(c);
        const VolumeGrid volume = volume_grid(c);
        PointScene scene = build_scene(c);
        if (scene.points.empty())
            scene.points.push_back(voxel_scatterer(volume, size[0] / 2, size[1] / 2, size[2] / 2));
        const auto mask = optional_mask(c);
        DataCube data = simulate_truth_data(c, scene, c.scene.snr_db, c.scene.seed);
        if (mask)
            apply_mask_in_place(data, *mask);

        const FlopModel model = flop_model(static_cast<double>(size[0]), static_cast<double>(size[2]),
                                           static_cast<double>(size[1]), static_cast<double>(c.solver.taps));
        const std::string label = std::to_string(size[0]) + "x" + std::to_string(size[1]) + "x" + std::to_string(size[2]);
        std::map<std::string, double> per_iteration;
        for (const char *method : {"holo", "omegak"})
        {
            const auto op = make_operator(c, method, mask, KernelMode::adjoint_exact);
            const double flops = std::string(method) == "holo" ? model.flops_holo : model.flops_omegak;
            std::vector<double> recon, iteration;
            SolverParams p = solver_params(c, *op, data);
            p.max_outer = c.bench.iterations;
            p.grad_tol = 0.0;
            for (std::size_t r = 0; r < c.bench.repeats; ++r)
            {
                ImageCube image;
                recon.push_back(timed([&] { image = op->backward(data); }));
                const SolveResult s = solve_ncg(data, *op, p);
                const std::size_t its = std::max<std::size_t>(1, s.report.iterations.back().iteration);
                iteration.push_back(s.report.seconds / static_cast<double>(its));
            }
            for (const auto &[stage, xs] : {std::pair{"recon", &recon}, std::pair{"cs_iteration", &iteration}})
            {
                const MeanStd ms = mean_std(*xs);
                csv << label << "," << method << "," << stage << "," << xs->size() << "," << fmt("%.6e", ms.mean)
                    << "," << fmt("%.6e", ms.std) << "," << fmt("%.6e", flops) << "," << fmt("%.6f", model.xi)
                    << "\n";
                log << "  " << label << " " << method << " " << stage << " " << fmt("%.6f", ms.mean) << " "
                    << fmt("%.6f", ms.std) << "\n";
            }
            per_iteration[method] = mean_std(iteration).mean;
        }
        log << "  " << label << " omegak/holo cs_iteration ratio "
            << fmt("%.3f", per_iteration["omegak"] / per_iteration["holo"]) << ", model xi " << fmt("%.4f", model.xi)
            << "\n";
    }
    log << "wrote " << (config.output.dir / "bench.csv").string() << "\n";
}

void cmd_export(const RunConfig &config, const fs::path &input, std::ostream &log)
{
    fs::create_directories(config.output.dir);
    if (!fs::exists(input))
        throw ConfigError("export: '" + input.string() + "' does not exist");
    const CubeFile file = read_cube_file(input);
    const std::string stem = input.stem().string();
    ImageCube cube(file.dims, file.values);
    require_finite(cube.values(), "cube");
    write_projections(cube, config.output.dir, stem);
    static constexpr const char *names[3] = {"yx", "zx", "zy"};
    for (std::size_t axis = 0; axis < 3; ++axis)
    {
        const Projection p = max_projection(cube, axis);
        auto out = open_out(config.output.dir / (stem + "_" + names[axis] + ".csv"));
        for (std::size_t r = 0; r < p.rows; ++r)
        {
            for (std::size_t col = 0; col < p.cols; ++col)
                out << (col ? "," : "") << fmt("%.4f", p.db[r * p.cols + col]);
            out << "\n";
        }
    }
    log << "export: " << (file.axes == CubeAxes::data ? "data" : "image") << " cube " << file.dims[0] << "x"
        << file.dims[1] << "x" << file.dims[2] << " -> " << config.output.dir.string() << "/" << stem << "_*.{pgm,csv}\n";
}

int run_command(const std::string &command, const CliOptions &options, std::ostream &log, std::ostream &err)
{
    try
    {
        const RunConfig config = load_run_config(options);
        if (command == "simulate")
            cmd_simulate(config, log);
        else if (command == "reconstruct")
            cmd_reconstruct(config, log);
        else if (command == "solve")
            cmd_solve(config, log);
        else if (command == "psf")
            cmd_psf(config, log);
        else if (command == "bench")
            cmd_bench(config, log);
        else if (command == "export")
            cmd_export(config, options.input.value_or(image_path(config)), log);
        else
            throw ConfigError("unknown command '" + command + "'");
        return kExitOk;
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const CubeFormatError &e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const NumericFailure &e)
    {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    catch (const std::domain_error &e)
    {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    catch (const std::invalid_argument &e)
    {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace nfcs
