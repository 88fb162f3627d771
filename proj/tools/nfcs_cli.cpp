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


// nfcs: near-field compressive-sensing imaging from the command line.
//
//   nfcs simulate    --preset fig9-small
//   nfcs reconstruct --preset fig9-small --method omegak
//   nfcs solve       --config run.cfg --seed 3
//   nfcs psf         --preset fig3-psf
//   nfcs bench       --config bench.cfg --threads 1
//   nfcs export      --config run.cfg --input out/image.nfc

#include "nfcs/commands.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Near-field compressive-sensing 3-D imaging"};
    app.require_subcommand(1);

    nfcs::CliOptions options;
    std::string config, preset, method, input;
    std::uint64_t seed = 0;
    int threads = 0;

    app.add_option("--config", config, "Run configuration file");
    app.add_option("--preset", preset, "Built-in scenario applied before --config")
        ->check(CLI::IsMember(nfcs::preset_names()));
    app.add_option("--seed", seed, "Overrides the scene and mask seeds");
    app.add_option("--threads", threads, "Caps the number of worker threads")->check(CLI::PositiveNumber);
    app.add_option("--method", method, "Reconstruction operator")->check(CLI::IsMember({"holo", "omegak"}));
    app.fallthrough();

    for (const char *name : {"simulate", "reconstruct", "solve", "psf", "bench"})
        app.add_subcommand(name);
    app.add_subcommand("export", "Writes dB max projections of a cube as PGM and CSV")
        ->add_option("--input", input, "Cube file (default: the configured image cube)");
    app.get_subcommand("simulate")->description("Simulates scattered data for the configured scene");
    app.get_subcommand("reconstruct")->description("Non-iterative holographic or omega-k reconstruction");
    app.get_subcommand("solve")->description("L1 + TV compressive-sensing reconstruction (or the RMSE sweep)");
    app.get_subcommand("psf")->description("Point spread function and coherence statistics over mask trials");
    app.get_subcommand("bench")->description("Timing of reconstructions and CS iterations against the FLOP model");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : nfcs::kExitConfig;
    }

    if (!config.empty())
        options.config = config;
    if (!preset.empty())
        options.preset = preset;
    if (app.count("--seed"))
        options.seed = seed;
    if (!method.empty())
        options.method = method;
    if (!input.empty())
        options.input = input;
    if (threads > 0)
        omp_set_num_threads(threads);

    const std::string command = app.get_subcommands().front()->get_name();
    return nfcs::run_command(command, options, std::cout, std::cerr);
}
