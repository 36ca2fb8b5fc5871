// SPDX-License-Identifier: Apache-2.0
//
// iasim: downlink interference alignment simulator
// Copyright (C) 2026 The iasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iasim/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Downlink interference alignment system simulator"};
    app.set_version_flag("--version", std::string("iasim ") + iasim::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int scenarios = 0;
    int transmissions = 0;
    std::uint64_t seed = 0;
    int threads = 0;
    std::vector<std::string> schemes;
    auto *run = app.add_subcommand("run", "Run a Monte-Carlo campaign and write CSV results");
    run->add_option("--config", config_path, "Configuration file (key = value)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    auto *opt_scen = run->add_option("--scenarios", scenarios, "Number of independent scenarios")->check(CLI::PositiveNumber);
    auto *opt_tx = run->add_option("--transmissions", transmissions, "Transmissions per scenario")->check(CLI::PositiveNumber);
    auto *opt_seed = run->add_option("--seed", seed, "Seed of the first scenario");
    auto *opt_threads = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--scheme", schemes, "Scheme NAME[:kappa], repeatable (IA_ZF, IA_MMSE, MF, OFDM_REF)");

    std::vector<std::string> csv_files;
    auto *cmp = app.add_subcommand("compare", "Compare se_vs_sinr.csv files bin by bin");
    cmp->add_option("files", csv_files, "se_vs_sinr.csv files")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            iasim::cli::RunManifest m;
            m.config = iasim::cli::parse_config(config_path);
            m.out_dir = out_dir;
            auto &c = m.config.campaign;
            if (*opt_scen)
                c.scenarios = scenarios;
            if (*opt_tx)
                c.transmissions = transmissions;
            if (*opt_seed)
                c.seed = seed;
            if (*opt_threads)
                c.threads = threads;
            if (!schemes.empty())
            {
                c.schemes.clear();
                for (const auto &s : schemes)
                    c.schemes.push_back(iasim::parse_scheme(s, m.config.net.kappa));
            }
            iasim::cli::run(m);
            std::cout << "wrote";
            for (const auto &f : iasim::cli::output_files())
                std::cout << ' ' << (std::filesystem::path(out_dir) / f).string();
            std::cout << '\n';
        }
        else if (*cmp)
        {
            std::vector<std::string> texts;
            for (const auto &f : csv_files)
                texts.push_back(iasim::cli::read_file(f));
            std::cout << iasim::cli::compare(texts);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "iasim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
