// SPDX-License-Identifier: Apache-2.0
//
// rismse: discrete precoding and RIS configuration for RIS-aided MU-MIMO
// Copyright (C) 2026 The rismse authors
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

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rismse/bcd.hpp"
#include "rismse/channel.hpp"
#include "rismse/config.hpp"
#include "rismse/harness.hpp"
#include "rismse/random.hpp"

namespace {

enum ExitCode
{
    kOk = 0,
    kConfigError = 1,
    kRuntimeError = 2,
    kSelftestFailure = 3
};

struct Overrides
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::vector<double> powers;
    std::vector<std::string> schemes;
    std::optional<std::uint64_t> node_budget;
    int threads = 1;
    std::string out = "results";
    bool print_config = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config_path, "JSON config file (or a results CSV carrying a manifest)");
    cmd->add_option("--seed", o.seed, "Master RNG seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials");
    cmd->add_option("--power-dbm", o.powers, "Transmit power(s) in dBm")->delimiter(',');
    cmd->add_option("--scheme", o.schemes, "sesd-both, sesd-precoding, sesd-ris, no-sesd")->delimiter(',');
    cmd->add_option("--node-budget", o.node_budget, "Sphere decoder node budget per solve");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_flag("--print-config", o.print_config, "Print the resolved config and exit");
    cmd->add_flag("-q,--quiet", o.quiet, "No per-run progress on stderr");
}

// single-power commands use the first entry of --power-dbm
rismse::SystemConfig resolve(const Overrides& o, bool sweep)
{
    rismse::SystemConfig c = o.config_path.empty() ? rismse::SystemConfig{} : rismse::load_config(o.config_path);
    if (o.seed)
        c.seed = *o.seed;
    if (o.trials)
        c.trials = *o.trials;
    if (o.node_budget)
        c.sesd_node_budget = *o.node_budget;
    if (!o.powers.empty())
    {
        if (sweep)
            c.power_sweep_dbm = o.powers;
        else
            c.P_dbm = o.powers.front();
    }
    if (!o.schemes.empty())
    {
        c.schemes.clear();
        for (const auto& s : o.schemes)
            c.schemes.push_back(rismse::parse_scheme(s));
    }
    c.validate();
    return c;
}

rismse::RunOptions run_options(const Overrides& o)
{
    rismse::RunOptions r;
    r.threads = o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (!o.quiet)
        r.progress = [](const std::string& msg) { std::cerr << msg << '\n'; };
    return r;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete precoding and RIS configuration for RIS-aided MU-MIMO downlinks"};
    app.set_version_flag("--version", rismse::version_string());
    app.require_subcommand(1);

    Overrides conv_opts, sweep_opts, chan_opts;
    auto* converge = app.add_subcommand("converge", "Convergence traces at a single power level");
    add_common(converge, conv_opts);
    auto* sweep = app.add_subcommand("sweep", "Sum rate of every scheme across the power sweep");
    add_common(sweep, sweep_opts);

    std::string plot_in, plot_out = "plots";
    auto* plotdata = app.add_subcommand("plotdata", "Convert a results CSV into x,y,series plot files");
    plotdata->add_option("input", plot_in, "convergence.csv or sweep.csv")->required();
    plotdata->add_option("--out", plot_out, "Output directory");

    std::uint64_t selftest_seed = 1;
    auto* selftest = app.add_subcommand("selftest", "Check the discrete solvers against exhaustive search");
    selftest->add_option("--seed", selftest_seed, "RNG seed");

    std::string chan_format = "csv";
    int chan_trial = 0;
    auto* channels = app.add_subcommand("channels", "Dump one channel realization");
    add_common(channels, chan_opts);
    channels->add_option("--trial", chan_trial, "Trial index");
    channels->add_option("--format", chan_format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try
    {
        if (*selftest)
        {
            const int failures = rismse::run_selftest(std::cout, selftest_seed);
            return failures == 0 ? kOk : kSelftestFailure;
        }
        if (*plotdata)
        {
            for (const auto& p : rismse::emit_plot_data(plot_in, plot_out))
                std::cout << p.string() << '\n';
            return kOk;
        }

        Overrides& o = *converge ? conv_opts : (*sweep ? sweep_opts : chan_opts);
        const rismse::SystemConfig config = resolve(o, sweep->parsed());
        if (o.print_config)
        {
            std::cout << rismse::config_to_json(config) << '\n';
            return kOk;
        }

        if (*converge)
            std::cout << rismse::run_convergence_experiment(config, o.out, run_options(o)).string() << '\n';
        else if (*sweep)
            std::cout << rismse::run_sumrate_sweep(config, o.out, run_options(o)).string() << '\n';
        else
        {
            rismse::Rng rng = rismse::make_stream(config.seed, static_cast<std::uint64_t>(chan_trial), 0);
            const auto ch = rismse::draw_channels(config.geometry, config.K, rng);
            if (chan_format == "csv")
                rismse::write_channels_csv(std::cout, ch);
            else
                rismse::write_channels_binary(std::cout, ch);
        }
        return kOk;
    }
    catch (const rismse::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
