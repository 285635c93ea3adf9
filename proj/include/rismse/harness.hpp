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

#ifndef RISMSE_HARNESS_HPP
#define RISMSE_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rismse/bcd.hpp"
#include "rismse/config.hpp"

namespace rismse {

/// One (trial, scheme, power) outcome.
struct ExperimentRecord
{
    int trial = 0;
    BenchmarkScheme scheme = BenchmarkScheme::SesdBoth;
    double P_dbm = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_sum_mse = 0.0;
    double final_sum_rate = 0.0;
    int anomalies = 0;
    double wall_time_s = 0.0; // not part of any deterministic output
    SolverState state;
};

struct RunOptions
{
    int threads = 1;
    std::function<void(const std::string&)> progress; // optional
};

/// Runs every (trial, power, scheme) combination. Channels and the initial RIS
/// configuration depend only on (seed, trial), so all schemes and power levels
/// of a trial see the same draw. Output order is trial-major, then power, then
/// scheme, independent of the thread count.
std::vector<ExperimentRecord> run_trials(const SystemConfig& config, const std::vector<double>& powers_dbm,
                                         const std::vector<BenchmarkScheme>& schemes, const RunOptions& options = {});

/// Comment lines ("# ...") identifying the tool version, command and config.
std::string manifest(const SystemConfig& config, const std::string& command);

std::string version_string();

/// Writes convergence.csv (trace and summary rows) and convergence_traces.json
/// into out_dir at config.P_dbm with the first configured scheme. Returns the CSV path.
std::filesystem::path run_convergence_experiment(const SystemConfig& config, const std::filesystem::path& out_dir,
                                                 const RunOptions& options = {});

/// Writes sweep.csv (one row per power and scheme) and sweep_records.csv.
/// Returns the path of sweep.csv.
std::filesystem::path run_sumrate_sweep(const SystemConfig& config, const std::filesystem::path& out_dir,
                                        const RunOptions& options = {});

void write_convergence_csv(std::ostream& out, const SystemConfig& config,
                           const std::vector<ExperimentRecord>& records);

struct SweepRow
{
    double P_dbm = 0.0;
    BenchmarkScheme scheme = BenchmarkScheme::SesdBoth;
    int trials = 0;
    double mean_sum_rate = 0.0;
    double stderr_sum_rate = 0.0;
    double mean_sum_mse = 0.0;
    double mean_iterations = 0.0;
    double converged_fraction = 0.0;
    double sesd_exhausted_fraction = 0.0; // NaN when the scheme performs no sphere decoding
};

std::vector<SweepRow> aggregate_sweep(const std::vector<ExperimentRecord>& records,
                                      const std::vector<double>& powers_dbm,
                                      const std::vector<BenchmarkScheme>& schemes);

void write_sweep_csv(std::ostream& out, const SystemConfig& config, const std::vector<SweepRow>& rows);

std::string solver_state_json(const SolverState& state, int trial, double P_dbm);

/// Turns a convergence or sweep results CSV into x,y,series files for plotting.
/// Returns the written paths. Throws std::runtime_error on malformed input.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& results_csv,
                                                  const std::filesystem::path& out_dir);

/// Randomized oracle-equivalence checks of the discrete solvers. Returns the
/// number of failed checks and logs one line per suite.
int run_selftest(std::ostream& log, std::uint64_t seed);

} // namespace rismse

#endif
