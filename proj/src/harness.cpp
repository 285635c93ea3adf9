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

#include "rismse/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef RISMSE_VERSION
#define RISMSE_VERSION "0.1.0"
#endif

namespace rismse {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kInitStream = 1;

std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep = ',')
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::nan("");
    std::size_t used = 0;
    double v = 0.0;
    try
    {
        v = std::stod(s, &used);
    }
    catch (const std::exception&)
    {
        throw std::runtime_error("malformed number '" + s + "' in results CSV");
    }
    if (used != s.size())
        throw std::runtime_error("malformed number '" + s + "' in results CSV");
    return v;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string version_string() { return RISMSE_VERSION; }

std::string manifest(const SystemConfig& config, const std::string& command)
{
    std::ostringstream m;
    m << "# rismse " << version_string() << '\n'
      << "# command: " << command << '\n'
      << "# config_hash: " << config_hash(config) << '\n'
      << "# seed: " << config.seed << '\n'
      << "# config: " << config_to_json(config, -1) << '\n';
    return m.str();
}

std::vector<ExperimentRecord> run_trials(const SystemConfig& config, const std::vector<double>& powers_dbm,
                                         const std::vector<BenchmarkScheme>& schemes, const RunOptions& options)
{
    config.validate();
    const ChannelGenerator generator(config.geometry, config.K);

    std::vector<BcdSettings> settings;
    for (double p : powers_dbm)
    {
        SystemConfig c = config;
        c.P_dbm = p;
        settings.push_back(make_settings(c));
    }
    const PhaseAlphabet phases = phase_alphabet(config.b);

    const std::size_t per_trial = powers_dbm.size() * schemes.size();
    std::vector<ExperimentRecord> records(static_cast<std::size_t>(config.trials) * per_trial);
    std::atomic<int> next{0};
    std::mutex log_mutex;
    std::exception_ptr failure;

    auto worker = [&]() {
        while (true)
        {
            const int t = next.fetch_add(1);
            if (t >= config.trials)
                return;
            try
            {
                Rng channel_rng = make_stream(config.seed, static_cast<std::uint64_t>(t), kChannelStream);
                const ChannelRealization ch = generator.draw(channel_rng);
                Rng init_rng = make_stream(config.seed, static_cast<std::uint64_t>(t), kInitStream);
                const CVector theta0 = random_phases(config.N(), phases, init_rng);

                std::size_t slot = static_cast<std::size_t>(t) * per_trial;
                for (std::size_t pi = 0; pi < powers_dbm.size(); ++pi)
                    for (BenchmarkScheme scheme : schemes)
                    {
                        const auto start = std::chrono::steady_clock::now();
                        ExperimentRecord rec;
                        rec.trial = t;
                        rec.scheme = scheme;
                        rec.P_dbm = powers_dbm[pi];
                        rec.state = run_bcd(settings[pi], ch, scheme, theta0);
                        rec.iterations = rec.state.iteration;
                        rec.converged = rec.state.converged;
                        rec.final_sum_mse = rec.state.final_sum_mse();
                        rec.final_sum_rate = rec.state.final_sum_rate();
                        for (const auto& it : rec.state.trace)
                            rec.anomalies += it.anomaly ? 1 : 0;
                        rec.wall_time_s =
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                        if (options.progress)
                        {
                            std::ostringstream msg;
                            msg << "trial " << t << " P=" << rec.P_dbm << " dBm " << to_string(scheme) << ": "
                                << rec.iterations << " it, sum MSE " << rec.final_sum_mse << ", rate "
                                << rec.final_sum_rate << ", " << rec.wall_time_s << " s";
                            std::lock_guard lock(log_mutex);
                            options.progress(msg.str());
                        }
                        records[slot++] = std::move(rec);
                    }
            }
            catch (...)
            {
                std::lock_guard lock(log_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = config.trials;
                return;
            }
        }
    };

    const int threads = std::clamp(options.threads, 1, config.trials);
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return records;
}

void write_convergence_csv(std::ostream& out, const SystemConfig& config, const std::vector<ExperimentRecord>& records)
{
    out << manifest(config, "converge");
    out << "kind,trial,iteration,sum_mse,sum_rate,converged\n";
    for (const auto& rec : records)
        for (const auto& it : rec.state.trace)
            out << "trace," << rec.trial << ',' << it.iteration << ',' << num(it.sum_mse) << ',' << num(it.sum_rate)
                << ",\n";
    for (const auto& rec : records)
        out << "summary," << rec.trial << ',' << rec.iterations << ',' << num(rec.final_sum_mse) << ','
            << num(rec.final_sum_rate) << ',' << (rec.converged ? 1 : 0) << '\n';
}

std::string solver_state_json(const SolverState& st, int trial, double P_dbm)
{
    using nlohmann::json;
    json trace = json::array();
    for (const auto& it : st.trace)
        trace.push_back({{"iteration", it.iteration},
                         {"sum_mse", it.sum_mse},
                         {"sum_rate", it.sum_rate},
                         {"user_mse", it.user_mse},
                         {"user_sinr", it.user_sinr},
                         {"mse_after_precoding", it.mse_after_precoding},
                         {"mse_after_ris", it.mse_after_ris},
                         {"mu", it.mu},
                         {"power", it.power},
                         {"precoding_exhausted", it.precoding_exhausted},
                         {"ris_exhausted", it.ris_exhausted},
                         {"sesd_nodes", it.sesd_nodes},
                         {"anomaly", it.anomaly}});
    json theta = json::array();
    for (Eigen::Index n = 0; n < st.theta.size(); ++n)
        theta.push_back({st.theta(n).real(), st.theta(n).imag()});
    json W = json::array();
    for (Eigen::Index m = 0; m < st.W.rows(); ++m)
    {
        json row = json::array();
        for (Eigen::Index k = 0; k < st.W.cols(); ++k)
            row.push_back({st.W(m, k).real(), st.W(m, k).imag()});
        W.push_back(row);
    }
    json beta = json::array();
    for (Eigen::Index k = 0; k < st.beta.size(); ++k)
        beta.push_back({st.beta(k).real(), st.beta(k).imag()});
    json j{{"trial", trial},
           {"scheme", std::string(to_string(st.scheme))},
           {"P_dbm", P_dbm},
           {"iterations", st.iteration},
           {"converged", st.converged},
           {"initial_sum_mse", st.initial_sum_mse},
           {"initial_sum_rate", st.initial_sum_rate},
           {"sesd_solves", st.sesd_solves},
           {"sesd_exhausted", st.sesd_exhausted},
           {"trace", trace},
           {"W", W},
           {"theta", theta},
           {"beta", beta}};
    return j.dump();
}

fs::path run_convergence_experiment(const SystemConfig& config, const fs::path& out_dir, const RunOptions& options)
{
    config.validate();
    ensure_dir(out_dir);
    const auto records = run_trials(config, {config.P_dbm}, {config.schemes.front()}, options);

    const fs::path csv = out_dir / "convergence.csv";
    {
        auto out = open_output(csv);
        write_convergence_csv(out, config, records);
    }
    auto json_out = open_output(out_dir / "convergence_traces.json");
    json_out << "[\n";
    for (std::size_t i = 0; i < records.size(); ++i)
        json_out << solver_state_json(records[i].state, records[i].trial, records[i].P_dbm)
                 << (i + 1 < records.size() ? ",\n" : "\n");
    json_out << "]\n";
    return csv;
}

std::vector<SweepRow> aggregate_sweep(const std::vector<ExperimentRecord>& records,
                                      const std::vector<double>& powers_dbm,
                                      const std::vector<BenchmarkScheme>& schemes)
{
    std::vector<double> powers = powers_dbm;
    std::sort(powers.begin(), powers.end());
    powers.erase(std::unique(powers.begin(), powers.end()), powers.end());

    std::vector<SweepRow> rows;
    for (double p : powers)
        for (BenchmarkScheme s : schemes)
        {
            SweepRow row;
            row.P_dbm = p;
            row.scheme = s;
            std::vector<double> rates;
            double mse = 0.0, iters = 0.0, conv = 0.0;
            std::uint64_t solves = 0, done = 0;
            for (const auto& r : records)
            {
                if (r.P_dbm != p || r.scheme != s)
                    continue;
                rates.push_back(r.final_sum_rate);
                mse += r.final_sum_mse;
                iters += r.iterations;
                conv += r.converged ? 1.0 : 0.0;
                solves += r.state.sesd_solves;
                done += r.state.sesd_exhausted;
            }
            const double n = static_cast<double>(rates.size());
            row.trials = static_cast<int>(rates.size());
            if (n > 0)
            {
                double mean = 0.0;
                for (double v : rates)
                    mean += v;
                mean /= n;
                double var = 0.0;
                for (double v : rates)
                    var += (v - mean) * (v - mean);
                row.mean_sum_rate = mean;
                row.stderr_sum_rate = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
                row.mean_sum_mse = mse / n;
                row.mean_iterations = iters / n;
                row.converged_fraction = conv / n;
            }
            row.sesd_exhausted_fraction =
                solves > 0 ? static_cast<double>(done) / static_cast<double>(solves) : std::nan("");
            rows.push_back(row);
        }
    return rows;
}

void write_sweep_csv(std::ostream& out, const SystemConfig& config, const std::vector<SweepRow>& rows)
{
    out << manifest(config, "sweep");
    out << "P_dbm,scheme,trials,mean_sum_rate,stderr_sum_rate,mean_sum_mse,mean_iterations,converged_fraction,"
           "sesd_exhausted_fraction\n";
    for (const auto& r : rows)
        out << num(r.P_dbm) << ',' << to_string(r.scheme) << ',' << r.trials << ',' << num(r.mean_sum_rate) << ','
            << num(r.stderr_sum_rate) << ',' << num(r.mean_sum_mse) << ',' << num(r.mean_iterations) << ','
            << num(r.converged_fraction) << ',' << num(r.sesd_exhausted_fraction) << '\n';
}

fs::path run_sumrate_sweep(const SystemConfig& config, const fs::path& out_dir, const RunOptions& options)
{
    config.validate();
    if (config.power_sweep_dbm.empty())
        throw ConfigError("sweep requires at least one power level");
    ensure_dir(out_dir);
    const auto records = run_trials(config, config.power_sweep_dbm, config.schemes, options);

    const fs::path csv = out_dir / "sweep.csv";
    {
        auto out = open_output(csv);
        write_sweep_csv(out, config, aggregate_sweep(records, config.power_sweep_dbm, config.schemes));
    }
    auto rec_out = open_output(out_dir / "sweep_records.csv");
    rec_out << manifest(config, "sweep");
    rec_out << "trial,scheme,P_dbm,iterations,converged,final_sum_mse,final_sum_rate,sesd_solves,sesd_exhausted,"
               "anomalies\n";
    for (const auto& r : records)
        rec_out << r.trial << ',' << to_string(r.scheme) << ',' << num(r.P_dbm) << ',' << r.iterations << ','
                << (r.converged ? 1 : 0) << ',' << num(r.final_sum_mse) << ',' << num(r.final_sum_rate) << ','
                << r.state.sesd_solves << ',' << r.state.sesd_exhausted << ',' << r.anomalies << '\n';
    return csv;
}

std::vector<fs::path> emit_plot_data(const fs::path& results_csv, const fs::path& out_dir)
{
    std::ifstream in(results_csv);
    if (!in)
        throw std::runtime_error("cannot open results file '" + results_csv.string() + "'");

    std::string comments;
    std::string header;
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.front() == '#')
        {
            comments += line + '\n';
            continue;
        }
        header = line;
        break;
    }
    ensure_dir(out_dir);
    std::vector<fs::path> written;
    if (header.empty())
    {
        // nothing recorded yet: header-only files for both figures
        for (const char* name : {"fig2_sum_mse.csv", "fig2_sum_rate.csv"})
        {
            auto out = open_output(out_dir / name);
            out << comments << "x,y,series\n";
            written.push_back(out_dir / name);
        }
        auto out = open_output(out_dir / "fig3_sum_rate.csv");
        out << comments << "x,y,series,y_err\n";
        written.push_back(out_dir / "fig3_sum_rate.csv");
        return written;
    }
    const auto columns = split(header);

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        auto fields = split(line);
        if (fields.size() != columns.size())
            throw std::runtime_error("malformed row in results CSV: '" + line + "'");
        rows.push_back(std::move(fields));
    }

    if (header == "kind,trial,iteration,sum_mse,sum_rate,converged")
    {
        // per-trial traces, carried forward past convergence for the median
        std::map<int, std::vector<std::pair<int, std::pair<double, double>>>> traces;
        for (const auto& r : rows)
        {
            if (r[0] == "trace")
                traces[std::stoi(r[1])].push_back({std::stoi(r[2]), {parse_double(r[3]), parse_double(r[4])}});
            else if (r[0] != "summary")
                throw std::runtime_error("unknown row kind '" + r[0] + "'");
        }
        int last = 0;
        for (auto& [trial, tr] : traces)
        {
            std::sort(tr.begin(), tr.end());
            last = std::max(last, tr.back().first);
        }
        for (int which = 0; which < 2; ++which)
        {
            const fs::path path = out_dir / (which == 0 ? "fig2_sum_mse.csv" : "fig2_sum_rate.csv");
            auto out = open_output(path);
            out << comments << "x,y,series\n";
            for (const auto& [trial, tr] : traces)
                for (const auto& [it, v] : tr)
                    out << it << ',' << num(which == 0 ? v.first : v.second) << ",trial_" << trial << '\n';
            for (int it = 1; it <= last; ++it)
            {
                std::vector<double> vals;
                for (const auto& [trial, tr] : traces)
                {
                    const auto* pick = &tr.front();
                    for (const auto& e : tr)
                        if (e.first <= it)
                            pick = &e;
                    vals.push_back(which == 0 ? pick->second.first : pick->second.second);
                }
                out << it << ',' << num(median(vals)) << ",median\n";
            }
            written.push_back(path);
        }
        return written;
    }

    if (header.rfind("P_dbm,scheme,trials,mean_sum_rate,stderr_sum_rate", 0) == 0)
    {
        std::vector<std::pair<std::string, std::pair<double, std::pair<double, double>>>> pts;
        for (const auto& r : rows)
        {
            parse_scheme(r[1]);
            pts.push_back({r[1], {parse_double(r[0]), {parse_double(r[3]), parse_double(r[4])}}});
        }
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first)
                return static_cast<int>(parse_scheme(a.first)) < static_cast<int>(parse_scheme(b.first));
            return a.second.first < b.second.first;
        });
        const fs::path path = out_dir / "fig3_sum_rate.csv";
        auto out = open_output(path);
        out << comments << "x,y,series,y_err\n";
        for (const auto& [scheme, v] : pts)
            out << num(v.first) << ',' << num(v.second.first) << ',' << scheme << ',' << num(v.second.second) << '\n';
        written.push_back(path);
        return written;
    }

    throw std::runtime_error("unrecognized results header '" + header + "'");
}

} // namespace rismse
