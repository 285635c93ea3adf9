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

#ifndef RISMSE_CONFIG_HPP
#define RISMSE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rismse/channel.hpp"
#include "rismse/types.hpp"

namespace rismse {

enum class BenchmarkScheme
{
    SesdBoth,
    SesdPrecodingOnly,
    SesdRisOnly,
    NoSesd
};

inline constexpr BenchmarkScheme kAllSchemes[] = {BenchmarkScheme::SesdBoth, BenchmarkScheme::SesdPrecodingOnly,
                                                  BenchmarkScheme::SesdRisOnly, BenchmarkScheme::NoSesd};

std::string_view to_string(BenchmarkScheme scheme);
BenchmarkScheme parse_scheme(std::string_view name);

struct SystemConfig
{
    GeometryConfig geometry;
    int K = 3;
    int L = 4;
    int b = 1;
    double P_dbm = 30.0;
    double N0_dbm = -100.0;
    std::optional<double> alphabet_scale; // empty: sqrt(P / (2 M K)) per real dimension
    double alpha = 1.0;
    double eps_outer = 1e-4;
    double power_tol_rel = 1e-3;
    double ao_tol = 1e-6;
    int max_iters = 200;
    bool ris_keep_current = false; // RIS step may only move to a configuration no worse than the current one
    std::uint64_t sesd_node_budget = 10'000'000;
    int trials = 20;
    std::uint64_t seed = 1;
    std::vector<BenchmarkScheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
    std::vector<double> power_sweep_dbm{10, 15, 20, 25, 30, 35, 40};

    int M() const { return geometry.M; }
    int N() const { return geometry.N(); }
    double power_watt() const { return dbm_to_watt(P_dbm); }
    double noise_watt() const { return dbm_to_watt(N0_dbm); }
    double label_scale() const;

    /// Throws ConfigError on the first violated constraint.
    void validate() const;
};

/// Structured JSON text. Unknown keys are rejected; missing keys keep defaults.
SystemConfig config_from_json_text(const std::string& text);
SystemConfig load_config(const std::string& path);
std::string config_to_json(const SystemConfig& config, int indent = 2);

/// FNV-1a over the compact JSON form, as 16 hex digits.
std::string config_hash(const SystemConfig& config);

} // namespace rismse

#endif
