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

#include "rismse/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rismse {

using nlohmann::json;

namespace {

struct SchemeName
{
    BenchmarkScheme scheme;
    std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {BenchmarkScheme::SesdBoth, "sesd-both"},
    {BenchmarkScheme::SesdPrecodingOnly, "sesd-precoding"},
    {BenchmarkScheme::SesdRisOnly, "sesd-ris"},
    {BenchmarkScheme::NoSesd, "no-sesd"},
};

void check(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

template <typename T>
void read(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end())
    {
        try
        {
            out = it->get<T>();
        }
        catch (const json::exception& e)
        {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

void read_range(const json& j, const char* key, double& lo, double& hi)
{
    if (auto it = j.find(key); it != j.end())
    {
        check(it->is_array() && it->size() == 2, std::string("config key '") + key + "' must be [min, max]");
        lo = (*it)[0].get<double>();
        hi = (*it)[1].get<double>();
    }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known, const char* where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        bool ok = false;
        for (auto k : known)
            ok = ok || it.key() == k;
        check(ok, std::string("unknown config key '") + it.key() + "' in " + where);
    }
}

json geometry_to_json(const GeometryConfig& g)
{
    return json{{"bs_spacing", g.bs_spacing},
                {"ris_spacing_h", g.ris_spacing_h},
                {"ris_spacing_v", g.ris_spacing_v},
                {"bs_aod", g.bs_aod},
                {"ris_aoa_az", g.ris_aoa_az},
                {"ris_aoa_el", g.ris_aoa_el},
                {"angle_std", g.angle_std},
                {"rician_kappa", g.rician_kappa},
                {"los_only", g.los_only},
                {"bs_ris_distance", g.bs_ris_distance},
                {"ue_distance_range", {g.ue_distance_min, g.ue_distance_max}},
                {"ue_az_range", {g.ue_az_min, g.ue_az_max}},
                {"ue_el_range", {g.ue_el_min, g.ue_el_max}},
                {"quadrature_order", g.quadrature_order}};
}

json to_json_value(const SystemConfig& c)
{
    json schemes = json::array();
    for (auto s : c.schemes)
        schemes.push_back(std::string(to_string(s)));
    json j{{"M", c.geometry.M},
           {"N_H", c.geometry.N_H},
           {"N_V", c.geometry.N_V},
           {"K", c.K},
           {"L", c.L},
           {"b", c.b},
           {"P_dbm", c.P_dbm},
           {"N0_dbm", c.N0_dbm},
           {"alpha", c.alpha},
           {"eps_outer", c.eps_outer},
           {"power_tol_rel", c.power_tol_rel},
           {"ao_tol", c.ao_tol},
           {"max_iters", c.max_iters},
           {"ris_keep_current", c.ris_keep_current},
           {"sesd_node_budget", c.sesd_node_budget},
           {"trials", c.trials},
           {"seed", c.seed},
           {"schemes", schemes},
           {"power_sweep_dbm", c.power_sweep_dbm},
           {"geometry", geometry_to_json(c.geometry)}};
    if (c.alphabet_scale)
        j["alphabet_scale"] = *c.alphabet_scale;
    else
        j["alphabet_scale"] = "auto";
    return j;
}

} // namespace

std::string_view to_string(BenchmarkScheme scheme)
{
    for (const auto& s : kSchemeNames)
        if (s.scheme == scheme)
            return s.name;
    return "unknown";
}

BenchmarkScheme parse_scheme(std::string_view name)
{
    for (const auto& s : kSchemeNames)
        if (s.name == name)
            return s.scheme;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected sesd-both, sesd-precoding, sesd-ris or no-sesd)");
}

double SystemConfig::label_scale() const
{
    if (alphabet_scale)
        return *alphabet_scale;
    return std::sqrt(power_watt() / (2.0 * M() * K));
}

void SystemConfig::validate() const
{
    try
    {
        geometry.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
    check(K >= 1, "K must be positive");
    check(L >= 2 && L % 2 == 0, "L must be even and at least 2");
    check(b >= 1 && b <= 8, "b must be in [1, 8]");
    check(std::isfinite(P_dbm) && std::isfinite(N0_dbm), "P_dbm and N0_dbm must be finite");
    check(!alphabet_scale || *alphabet_scale > 0, "alphabet_scale must be positive");
    check(alpha > 0, "alpha must be positive");
    check(eps_outer > 0 && power_tol_rel > 0 && ao_tol > 0, "tolerances must be positive");
    check(max_iters >= 1, "max_iters must be at least 1");
    check(sesd_node_budget >= 1, "sesd_node_budget must be at least 1");
    check(trials >= 1, "trials must be at least 1");
    check(!schemes.empty(), "at least one scheme is required");
    for (double p : power_sweep_dbm)
        check(std::isfinite(p), "power sweep values must be finite");
}

SystemConfig config_from_json_text(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check(j.is_object(), "config must be a JSON object");
    reject_unknown(j,
                   {"M", "N_H", "N_V", "K", "L", "b", "P_dbm", "N0_dbm", "alphabet_scale", "alpha", "eps_outer",
                    "power_tol_rel", "ao_tol", "max_iters", "ris_keep_current", "sesd_node_budget", "trials", "seed", "schemes",
                    "power_sweep_dbm", "geometry"},
                   "top level");

    SystemConfig c;
    read(j, "M", c.geometry.M);
    read(j, "N_H", c.geometry.N_H);
    read(j, "N_V", c.geometry.N_V);
    read(j, "K", c.K);
    read(j, "L", c.L);
    read(j, "b", c.b);
    read(j, "P_dbm", c.P_dbm);
    read(j, "N0_dbm", c.N0_dbm);
    read(j, "alpha", c.alpha);
    read(j, "eps_outer", c.eps_outer);
    read(j, "power_tol_rel", c.power_tol_rel);
    read(j, "ao_tol", c.ao_tol);
    read(j, "max_iters", c.max_iters);
    read(j, "ris_keep_current", c.ris_keep_current);
    read(j, "sesd_node_budget", c.sesd_node_budget);
    read(j, "trials", c.trials);
    read(j, "seed", c.seed);
    read(j, "power_sweep_dbm", c.power_sweep_dbm);
    if (auto it = j.find("alphabet_scale"); it != j.end())
    {
        if (it->is_string())
        {
            check(it->get<std::string>() == "auto", "alphabet_scale must be \"auto\" or a number");
            c.alphabet_scale.reset();
        }
        else
        {
            double v = 0;
            read(j, "alphabet_scale", v);
            c.alphabet_scale = v;
        }
    }
    if (auto it = j.find("schemes"); it != j.end())
    {
        check(it->is_array(), "schemes must be an array of names");
        c.schemes.clear();
        for (const auto& s : *it)
            c.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    if (auto it = j.find("geometry"); it != j.end())
    {
        const json& g = *it;
        check(g.is_object(), "geometry must be an object");
        reject_unknown(g,
                       {"bs_spacing", "ris_spacing_h", "ris_spacing_v", "bs_aod", "ris_aoa_az", "ris_aoa_el",
                        "angle_std", "rician_kappa", "los_only", "bs_ris_distance", "ue_distance_range",
                        "ue_az_range", "ue_el_range", "quadrature_order"},
                       "geometry");
        auto& geo = c.geometry;
        read(g, "bs_spacing", geo.bs_spacing);
        read(g, "ris_spacing_h", geo.ris_spacing_h);
        read(g, "ris_spacing_v", geo.ris_spacing_v);
        read(g, "bs_aod", geo.bs_aod);
        read(g, "ris_aoa_az", geo.ris_aoa_az);
        read(g, "ris_aoa_el", geo.ris_aoa_el);
        read(g, "angle_std", geo.angle_std);
        read(g, "rician_kappa", geo.rician_kappa);
        read(g, "los_only", geo.los_only);
        read(g, "bs_ris_distance", geo.bs_ris_distance);
        read_range(g, "ue_distance_range", geo.ue_distance_min, geo.ue_distance_max);
        read_range(g, "ue_az_range", geo.ue_az_min, geo.ue_az_max);
        read_range(g, "ue_el_range", geo.ue_el_min, geo.ue_el_max);
        read(g, "quadrature_order", geo.quadrature_order);
    }
    c.validate();
    return c;
}

SystemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    // A results file written by this tool: reuse the config embedded in its manifest.
    if (!text.empty() && text.front() == '#')
    {
        std::istringstream lines(text);
        std::string line;
        const std::string tag = "# config: ";
        while (std::getline(lines, line) && !line.empty() && line.front() == '#')
            if (line.rfind(tag, 0) == 0)
                return config_from_json_text(line.substr(tag.size()));
        throw ConfigError("'" + path + "' has a manifest without an embedded config");
    }
    return config_from_json_text(text);
}

std::string config_to_json(const SystemConfig& config, int indent)
{
    return to_json_value(config).dump(indent);
}

std::string config_hash(const SystemConfig& config)
{
    const std::string text = to_json_value(config).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace rismse
