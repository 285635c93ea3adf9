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

#ifndef RISMSE_CHANNEL_HPP
#define RISMSE_CHANNEL_HPP

#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "rismse/random.hpp"
#include "rismse/types.hpp"

namespace rismse {

/// Array sizes and propagation geometry. Spacings are in wavelengths,
/// angles in radians, distances in meters.
struct GeometryConfig
{
    int M = 4;   // BS antennas (ULA)
    int N_H = 8; // RIS columns
    int N_V = 8; // RIS rows
    double bs_spacing = 0.5;
    double ris_spacing_h = 0.25;
    double ris_spacing_v = 0.25;
    double bs_aod = std::numbers::pi / 6;
    double ris_aoa_az = -std::numbers::pi / 3;
    double ris_aoa_el = std::numbers::pi / 6;
    double angle_std = std::numbers::pi / 12;
    double rician_kappa = 3.0;
    bool los_only = false; // kappa -> infinity
    double bs_ris_distance = 20.0;
    double ue_distance_min = 20.0;
    double ue_distance_max = 40.0;
    double ue_az_min = 0.0;
    double ue_az_max = std::numbers::pi / 3;
    double ue_el_min = -std::numbers::pi / 12;
    double ue_el_max = 0.0;
    int quadrature_order = 20;

    int N() const { return N_H * N_V; }
    void validate() const;
};

struct UserPlacement
{
    double distance = 0.0;
    double azimuth = 0.0;
    double elevation = 0.0;
};

struct ChannelRealization
{
    CMatrix H;              // N x M, BS -> RIS
    std::vector<CVector> g; // K vectors of length N, RIS -> UE k
    std::vector<CMatrix> F; // F_k = diag(g_k) H
    std::vector<UserPlacement> users;

    int users_count() const { return static_cast<int>(g.size()); }
};

/// exp(j 2 pi spacing m sin(angle)), m = 0..M-1
CVector ula_response(int M, double spacing, double angle);

/// Planar response; element n (0-based) sits at column n mod N_H, row n / N_H.
CVector upa_response(int N_H, int N_V, double spacing_h, double spacing_v, double az, double el);

/// Local-scattering correlation across RIS elements with Gaussian angular
/// deviations of std geom.angle_std around (az, el), by tensor Gauss-Hermite quadrature.
CMatrix spatial_correlation(const GeometryConfig& geom, double az, double el);

/// F such that F F^H = C, from the eigendecomposition of C. Eigenvalues in
/// [-1e-8, 0) are clamped to zero; anything more negative is an error.
CMatrix correlation_factor(const CMatrix& C);

double pathloss_db(double distance);

CMatrix cascade(const CVector& g, const CMatrix& H);

/// Geometry-dependent parts (LOS component, BS-RIS correlation factor) are
/// computed once; draws then only consume randomness.
class ChannelGenerator
{
public:
    ChannelGenerator(GeometryConfig geom, int users);

    ChannelRealization draw(Rng& rng) const;
    CMatrix draw_bs_ris(Rng& rng) const;

    const GeometryConfig& geometry() const { return geom_; }
    double bs_ris_gain() const { return rho_; }

private:
    CVector draw_user(Rng& rng, UserPlacement& placement) const;

    GeometryConfig geom_;
    int users_;
    double rho_;
    CMatrix h_los_;
    CMatrix h_factor_;
};

ChannelRealization draw_channels(const GeometryConfig& geom, int users, Rng& rng);

/// CSV dump: name,row,col,re,im in row-major order (H, then g_k as g<k>).
void write_channels_csv(std::ostream& out, const ChannelRealization& ch);

/// Binary dump: "RISCHAN1", uint32 N, M, K, then H row-major and each g_k,
/// interleaved re/im float64, all little-endian.
void write_channels_binary(std::ostream& out, const ChannelRealization& ch);

} // namespace rismse

#endif
