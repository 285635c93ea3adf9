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

#include "rismse/channel.hpp"

#include <algorithm>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "rismse/quadrature.hpp"

namespace rismse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what)
{
    if (!ok)
        throw std::invalid_argument(std::string("geometry: ") + what);
}

template <typename T>
void put_le(std::ostream& out, T value)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

} // namespace

void GeometryConfig::validate() const
{
    require(M >= 1 && N_H >= 1 && N_V >= 1, "array dimensions must be positive");
    require(bs_spacing > 0 && ris_spacing_h > 0 && ris_spacing_v > 0, "spacings must be positive");
    require(angle_std >= 0, "angle_std must be nonnegative");
    require(los_only || rician_kappa > 0, "rician_kappa must be positive");
    require(bs_ris_distance > 0, "bs_ris_distance must be positive");
    require(ue_distance_min > 0 && ue_distance_max >= ue_distance_min, "invalid UE distance range");
    require(ue_az_max >= ue_az_min && ue_el_max >= ue_el_min, "invalid UE angle ranges");
    require(quadrature_order >= 2, "quadrature order must be at least 2");
}

CVector ula_response(int M, double spacing, double angle)
{
    if (M < 1)
        throw std::invalid_argument("ula_response: M must be positive");
    CVector r(M);
    const double step = kTwoPi * spacing * std::sin(angle);
    for (int m = 0; m < M; ++m)
        r(m) = std::polar(1.0, step * m);
    return r;
}

CVector upa_response(int N_H, int N_V, double spacing_h, double spacing_v, double az, double el)
{
    if (N_H < 1 || N_V < 1)
        throw std::invalid_argument("upa_response: dimensions must be positive");
    CVector r(N_H * N_V);
    const double ph = kTwoPi * spacing_h * std::sin(az) * std::cos(el);
    const double pv = kTwoPi * spacing_v * std::sin(el);
    for (int n = 0; n < N_H * N_V; ++n)
        r(n) = std::polar(1.0, ph * (n % N_H) + pv * (n / N_H));
    return r;
}

CMatrix spatial_correlation(const GeometryConfig& geom, double az, double el)
{
    if (geom.quadrature_order < 2)
        throw std::invalid_argument("spatial_correlation: quadrature order must be at least 2");
    if (geom.angle_std < 0)
        throw std::invalid_argument("spatial_correlation: angle_std must be nonnegative");

    const int NH = geom.N_H;
    const int NV = geom.N_V;
    const int N = NH * NV;

    // The entry depends only on the index differences; tabulate those.
    std::vector<double> eta;
    std::vector<double> weight;
    if (geom.angle_std == 0.0)
    {
        eta = {0.0};
        weight = {1.0};
    }
    else
    {
        const QuadratureRule gh = gauss_hermite(geom.quadrature_order);
        for (std::size_t i = 0; i < gh.nodes.size(); ++i)
        {
            eta.push_back(std::sqrt(2.0) * geom.angle_std * gh.nodes[i]);
            weight.push_back(gh.weights[i] / std::sqrt(std::numbers::pi));
        }
    }

    const int WH = 2 * NH - 1;
    const int WV = 2 * NV - 1;
    std::vector<cd> table(static_cast<std::size_t>(WH) * WV, cd(0.0));
    for (std::size_t a = 0; a < eta.size(); ++a)
    {
        const double s_az = std::sin(az + eta[a]);
        for (std::size_t b = 0; b < eta.size(); ++b)
        {
            const double w = weight[a] * weight[b];
            const double e = el + eta[b];
            const double ph = kTwoPi * geom.ris_spacing_h * s_az * std::cos(e);
            const double pv = kTwoPi * geom.ris_spacing_v * std::sin(e);
            for (int dv = -(NV - 1); dv <= NV - 1; ++dv)
                for (int dh = -(NH - 1); dh <= NH - 1; ++dh)
                    table[(dv + NV - 1) * WH + (dh + NH - 1)] += w * std::polar(1.0, ph * dh + pv * dv);
        }
    }

    CMatrix C(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
        {
            const int dh = n % NH - m % NH;
            const int dv = n / NH - m / NH;
            C(n, m) = table[(dv + NV - 1) * WH + (dh + NH - 1)];
        }
    // exact Hermitian symmetry and unit diagonal up to quadrature rounding
    C = (0.5 * (C + C.adjoint())).eval();
    return C;
}

CMatrix correlation_factor(const CMatrix& C)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(C);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("correlation_factor: eigendecomposition failed");
    RVector lambda = es.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
    {
        if (lambda(i) < -1e-8)
            throw std::runtime_error("correlation_factor: correlation matrix has eigenvalue " +
                                     std::to_string(lambda(i)));
        lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
    }
    return es.eigenvectors() * lambda.asDiagonal();
}

double pathloss_db(double distance)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("pathloss_db: distance must be positive");
    return -37.5 - 22.0 * std::log10(distance);
}

CMatrix cascade(const CVector& g, const CMatrix& H)
{
    if (g.size() != H.rows())
        throw std::invalid_argument("cascade: g and H dimensions differ");
    return g.asDiagonal() * H;
}

ChannelGenerator::ChannelGenerator(GeometryConfig geom, int users) : geom_(std::move(geom)), users_(users)
{
    geom_.validate();
    if (users < 1)
        throw std::invalid_argument("ChannelGenerator: at least one user required");
    rho_ = db_to_linear(pathloss_db(geom_.bs_ris_distance));
    const CVector r_ris = upa_response(geom_.N_H, geom_.N_V, geom_.ris_spacing_h, geom_.ris_spacing_v,
                                       geom_.ris_aoa_az, geom_.ris_aoa_el);
    const CVector r_bs = ula_response(geom_.M, geom_.bs_spacing, geom_.bs_aod);
    h_los_ = r_ris * r_bs.transpose();
    if (!geom_.los_only)
        h_factor_ = correlation_factor(spatial_correlation(geom_, geom_.ris_aoa_az, geom_.ris_aoa_el));
}

CMatrix ChannelGenerator::draw_bs_ris(Rng& rng) const
{
    if (geom_.los_only)
        return std::sqrt(rho_) * h_los_;
    const int N = geom_.N();
    CMatrix z(N, geom_.M);
    for (int m = 0; m < geom_.M; ++m)
        for (int n = 0; n < N; ++n)
            z(n, m) = complex_normal(rng);
    const double k = geom_.rician_kappa;
    return std::sqrt(rho_) * (std::sqrt(k / (k + 1.0)) * h_los_ + std::sqrt(1.0 / (k + 1.0)) * (h_factor_ * z));
}

CVector ChannelGenerator::draw_user(Rng& rng, UserPlacement& placement) const
{
    placement.distance = uniform(rng, geom_.ue_distance_min, geom_.ue_distance_max);
    placement.azimuth = uniform(rng, geom_.ue_az_min, geom_.ue_az_max);
    placement.elevation = uniform(rng, geom_.ue_el_min, geom_.ue_el_max);

    const double rho = db_to_linear(pathloss_db(placement.distance));
    const CVector los = upa_response(geom_.N_H, geom_.N_V, geom_.ris_spacing_h, geom_.ris_spacing_v,
                                     placement.azimuth, placement.elevation);
    if (geom_.los_only)
        return std::sqrt(rho) * los;

    const int N = geom_.N();
    CVector z(N);
    for (int n = 0; n < N; ++n)
        z(n) = complex_normal(rng);
    const CMatrix factor = correlation_factor(spatial_correlation(geom_, placement.azimuth, placement.elevation));
    const double k = geom_.rician_kappa;
    return std::sqrt(rho) * (std::sqrt(k / (k + 1.0)) * los + std::sqrt(1.0 / (k + 1.0)) * (factor * z));
}

ChannelRealization ChannelGenerator::draw(Rng& rng) const
{
    ChannelRealization ch;
    ch.H = draw_bs_ris(rng);
    ch.users.resize(users_);
    for (int k = 0; k < users_; ++k)
        ch.g.push_back(draw_user(rng, ch.users[k]));
    for (const auto& g : ch.g)
        ch.F.push_back(cascade(g, ch.H));
    return ch;
}

ChannelRealization draw_channels(const GeometryConfig& geom, int users, Rng& rng)
{
    return ChannelGenerator(geom, users).draw(rng);
}

void write_channels_csv(std::ostream& out, const ChannelRealization& ch)
{
    out.precision(17);
    out << "name,row,col,re,im\n";
    for (Eigen::Index r = 0; r < ch.H.rows(); ++r)
        for (Eigen::Index c = 0; c < ch.H.cols(); ++c)
            out << "H," << r << ',' << c << ',' << ch.H(r, c).real() << ',' << ch.H(r, c).imag() << '\n';
    for (std::size_t k = 0; k < ch.g.size(); ++k)
        for (Eigen::Index n = 0; n < ch.g[k].size(); ++n)
            out << 'g' << k << ',' << n << ",0," << ch.g[k](n).real() << ',' << ch.g[k](n).imag() << '\n';
}

void write_channels_binary(std::ostream& out, const ChannelRealization& ch)
{
    out.write("RISCHAN1", 8);
    put_le(out, static_cast<std::uint32_t>(ch.H.rows()));
    put_le(out, static_cast<std::uint32_t>(ch.H.cols()));
    put_le(out, static_cast<std::uint32_t>(ch.g.size()));
    for (Eigen::Index r = 0; r < ch.H.rows(); ++r)
        for (Eigen::Index c = 0; c < ch.H.cols(); ++c)
        {
            put_le(out, ch.H(r, c).real());
            put_le(out, ch.H(r, c).imag());
        }
    for (const auto& g : ch.g)
        for (Eigen::Index n = 0; n < g.size(); ++n)
        {
            put_le(out, g(n).real());
            put_le(out, g(n).imag());
        }
}

} // namespace rismse
