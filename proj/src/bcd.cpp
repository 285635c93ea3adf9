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

#include "rismse/bcd.hpp"

#include <cmath>
#include <optional>

#include "rismse/precoding.hpp"
#include "rismse/ris.hpp"

namespace rismse {

namespace {

void check_noise(double N0)
{
    if (!(N0 > 0.0))
        throw std::invalid_argument("noise power must be positive");
}

// h_ki for all i, as a row theta^T F_k W
Eigen::RowVectorXcd link_gains(const CVector& theta, const CMatrix& F_k, const CMatrix& W)
{
    return (theta.transpose() * F_k) * W;
}

bool uses_sesd_precoding(BenchmarkScheme s)
{
    return s == BenchmarkScheme::SesdBoth || s == BenchmarkScheme::SesdPrecodingOnly;
}

bool uses_sesd_ris(BenchmarkScheme s)
{
    return s == BenchmarkScheme::SesdBoth || s == BenchmarkScheme::SesdRisOnly;
}

std::vector<std::size_t> phase_indices(const CVector& theta, const PhaseAlphabet& alphabet)
{
    return nearest_phase_indices(theta, alphabet);
}

} // namespace

cd receiver_gain(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, double N0)
{
    check_noise(N0);
    const auto h = link_gains(theta, F_k, W);
    return std::conj(h(k)) / (h.squaredNorm() + N0);
}

double mse_user(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, cd beta_k, double N0)
{
    const auto h = link_gains(theta, F_k, W);
    const double e = std::norm(beta_k) * (h.squaredNorm() + N0) - 2.0 * (beta_k * h(k)).real() + 1.0;
    return std::max(e, 0.0);
}

double sinr_user(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, double N0)
{
    check_noise(N0);
    const auto h = link_gains(theta, F_k, W);
    const double signal = std::norm(h(k));
    return signal / (h.squaredNorm() - signal + N0);
}

CVector optimal_gains(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, double N0)
{
    CVector beta(static_cast<Eigen::Index>(F.size()));
    for (std::size_t k = 0; k < F.size(); ++k)
        beta(static_cast<Eigen::Index>(k)) = receiver_gain(theta, F[k], W, static_cast<int>(k), N0);
    return beta;
}

std::vector<double> user_mse(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W,
                             const CVector& beta, double N0)
{
    std::vector<double> e;
    for (std::size_t k = 0; k < F.size(); ++k)
        e.push_back(mse_user(theta, F[k], W, static_cast<int>(k), beta(static_cast<Eigen::Index>(k)), N0));
    return e;
}

double sum_mse(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, const CVector& beta,
               double N0)
{
    double total = 0.0;
    for (double e : user_mse(theta, F, W, beta, N0))
        total += e;
    return total;
}

double sum_rate(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, double N0)
{
    double rate = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k)
        rate += std::log2(1.0 + sinr_user(theta, F[k], W, static_cast<int>(k), N0));
    return rate;
}

CMatrix rzf_unscaled(const CMatrix& H_eff, double P, double N0)
{
    check_noise(N0);
    if (!(P > 0.0))
        throw std::invalid_argument("rzf: power must be positive");
    const Eigen::Index K = H_eff.rows();
    CMatrix gram = H_eff * H_eff.adjoint();
    gram.diagonal().array() += static_cast<double>(K) * N0 / P;
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("rzf: regularized Gram matrix is singular");
    // H^H G^{-1} = (G^{-1} H)^H since G is Hermitian
    return llt.solve(H_eff).adjoint();
}

CMatrix rzf_init(const CVector& theta, const std::vector<CMatrix>& F, double P, double N0)
{
    CMatrix W = rzf_unscaled(effective_channel(theta, F), P, N0);
    const double norm2 = W.squaredNorm();
    if (!(norm2 > 0.0))
        throw std::runtime_error("rzf: zero precoder");
    return W * std::sqrt(P / norm2);
}

BcdSettings make_settings(const SystemConfig& config)
{
    config.validate();
    BcdSettings s;
    s.P = config.power_watt();
    s.N0 = config.noise_watt();
    s.quantizer = design_uniform_labels(config.L, config.label_scale());
    s.phases = phase_alphabet(config.b);
    s.alpha = config.alpha;
    s.eps_outer = config.eps_outer;
    s.power_tol = config.power_tol_rel * s.P;
    s.ao_tol = config.ao_tol;
    s.max_iters = config.max_iters;
    s.ris_keep_current = config.ris_keep_current;
    s.sesd.node_budget = config.sesd_node_budget;
    return s;
}

CVector random_phases(int N, const PhaseAlphabet& alphabet, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    CVector theta(N);
    for (int n = 0; n < N; ++n)
        theta(n) = alphabet.coefficients[pick(rng)];
    return theta;
}

SolverState run_bcd(const BcdSettings& s, const ChannelRealization& ch, BenchmarkScheme scheme,
                    const CVector& theta0)
{
    const std::vector<CMatrix>& F = ch.F;
    if (F.empty() || theta0.size() != F.front().rows())
        throw std::invalid_argument("run_bcd: theta0 does not match the channel");

    SolverState st;
    st.scheme = scheme;
    st.theta = theta0;

    // The infinite-resolution RZF start must be quantized to be transmittable.
    const CMatrix W_rzf = rzf_init(st.theta, F, s.P, s.N0);
    st.W = W_rzf.unaryExpr([&](cd v) { return quantize(v, s.quantizer); });
    st.beta = optimal_gains(st.theta, F, st.W, s.N0);
    st.initial_sum_mse = sum_mse(st.theta, F, st.W, st.beta, s.N0);
    st.initial_sum_rate = sum_rate(st.theta, F, st.W, s.N0);

    const PrecodingMethod method =
        uses_sesd_precoding(scheme) ? PrecodingMethod::Sesd : PrecodingMethod::QuantizedContinuous;
    double previous = st.initial_sum_mse;

    for (int l = 1; l <= s.max_iters; ++l)
    {
        IterationRecord rec;
        rec.iteration = l;

        PrecodingInstance pinst;
        pinst.D = build_D(st.beta, st.theta, F);
        pinst.power_budget = s.P;
        pinst.alphabet = s.quantizer;
        pinst.power_tol = s.power_tol;
        const PrecodingResult pres = optimize_precoding(pinst, method, s.sesd);
        st.W = pres.W;
        rec.mu = pres.mu;
        rec.power = pres.power;
        rec.sesd_nodes += pres.nodes;
        if (method == PrecodingMethod::Sesd)
        {
            for (bool done : pres.exhausted_flags)
            {
                rec.precoding_exhausted = rec.precoding_exhausted && done;
                ++st.sesd_solves;
                st.sesd_exhausted += done ? 1 : 0;
            }
        }
        rec.mse_after_precoding = sum_mse(st.theta, F, st.W, st.beta, s.N0);

        const RisInstance rinst = build_ris_instance(st.W, F, st.beta, s.phases, s.alpha);
        if (uses_sesd_ris(scheme))
        {
            std::optional<std::vector<std::size_t>> current;
            if (s.ris_keep_current)
                current = phase_indices(st.theta, s.phases);
            const RisSesdResult r = optimize_ris_sesd(rinst, st.theta, s.sesd, s.ao_tol, current);
            st.theta = r.theta;
            rec.ris_exhausted = r.exhausted;
            rec.sesd_nodes += r.nodes;
            ++st.sesd_solves;
            st.sesd_exhausted += r.exhausted ? 1 : 0;
        }
        else
        {
            const AoResult ao = ao_continuous(rinst, st.theta, s.ao_tol);
            CVector next = nearest_phase(ao.theta, s.phases);
            if (!s.ris_keep_current || ris_objective(rinst, next) < ris_objective(rinst, st.theta))
                st.theta = std::move(next);
        }
        rec.mse_after_ris = sum_mse(st.theta, F, st.W, st.beta, s.N0);

        st.beta = optimal_gains(st.theta, F, st.W, s.N0);
        rec.user_mse = user_mse(st.theta, F, st.W, st.beta, s.N0);
        for (std::size_t k = 0; k < F.size(); ++k)
            rec.user_sinr.push_back(sinr_user(st.theta, F[k], st.W, static_cast<int>(k), s.N0));
        for (double e : rec.user_mse)
            rec.sum_mse += e;
        rec.sum_rate = sum_rate(st.theta, F, st.W, s.N0);
        rec.anomaly = rec.sum_mse > previous + 1e-6;

        const double delta = std::abs(rec.sum_mse - previous);
        previous = rec.sum_mse;
        st.trace.push_back(std::move(rec));
        st.iteration = l;
        if (delta <= s.eps_outer)
        {
            st.converged = true;
            break;
        }
    }
    return st;
}

SolverState run_bcd(const SystemConfig& config, const ChannelRealization& channels, BenchmarkScheme scheme, Rng& rng)
{
    const BcdSettings settings = make_settings(config);
    const CVector theta0 = random_phases(config.N(), settings.phases, rng);
    return run_bcd(settings, channels, scheme, theta0);
}

} // namespace rismse
