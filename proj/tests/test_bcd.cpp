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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rismse/bcd.hpp"
#include "rismse/precoding.hpp"
#include "test_util.hpp"

using namespace rismse;
using testutil::randn;

namespace {

SystemConfig small_config()
{
    SystemConfig c;
    c.geometry.N_H = 4;
    c.geometry.N_V = 2;
    c.K = 2;
    c.geometry.M = 2;
    c.trials = 1;
    c.P_dbm = 45.0; // a small surface needs more power for a usable SNR
    return c;
}

ChannelRealization small_channels(const SystemConfig& c, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0, 0);
    return draw_channels(c.geometry, c.K, rng);
}

} // namespace

TEST_CASE("receiver gain of a scalar link")
{
    const CVector theta = CVector::Ones(1);
    const CMatrix F = CMatrix::Ones(1, 1);
    const CMatrix W = CMatrix::Ones(1, 1);
    CHECK(std::abs(receiver_gain(theta, F, W, 0, 1.0) - cd(0.5, 0)) < 1e-15);
    CHECK(std::abs(receiver_gain(theta, F, W, 0, 1e12)) < 1e-11);
    CHECK_THROWS_AS(receiver_gain(theta, F, W, 0, 0.0), std::invalid_argument);

    CHECK(mse_user(theta, F, W, 0, cd(0, 0), 1.0) == 1.0);
    CHECK(mse_user(theta, F, CMatrix::Zero(1, 1), 0, cd(0, 0), 1.0) == 1.0);
    CHECK(sinr_user(theta, F, W, 0, 1.0) == doctest::Approx(1.0));
    CHECK(sum_rate(theta, {F}, W, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("zero interference SINR")
{
    // two users on orthogonal effective channels
    CMatrix F1 = CMatrix::Zero(1, 2), F2 = CMatrix::Zero(1, 2);
    F1(0, 0) = 1.0;
    F2(0, 1) = 2.0;
    const CMatrix W = CMatrix::Identity(2, 2) * 0.5;
    const CVector theta = CVector::Ones(1);
    CHECK(sinr_user(theta, F2, W, 1, 0.1) == doctest::Approx(1.0 / 0.1));
}

TEST_CASE("optimal gain identities")
{
    Rng rng = make_stream(7, 0, 0);
    for (int t = 0; t < 30; ++t)
    {
        const int N = 6, M = 3, K = 3;
        std::vector<CMatrix> F;
        for (int k = 0; k < K; ++k)
            F.push_back(randn(N, M, rng));
        const CMatrix W = randn(M, K, rng) * 0.3;
        CVector theta(N);
        for (int n = 0; n < N; ++n)
            theta(n) = std::polar(1.0, uniform(rng, -M_PI, M_PI));
        const double N0 = 0.05 + 0.1 * t;
        const CVector beta = optimal_gains(theta, F, W, N0);
        for (int k = 0; k < K; ++k)
        {
            const double e = mse_user(theta, F[k], W, k, beta(k), N0);
            const double sinr = sinr_user(theta, F[k], W, k, N0);
            CHECK(std::abs(e - 1.0 / (1.0 + sinr)) <= 1e-10);
            CHECK(std::abs(1.0 / e - 1.0 - sinr) <= 1e-9 * std::max(1.0, sinr));
            for (cd dir : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1)})
                CHECK(mse_user(theta, F[k], W, k, beta(k) + 1e-4 * dir, N0) > e);
        }
    }
}

TEST_CASE("regularized zero forcing")
{
    const CMatrix I = CMatrix::Identity(3, 3);
    const double P = 2.0, N0 = 0.1;
    CHECK(rzf_unscaled(I, P, N0).isApprox(I / (1.0 + 3 * N0 / P)));

    Rng rng = make_stream(8, 0, 0);
    std::vector<CMatrix> F{randn(5, 4, rng)};
    const CVector theta = CVector::Ones(5);
    const CMatrix W = rzf_init(theta, F, P, N0);
    CHECK(W.squaredNorm() == doctest::Approx(P).epsilon(1e-12));
    // single user: matched filter direction
    const CVector h = (theta.transpose() * F[0]).transpose();
    const CVector mrt = h.conjugate().normalized();
    CHECK(std::abs(std::abs(mrt.dot(W.col(0).normalized())) - 1.0) < 1e-12);
    CHECK_THROWS_AS(rzf_init(theta, F, 0.0, N0), std::invalid_argument);
}

TEST_CASE("a huge threshold stops after one iteration")
{
    SystemConfig c = small_config();
    c.eps_outer = 10.0;
    const auto ch = small_channels(c, 1);
    Rng rng = make_stream(1, 0, 1);
    const auto st = run_bcd(c, ch, BenchmarkScheme::SesdBoth, rng);
    CHECK(st.iteration == 1);
    CHECK(st.converged);
    CHECK(st.trace.size() == 1);
}

TEST_CASE("iteration cap flags non-convergence")
{
    SystemConfig c = small_config();
    c.eps_outer = 1e-300;
    c.max_iters = 1;
    const auto ch = small_channels(c, 2);
    Rng rng = make_stream(2, 0, 1);
    const auto st = run_bcd(c, ch, BenchmarkScheme::NoSesd, rng);
    CHECK(st.iteration == 1);
    CHECK(st.trace.size() == 1);
    CHECK(st.converged == (st.trace[0].sum_mse == st.initial_sum_mse));
}

TEST_CASE("every iterate is feasible and the exact sub-steps descend")
{
    SystemConfig c = small_config();
    const BcdSettings s = make_settings(c);
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
        for (BenchmarkScheme scheme : kAllSchemes)
        {
            const auto ch = small_channels(c, seed);
            Rng rng = make_stream(seed, 0, 1);
            const CVector theta0 = random_phases(c.N(), s.phases, rng);
            const auto st = run_bcd(s, ch, scheme, theta0);
            CHECK(st.W.squaredNorm() <= s.P);
            for (Eigen::Index i = 0; i < st.W.size(); ++i)
                CHECK(quantize(st.W(i), s.quantizer) == st.W(i));
            for (Eigen::Index n = 0; n < st.theta.size(); ++n)
                CHECK(std::abs(st.theta(n).imag()) == 0.0);
            for (const auto& it : st.trace)
            {
                CHECK(it.sum_mse <= it.mse_after_ris + 1e-9);
                if (it.ris_exhausted && (scheme == BenchmarkScheme::SesdBoth || scheme == BenchmarkScheme::SesdRisOnly))
                    CHECK(it.mse_after_ris <= it.mse_after_precoding + 1e-9);
                for (std::size_t k = 0; k < it.user_mse.size(); ++k)
                {
                    CHECK(it.user_mse[k] >= 0.0);
                    CHECK(std::abs(it.user_mse[k] - 1.0 / (1.0 + it.user_sinr[k])) <= 1e-10);
                }
            }
        }
}

TEST_CASE("runs are reproducible")
{
    SystemConfig c = small_config();
    const auto ch = small_channels(c, 3);
    Rng a = make_stream(3, 0, 1), b = make_stream(3, 0, 1);
    const auto x = run_bcd(c, ch, BenchmarkScheme::SesdBoth, a);
    const auto y = run_bcd(c, ch, BenchmarkScheme::SesdBoth, b);
    REQUIRE(x.trace.size() == y.trace.size());
    for (std::size_t i = 0; i < x.trace.size(); ++i)
        CHECK(x.trace[i].sum_mse == y.trace[i].sum_mse);
    CHECK(x.W == y.W);
    CHECK(x.theta == y.theta);
}

TEST_CASE("keeping the current configuration makes the RIS step monotone")
{
    SystemConfig c = small_config();
    c.geometry.N_H = 5;
    c.geometry.N_V = 4;
    c.sesd_node_budget = 200;
    c.ris_keep_current = true;
    const BcdSettings s = make_settings(c);
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
    {
        const auto ch = small_channels(c, seed);
        Rng rng = make_stream(seed, 0, 1);
        const auto st = run_bcd(s, ch, BenchmarkScheme::SesdBoth, random_phases(c.N(), s.phases, rng));
        for (const auto& it : st.trace)
            CHECK(it.mse_after_ris <= it.mse_after_precoding + 1e-9);
    }
}
