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

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "rismse/bcd.hpp"
#include "rismse/ris.hpp"
#include "test_util.hpp"

using namespace rismse;
using testutil::randn;

namespace {

struct Case
{
    std::vector<CMatrix> F;
    CMatrix W;
    CVector beta;
};

Case random_case(int N, int M, int K, Rng& rng)
{
    Case c;
    for (int k = 0; k < K; ++k)
        c.F.push_back(randn(N, M, rng));
    c.W = randn(M, K, rng);
    c.beta = randn(K, 1, rng);
    return c;
}

CVector random_unit(int N, Rng& rng)
{
    CVector t(N);
    for (int n = 0; n < N; ++n)
        t(n) = std::polar(1.0, uniform(rng, -M_PI, M_PI));
    return t;
}

double brute_best(const RisInstance& inst)
{
    double best = INFINITY;
    testutil::enumerate(static_cast<std::size_t>(inst.size()), inst.alphabet.size(),
                        [&](const std::vector<std::size_t>& idx) {
                            best = std::min(best, ris_objective(inst, phases_from_indices(idx, inst.alphabet)));
                        });
    return best;
}

} // namespace

TEST_CASE("instance assembly and the sum-MSE identity")
{
    Rng rng = make_stream(1, 0, 0);
    const auto c = random_case(6, 3, 2, rng);
    const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(2));
    CHECK((inst.A - inst.A.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(inst.A);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);

    const double N0 = 0.3;
    for (int t = 0; t < 10; ++t)
    {
        const CVector theta = random_unit(6, rng);
        double constant = 0.0;
        for (int k = 0; k < 2; ++k)
            constant += std::norm(c.beta(k)) * N0 + 1.0;
        const double mse = sum_mse(theta, c.F, c.W, c.beta, N0);
        CHECK(ris_objective(inst, theta) + constant == doctest::Approx(mse).epsilon(1e-10));
    }

    // unit gains give the receiver-agnostic form
    const auto plain = build_ris_instance(c.W, c.F, phase_alphabet(1));
    const auto ones = build_ris_instance(c.W, c.F, CVector::Ones(2), phase_alphabet(1));
    CHECK((plain.A - ones.A).norm() < 1e-12);
    CHECK((plain.a - ones.a).norm() < 1e-12);
}

TEST_CASE("degenerate instances")
{
    Rng rng = make_stream(2, 0, 0);
    auto c = random_case(5, 2, 1, rng);
    const auto one = build_ris_instance(c.W, c.F, phase_alphabet(1));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(one.A);
    const auto ev = es.eigenvalues();
    CHECK(ev(ev.size() - 2) <= 1e-9 * ev(ev.size() - 1));

    const auto zero = build_ris_instance(CMatrix::Zero(2, 1), c.F, phase_alphabet(1));
    CHECK(zero.A.norm() == 0.0);
    CHECK(zero.a.norm() == 0.0);

    CHECK_THROWS_AS(build_ris_instance(CMatrix::Zero(3, 1), c.F, phase_alphabet(1)), std::invalid_argument);
}

TEST_CASE("rank of A is at most K squared")
{
    Rng rng = make_stream(3, 0, 0);
    for (int K : {1, 2, 3})
    {
        const auto c = random_case(20, 4, K, rng);
        const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(1));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(inst.A);
        const auto ev = es.eigenvalues();
        const double top = ev.maxCoeff();
        int rank = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            rank += ev(i) > 1e-9 * top ? 1 : 0;
        CHECK(rank <= K * K);
    }
}

TEST_CASE("alternating optimization on decoupled problems")
{
    RisInstance inst;
    inst.A = CMatrix::Identity(2, 2);
    inst.a = CVector(2);
    inst.a << cd(0, 1), cd(-1, 0);
    inst.alphabet = phase_alphabet(1);
    const auto r = ao_continuous(inst, CVector::Ones(2));
    CHECK(std::abs(r.theta(0) - cd(0, 1)) < 1e-12);
    CHECK(std::abs(r.theta(1) - cd(-1, 0)) < 1e-12);

    inst.a = CVector::Zero(2);
    CVector start(2);
    start << std::polar(1.0, 0.3), std::polar(1.0, -2.0);
    const auto flat = ao_continuous(inst, start);
    CHECK(flat.theta == start);
    CHECK(flat.sweeps == 1);
    CHECK(flat.degenerate);

    CHECK_THROWS_AS(ao_continuous(inst, CVector::Constant(2, 2.0)), std::invalid_argument);
}

TEST_CASE("alternating optimization never increases the objective")
{
    Rng rng = make_stream(4, 0, 0);
    for (int t = 0; t < 20; ++t)
    {
        const auto c = random_case(12, 3, 3, rng);
        const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(1));
        const auto r = ao_continuous(inst, random_unit(12, rng));
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
            CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-9);
        for (Eigen::Index n = 0; n < 12; ++n)
            CHECK(std::abs(std::abs(r.theta(n)) - 1.0) < 1e-12);
        // each coordinate is at its own optimum
        const CVector z = inst.A * r.theta - inst.A.diagonal().cwiseProduct(r.theta) - inst.a;
        for (Eigen::Index n = 0; n < 12; ++n)
            if (std::abs(z(n)) > 1e-9)
                CHECK(std::abs(r.theta(n) + z(n) / std::abs(z(n))) < 1e-2);
    }
}

TEST_CASE("nearest phase")
{
    const auto f1 = phase_alphabet(1);
    CVector t(3);
    t << std::polar(1.0, M_PI / 3), cd(-1, 0), cd(0, 1);
    const CVector q = nearest_phase(t, f1);
    CHECK(q(0) == cd(1, 0));
    CHECK(q(1) == cd(-1, 0));
    CHECK(q(2) == cd(1, 0)); // tie goes to index 0
    const auto f2 = phase_alphabet(2);
    CHECK(nearest_phase(CVector::Constant(1, std::polar(1.0, 1.4)), f2)(0) == f2.coefficients[1]);
}

TEST_CASE("sphere decoding finds the discrete optimum")
{
    Rng rng = make_stream(5, 0, 0);
    for (int t = 0; t < 25; ++t)
    {
        const int b = t % 5 == 0 ? 2 : 1;
        const int N = b == 2 ? 5 : 10;
        const auto c = random_case(N, 3, 2, rng);
        const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(b));
        const auto r = optimize_ris_sesd(inst, random_unit(N, rng));
        REQUIRE(r.exhausted);
        CHECK(std::abs(r.objective - brute_best(inst)) < 1e-9);
        CHECK(r.objective <= r.incumbent_objective + 1e-12);
        CHECK(r.objective == doctest::Approx(ris_objective(inst, r.theta)));
        for (Eigen::Index n = 0; n < N; ++n)
        {
            const auto& cf = inst.alphabet.coefficients;
            CHECK(std::find(cf.begin(), cf.end(), r.theta(n)) != cf.end());
        }
    }
}

TEST_CASE("regularized residual identity")
{
    Rng rng = make_stream(6, 0, 0);
    const auto c = random_case(8, 3, 3, rng);
    auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(1), 1.7);
    const MilsProblem p = ris_mils_problem(inst);
    for (int t = 0; t < 10; ++t)
    {
        std::vector<std::size_t> idx(8);
        for (auto& v : idx)
            v = static_cast<std::size_t>(uniform(rng, 0.0, 1.999));
        const CVector theta = phases_from_indices(idx, inst.alphabet);
        const double lhs = mils_objective(p.R, p.c, theta) - p.c.squaredNorm() - inst.alpha * 8;
        CHECK(lhs == doctest::Approx(ris_objective(inst, theta)).epsilon(1e-9));
    }
    inst.alpha = 0.0;
    CHECK_THROWS_AS(ris_mils_problem(inst), std::invalid_argument);
}

TEST_CASE("the regularizer does not move the optimum")
{
    Rng rng = make_stream(7, 0, 0);
    for (int t = 0; t < 8; ++t)
    {
        const auto c = random_case(10, 3, 3, rng);
        const CVector warm = random_unit(10, rng);
        std::vector<double> objectives;
        for (double alpha : {0.5, 1.0, 2.0})
        {
            const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(1), alpha);
            const auto r = optimize_ris_sesd(inst, warm);
            REQUIRE(r.exhausted);
            objectives.push_back(r.objective);
        }
        CHECK(std::abs(objectives[0] - objectives[1]) < 1e-9);
        CHECK(std::abs(objectives[2] - objectives[1]) < 1e-9);
    }
}

TEST_CASE("an extra candidate can only help")
{
    Rng rng = make_stream(8, 0, 0);
    const auto c = random_case(30, 3, 3, rng);
    const auto inst = build_ris_instance(c.W, c.F, c.beta, phase_alphabet(1));
    const auto best_guess = optimize_ris_sesd(inst, random_unit(30, rng), {std::uint64_t{2000}});
    const auto r = optimize_ris_sesd(inst, random_unit(30, rng), {std::uint64_t{50}}, 1e-6, best_guess.indices);
    CHECK(r.objective <= best_guess.objective + 1e-12);
}
