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

#include "rismse/sesd.hpp"
#include "test_util.hpp"

using namespace rismse;
using testutil::randn;
using testutil::well_conditioned_upper;

namespace {

const std::vector<cd> kQpsk{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

MilsProblem random_problem(Eigen::Index n, Rng& rng, const std::vector<cd>& alphabet = kQpsk)
{
    MilsProblem p;
    p.R = well_conditioned_upper(n, rng);
    p.c = 1.5 * randn(n, 1, rng);
    p.alphabet = alphabet;
    return p;
}

CVector point(const std::vector<std::size_t>& idx, const std::vector<cd>& alphabet)
{
    CVector x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        x(static_cast<Eigen::Index>(i)) = alphabet[idx[i]];
    return x;
}

} // namespace

TEST_CASE("identity R reduces to per-entry nearest point")
{
    MilsProblem p;
    p.R = CMatrix::Identity(2, 2);
    p.c = CVector(2);
    p.c << cd(0.6, 0.4), cd(-0.2, -0.9);
    p.alphabet = {{0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}};
    const auto s = sesd_solve(p);
    CHECK(s.exhausted);
    CHECK(s.argmin(0) == cd(0.5, 0.5));
    CHECK(s.argmin(1) == cd(-0.5, -0.5));
}

TEST_CASE("singleton alphabet")
{
    Rng rng = make_stream(3, 0, 0);
    MilsProblem p = random_problem(5, rng, {cd(0.3, -0.1)});
    const auto s = sesd_solve(p);
    for (Eigen::Index i = 0; i < 5; ++i)
        CHECK(s.argmin(i) == cd(0.3, -0.1));
    CHECK(s.objective == doctest::Approx(mils_objective(p.R, p.c, s.argmin)));
}

TEST_CASE("one-dimensional brute force")
{
    MilsProblem p;
    p.R = CMatrix::Identity(1, 1);
    p.c = CVector::Constant(1, cd(0.3, 0));
    p.alphabet = {{1, 0}, {-1, 0}};
    const auto b = brute_force_mils(p);
    CHECK(b.argmin(0) == cd(1, 0));
    CHECK(b.objective == doctest::Approx(0.49));
}

TEST_CASE("exact ties resolve identically in both solvers")
{
    MilsProblem p;
    p.R = CMatrix::Identity(2, 2);
    p.c = CVector::Zero(2);
    p.alphabet = {{1, 0}, {-1, 0}};
    const auto s = sesd_solve(p);
    const auto b = brute_force_mils(p);
    CHECK(s.indices == b.indices);
    CHECK(s.indices == std::vector<std::size_t>{0, 0});

    // tie between two points differing only in the first layer
    p.c << cd(0, 0), cd(1, 0);
    CHECK(sesd_solve(p).indices == brute_force_mils(p).indices);
}

TEST_CASE("lexicographic order compares the last layer first")
{
    CHECK(lexicographically_smaller({1, 0}, {0, 1}));
    CHECK_FALSE(lexicographically_smaller({0, 1}, {1, 0}));
    CHECK_FALSE(lexicographically_smaller({0, 0}, {0, 0}));
}

TEST_CASE("matches brute force on random 4x4 instances")
{
    Rng rng = make_stream(11, 0, 0);
    for (int t = 0; t < 50; ++t)
    {
        MilsProblem p = random_problem(4, rng);
        for (Eigen::Index i = 0; i < 4; ++i)
            p.R(i, i) /= std::abs(p.R(i, i));
        const auto s = sesd_solve(p);
        const auto b = brute_force_mils(p);
        REQUIRE(s.exhausted);
        CHECK(s.indices == b.indices);
        CHECK(std::abs(s.objective - b.objective) < 1e-9);
    }
}

TEST_CASE("reported objective is the recomputed residual")
{
    Rng rng = make_stream(12, 0, 0);
    for (int t = 0; t < 20; ++t)
    {
        const auto p = random_problem(6, rng);
        const auto s = sesd_solve(p);
        const double direct = (p.c - p.R * s.argmin).squaredNorm();
        CHECK(std::abs(s.objective - direct) <= 1e-10 * std::max(1.0, direct));
        CHECK(s.argmin.isApprox(point(s.indices, p.alphabet)));
    }
}

TEST_CASE("sphere decoding never loses to the Babai point")
{
    Rng rng = make_stream(13, 0, 0);
    for (int t = 0; t < 100; ++t)
    {
        const auto p = random_problem(2 + t % 5, rng);
        CHECK(sesd_solve(p).objective <= babai_point(p).objective + 1e-12);
    }
}

TEST_CASE("an incumbent never changes the answer and never costs nodes")
{
    Rng rng = make_stream(14, 0, 0);
    for (int t = 0; t < 100; ++t)
    {
        auto p = random_problem(6, rng);
        const auto free = sesd_solve(p);
        std::vector<std::size_t> inc(6);
        for (auto& v : inc)
            v = static_cast<std::size_t>(uniform(rng, 0.0, 3.999));
        p.incumbent = inc;
        const auto seeded = sesd_solve(p);
        CHECK(seeded.indices == free.indices);
        CHECK(seeded.nodes_visited <= free.nodes_visited);
    }
}

TEST_CASE("Schnorr-Euchner ordering visits no more nodes than natural order")
{
    Rng rng = make_stream(15, 0, 0);
    std::uint64_t se_total = 0, nat_total = 0;
    int se_worse = 0;
    for (int t = 0; t < 150; ++t)
    {
        const auto p = random_problem(6, rng);
        const auto se = sesd_solve(p, {std::nullopt, SymbolOrder::SchnorrEuchner});
        const auto nat = sesd_solve(p, {std::nullopt, SymbolOrder::Natural});
        CHECK(se.indices == nat.indices);
        se_total += se.nodes_visited;
        nat_total += nat.nodes_visited;
        se_worse += se.nodes_visited > nat.nodes_visited ? 1 : 0;
    }
    CHECK(se_total < nat_total);
    CHECK(se_worse < 15);
}

TEST_CASE("node budget returns a flagged feasible point")
{
    Rng rng = make_stream(16, 0, 0);
    const auto p = random_problem(6, rng);
    const auto full = sesd_solve(p);
    REQUIRE(full.nodes_visited > 10);
    const auto cut = sesd_solve(p, {std::uint64_t{5}, SymbolOrder::SchnorrEuchner});
    CHECK_FALSE(cut.exhausted);
    CHECK(cut.nodes_visited <= 6);
    CHECK(cut.indices.size() == 6);
    CHECK(cut.objective >= full.objective - 1e-12);
    CHECK(cut.objective == doctest::Approx(mils_objective(p.R, p.c, cut.argmin)));
}

TEST_CASE("malformed problems are rejected")
{
    Rng rng = make_stream(17, 0, 0);
    auto p = random_problem(3, rng);

    auto zero_diag = p;
    zero_diag.R(1, 1) = 0.0;
    CHECK_THROWS_AS(sesd_solve(zero_diag), std::invalid_argument);

    auto lower = p;
    lower.R(2, 0) = 1.0;
    CHECK_THROWS_AS(sesd_solve(lower), std::invalid_argument);

    auto empty = p;
    empty.alphabet.clear();
    CHECK_THROWS_AS(sesd_solve(empty), std::invalid_argument);

    auto bad_inc = p;
    bad_inc.incumbent = std::vector<std::size_t>{0, 9, 0};
    CHECK_THROWS_AS(sesd_solve(bad_inc), std::invalid_argument);

    CHECK_THROWS_AS(sesd_solve(p, {std::uint64_t{0}, SymbolOrder::SchnorrEuchner}), std::invalid_argument);

    auto huge = random_problem(12, rng);
    CHECK_THROWS_AS(brute_force_mils(huge), std::invalid_argument);
}
