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

#include <cmath>
#include <ostream>

#include "rismse/harness.hpp"
#include "rismse/precoding.hpp"
#include "rismse/random.hpp"
#include "rismse/ris.hpp"
#include "rismse/sesd.hpp"

namespace rismse {

namespace {

CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
    CMatrix X(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            X(i, j) = complex_normal(rng);
    return X;
}

// visit every index vector in [0, q)^n
template <class F>
void for_each_index(std::size_t n, std::size_t q, F&& f)
{
    std::vector<std::size_t> idx(n, 0);
    while (true)
    {
        f(idx);
        std::size_t i = 0;
        while (i < n && ++idx[i] == q)
            idx[i++] = 0;
        if (i == n)
            return;
    }
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

int mils_suite(std::ostream& log, Rng& rng)
{
    int failures = 0;
    const std::vector<cd> qpsk{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    for (int t = 0; t < 200; ++t)
    {
        const Eigen::Index n = 2 + t % 5;
        MilsProblem p;
        CMatrix X = random_matrix(n + 2, n, rng);
        p.R = Eigen::HouseholderQR<CMatrix>(X).matrixQR().topRows(n).triangularView<Eigen::Upper>();
        p.c = random_matrix(n, 1, rng) * (1.0 + t % 3);
        p.alphabet = qpsk;
        const auto s = sesd_solve(p);
        const auto b = brute_force_mils(p);
        if (!s.exhausted || s.indices != b.indices || !close(s.objective, b.objective))
            ++failures;
    }
    log << "selftest mils: " << (failures ? "FAIL" : "ok") << " (" << failures << " of 200 mismatched)\n";
    return failures;
}

int precoding_suite(std::ostream& log, Rng& rng)
{
    int failures = 0;
    const QuantizationAlphabet alphabet = design_uniform_labels(2, 0.4);
    const auto pts = alphabet.complex_points();
    for (int t = 0; t < 50; ++t)
    {
        const int M = 2 + t % 3;
        const int K = 1 + t % 3;
        const CMatrix D = random_matrix(K, M, rng);
        const double mu = (t % 4 == 0) ? 0.0 : 0.1 * (t % 7);
        const int k = t % K;
        const auto s = solve_subproblem_discrete(D, k, mu, alphabet);
        const CMatrix Q = D.adjoint() * D + mu * CMatrix::Identity(M, M);
        const CVector d = D.row(k).transpose();
        double best = INFINITY;
        for_each_index(static_cast<std::size_t>(M), pts.size(), [&](const std::vector<std::size_t>& idx) {
            CVector w(M);
            for (int m = 0; m < M; ++m)
                w(m) = pts[idx[m]];
            best = std::min(best, (w.adjoint() * Q * w).real()(0, 0) - 2.0 * (d.transpose() * w)(0, 0).real());
        });
        if (!s.exhausted || std::abs(s.objective - best) > 1e-9 * std::max(1.0, std::abs(best)))
            ++failures;
    }
    log << "selftest precoding: " << (failures ? "FAIL" : "ok") << " (" << failures << " of 50 mismatched)\n";
    return failures;
}

int ris_suite(std::ostream& log, Rng& rng)
{
    int failures = 0;
    const PhaseAlphabet phases = phase_alphabet(1);
    for (int t = 0; t < 30; ++t)
    {
        const int N = 8;
        const int K = 2;
        std::vector<CMatrix> F;
        for (int k = 0; k < K; ++k)
            F.push_back(random_matrix(N, 2, rng));
        const CMatrix W = random_matrix(2, K, rng);
        const RisInstance inst = build_ris_instance(W, F, phases, 1.0);
        const auto s = optimize_ris_sesd(inst, CVector::Ones(N));
        double best = INFINITY;
        for_each_index(N, phases.size(), [&](const std::vector<std::size_t>& idx) {
            best = std::min(best, ris_objective(inst, phases_from_indices(idx, phases)));
        });
        if (!s.exhausted || std::abs(s.objective - best) > 1e-9 * std::max(1.0, std::abs(best)))
            ++failures;
    }
    log << "selftest ris: " << (failures ? "FAIL" : "ok") << " (" << failures << " of 30 mismatched)\n";
    return failures;
}

} // namespace

int run_selftest(std::ostream& log, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0, 7);
    int failures = mils_suite(log, rng);
    failures += precoding_suite(log, rng);
    failures += ris_suite(log, rng);
    return failures;
}

} // namespace rismse
