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

#include "rismse/sesd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rismse {

namespace {

constexpr double kBruteForceLimit = 1e7;

void validate(const MilsProblem& p)
{
    const auto n = p.c.size();
    if (p.R.rows() != n || p.R.cols() != n)
        throw std::invalid_argument("MILS: R must be n x n with n = size(c)");
    if (p.alphabet.empty())
        throw std::invalid_argument("MILS: empty alphabet");
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (p.R(i, i) == cd(0.0))
            throw std::invalid_argument("MILS: zero diagonal entry in R at layer " + std::to_string(i));
        for (Eigen::Index j = 0; j < i; ++j)
            if (p.R(i, j) != cd(0.0))
                throw std::invalid_argument("MILS: R is not upper triangular");
    }
    if (p.incumbent)
    {
        if (p.incumbent->size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("MILS: incumbent has wrong length");
        for (std::size_t k : *p.incumbent)
            if (k >= p.alphabet.size())
                throw std::invalid_argument("MILS: incumbent entry outside the alphabet");
    }
}

CVector to_symbols(const std::vector<std::size_t>& idx, const std::vector<cd>& alphabet)
{
    CVector x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        x(static_cast<Eigen::Index>(i)) = alphabet[idx[i]];
    return x;
}

// Candidate (objective, indices) beats the incumbent under the shared tie rule.
bool improves(double obj, const std::vector<std::size_t>& x, double best_obj, const std::vector<std::size_t>& best)
{
    if (best.empty())
        return true;
    const double tol = tie_tolerance(best_obj);
    if (obj < best_obj - tol)
        return true;
    if (obj > best_obj + tol)
        return false;
    return lexicographically_smaller(x, best);
}

MilsSolution finish(const MilsProblem& p, std::vector<std::size_t> idx, std::uint64_t nodes, bool exhausted)
{
    MilsSolution s;
    s.argmin = to_symbols(idx, p.alphabet);
    s.objective = mils_objective(p.R, p.c, s.argmin);
    s.indices = std::move(idx);
    s.nodes_visited = nodes;
    s.exhausted = exhausted;
    return s;
}

} // namespace

double tie_tolerance(double objective)
{
    return 1e-12 * std::max(1.0, std::abs(objective));
}

bool lexicographically_smaller(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    for (std::size_t i = a.size(); i-- > 0;)
    {
        if (a[i] != b[i])
            return a[i] < b[i];
    }
    return false;
}

double mils_objective(const CMatrix& R, const CVector& c, const CVector& x)
{
    return (c - R.triangularView<Eigen::Upper>() * x).squaredNorm();
}

MilsSolution sesd_solve(const MilsProblem& p, const SesdOptions& options)
{
    validate(p);
    if (options.node_budget && *options.node_budget == 0)
        throw std::invalid_argument("sesd_solve: node budget must be positive");

    const int n = static_cast<int>(p.dimension());
    const std::size_t q = p.alphabet.size();
    const std::size_t stride = static_cast<std::size_t>(n) + 1;
    const bool se_order = options.order == SymbolOrder::SchnorrEuchner;

    std::vector<std::size_t> best;
    double best_obj = std::numeric_limits<double>::infinity();
    if (p.incumbent)
    {
        best = *p.incumbent;
        best_obj = mils_objective(p.R, p.c, to_symbols(best, p.alphabet));
    }

    // sigma(i, j) = c_i - sum_{k >= j} R_ik x_k, valid for columns above stale[i]
    std::vector<cd> sigma(static_cast<std::size_t>(n) * stride);
    std::vector<int> stale(n, n - 1);
    std::vector<cd> diag(n);
    std::vector<double> diag2(n);
    for (int i = 0; i < n; ++i)
    {
        sigma[i * stride + n] = p.c(i);
        diag[i] = p.R(i, i);
        diag2[i] = std::norm(diag[i]);
    }

    std::vector<double> partial(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> cost(static_cast<std::size_t>(n) * q);
    std::vector<std::size_t> order(static_cast<std::size_t>(n) * q);
    std::vector<std::size_t> pos(n, 0);
    std::vector<std::size_t> x(n, 0);
    std::vector<cd> xs(n);

    auto expand = [&](int i) {
        if (i > 0)
            stale[i - 1] = std::max(stale[i - 1], stale[i]);
        cd* row = &sigma[i * stride];
        for (int j = stale[i]; j > i; --j)
            row[j] = row[j + 1] - p.R(i, j) * xs[j];
        stale[i] = i;

        const cd center = row[i + 1] / diag[i];
        double* ci = &cost[i * q];
        std::size_t* oi = &order[i * q];
        for (std::size_t k = 0; k < q; ++k)
        {
            ci[k] = diag2[i] * std::norm(center - p.alphabet[k]);
            oi[k] = k;
        }
        if (se_order)
        {
            // insertion sort: alphabets are small and ties must keep index order
            for (std::size_t a = 1; a < q; ++a)
            {
                const std::size_t key = oi[a];
                std::size_t b = a;
                while (b > 0 && ci[oi[b - 1]] > ci[key])
                {
                    oi[b] = oi[b - 1];
                    --b;
                }
                oi[b] = key;
            }
        }
        pos[i] = 0;
    };

    std::uint64_t nodes = 0;
    bool exhausted = true;
    int i = n - 1;
    expand(i);
    while (true)
    {
        if (pos[i] >= q)
        {
            if (++i == n)
                break;
            continue;
        }
        if (options.node_budget && nodes >= *options.node_budget)
        {
            exhausted = false;
            break;
        }
        const std::size_t k = order[i * q + pos[i]++];
        ++nodes;
        const double d = partial[i + 1] + cost[i * q + k];
        if (!best.empty() && d > best_obj + tie_tolerance(best_obj))
        {
            if (se_order)
                pos[i] = q; // every remaining symbol at this layer is farther
            continue;
        }
        x[i] = k;
        xs[i] = p.alphabet[k];
        if (i > 0)
        {
            stale[i - 1] = std::max(stale[i - 1], i);
            partial[i] = d;
            expand(--i);
            continue;
        }
        if (improves(d, x, best_obj, best))
        {
            best = x;
            best_obj = d;
        }
    }

    if (best.empty())
    {
        MilsSolution fallback = babai_point(p);
        fallback.nodes_visited = nodes;
        fallback.exhausted = false;
        return fallback;
    }
    return finish(p, std::move(best), nodes, exhausted);
}

MilsSolution brute_force_mils(const MilsProblem& p)
{
    validate(p);
    const std::size_t n = p.dimension();
    const std::size_t q = p.alphabet.size();
    if (std::pow(static_cast<double>(q), static_cast<double>(n)) > kBruteForceLimit)
        throw std::invalid_argument("brute_force_mils: search space exceeds 1e7 candidates");

    std::vector<std::size_t> x(n, 0);
    std::vector<std::size_t> best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::uint64_t evaluated = 0;
    while (true)
    {
        const double obj = mils_objective(p.R, p.c, to_symbols(x, p.alphabet));
        ++evaluated;
        if (improves(obj, x, best_obj, best))
        {
            best = x;
            best_obj = obj;
        }
        std::size_t layer = 0;
        while (layer < n && ++x[layer] == q)
            x[layer++] = 0;
        if (layer == n)
            break;
    }
    return finish(p, std::move(best), evaluated, true);
}

MilsSolution babai_point(const MilsProblem& p)
{
    validate(p);
    const Eigen::Index n = p.c.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    CVector xs(n);
    for (Eigen::Index i = n - 1; i >= 0; --i)
    {
        cd acc = p.c(i);
        for (Eigen::Index j = i + 1; j < n; ++j)
            acc -= p.R(i, j) * xs(j);
        const cd center = acc / p.R(i, i);
        std::size_t pick = 0;
        double pick_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < p.alphabet.size(); ++k)
        {
            const double dist = std::norm(center - p.alphabet[k]);
            if (dist < pick_dist)
            {
                pick = k;
                pick_dist = dist;
            }
        }
        idx[static_cast<std::size_t>(i)] = pick;
        xs(i) = p.alphabet[pick];
    }
    return finish(p, std::move(idx), static_cast<std::uint64_t>(n), false);
}

} // namespace rismse
