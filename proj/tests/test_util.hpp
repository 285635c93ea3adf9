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

// Small helpers shared by the unit tests and the acceptance driver.

#ifndef RISMSE_TESTS_UTIL_HPP
#define RISMSE_TESTS_UTIL_HPP

#include <cmath>
#include <vector>

#include "rismse/random.hpp"
#include "rismse/sesd.hpp"
#include "rismse/types.hpp"

namespace testutil {

using rismse::cd;
using rismse::CMatrix;
using rismse::CVector;

inline CMatrix randn(Eigen::Index rows, Eigen::Index cols, rismse::Rng& rng)
{
    CMatrix X(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            X(i, j) = rismse::complex_normal(rng);
    return X;
}

// upper triangular with |diag| in [0.5, 1.5] and modest off-diagonals
inline CMatrix well_conditioned_upper(Eigen::Index n, rismse::Rng& rng)
{
    CMatrix R = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double mag = rismse::uniform(rng, 0.5, 1.5);
        const double ph = rismse::uniform(rng, -M_PI, M_PI);
        R(i, i) = std::polar(mag, ph);
        for (Eigen::Index j = i + 1; j < n; ++j)
            R(i, j) = 0.5 * rismse::complex_normal(rng);
    }
    return R;
}

// calls f(idx) for every idx in [0, q)^n, first entry fastest
template <class F>
void enumerate(std::size_t n, std::size_t q, F&& f)
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

// standard normal pdf / cdf
inline double npdf(double x) { return std::isinf(x) ? 0.0 : std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double ncdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Closed-form MSE of the midpoint-threshold uniform quantizer for N(0, 1).
inline double uniform_mse_closed_form(int levels, double step)
{
    double total = 0.0;
    for (int i = 0; i < levels; ++i)
    {
        const double l = (i - 0.5 * (levels - 1)) * step;
        const double a = i == 0 ? -INFINITY : l - 0.5 * step;
        const double b = i == levels - 1 ? INFINITY : l + 0.5 * step;
        const double mass = ncdf(b) - ncdf(a);
        const double apa = std::isinf(a) ? 0.0 : a * npdf(a);
        const double bpb = std::isinf(b) ? 0.0 : b * npdf(b);
        total += mass * (1.0 + l * l) + apa - bpb - 2.0 * l * (npdf(a) - npdf(b));
    }
    return total;
}

// Grid search for the distortion-minimizing step, refined twice.
inline double grid_search_step(int levels)
{
    double lo = 1e-3, hi = 4.0, best = lo;
    for (int pass = 0; pass < 3; ++pass)
    {
        const int n = 4000;
        double best_d = INFINITY;
        for (int i = 0; i <= n; ++i)
        {
            const double s = lo + (hi - lo) * i / n;
            const double d = uniform_mse_closed_form(levels, s);
            if (d < best_d)
            {
                best_d = d;
                best = s;
            }
        }
        const double w = (hi - lo) / n;
        lo = std::max(1e-6, best - 2 * w);
        hi = best + 2 * w;
    }
    return best;
}

} // namespace testutil

#endif
