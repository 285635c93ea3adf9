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

#ifndef RISMSE_PRECODING_HPP
#define RISMSE_PRECODING_HPP

#include <cstdint>
#include <vector>

#include "rismse/alphabets.hpp"
#include "rismse/sesd.hpp"
#include "rismse/types.hpp"

namespace rismse {

/// Block-diagonal stack [diag(g_1); ...; diag(g_K)], KN x N.
CMatrix stack_G(const std::vector<CVector>& g);

/// D = (diag(beta) kron theta^T) G H, K x M.
CMatrix build_D(const CVector& beta, const CVector& theta, const CMatrix& G, const CMatrix& H);

/// Same matrix assembled row by row as beta_k theta^T F_k.
CMatrix build_D(const CVector& beta, const CVector& theta, const std::vector<CMatrix>& F);

/// Rows theta^T F_k (the effective K x M downlink channel).
CMatrix effective_channel(const CVector& theta, const std::vector<CMatrix>& F);

struct ContinuousSolution
{
    CVector w;
    bool ridged = false; // mu = 0 with a rank-deficient D, solved with a tiny ridge
};

/// (D^H D + mu I)^{-1} d_k^*
ContinuousSolution solve_subproblem_continuous(const CMatrix& D, int k, double mu);

struct DiscreteSolution
{
    CVector w;
    std::vector<std::size_t> indices; // into QuantizationAlphabet::complex_points()
    double objective = 0.0;           // w^H (D^H D + mu I) w - 2 Re(d_k^T w)
    bool exhausted = true;
    bool ridged = false;
    std::uint64_t nodes = 0;
};

/// Exact per-user minimizer over the fronthaul alphabet at a fixed multiplier,
/// via Cholesky of D^H D + mu I and sphere decoding seeded with Q(w_hat).
DiscreteSolution solve_subproblem_discrete(const CMatrix& D, int k, double mu, const QuantizationAlphabet& alphabet,
                                           const SesdOptions& options = {});

/// Sum over users of w_k^H D^H D w_k - 2 Re(d_k^T w_k): the precoding part of the sum MSE.
double precoding_objective(const CMatrix& D, const CMatrix& W);

enum class PrecodingMethod
{
    Sesd,               // exact discrete sub-problems
    QuantizedContinuous // Q(.) applied to the continuous solution
};

struct PrecodingInstance
{
    CMatrix D;
    double power_budget = 1.0;
    QuantizationAlphabet alphabet;
    double power_tol = 1e-3; // absolute, watts
    double mu_start = 1.0;
};

struct BisectionStep
{
    double mu = 0.0;
    double power = 0.0;
    double objective = 0.0;  // precoding_objective of the iterate
    double lagrangian = 0.0; // objective + mu (power - P)
    bool feasible = false;
};

struct PrecodingResult
{
    CMatrix W;
    double mu = 0.0;
    double power = 0.0;
    std::vector<double> per_user_objectives;
    std::vector<bool> exhausted_flags;
    std::vector<BisectionStep> steps;
    std::uint64_t nodes = 0;
    bool ridged = false;
    bool power_tolerance_met = false;
};

/// Bisection on the power multiplier. Returns the feasible iterate with the
/// lowest precoding objective among all iterates evaluated.
PrecodingResult optimize_precoding(const PrecodingInstance& instance, PrecodingMethod method,
                                   const SesdOptions& options = {});

} // namespace rismse

#endif
