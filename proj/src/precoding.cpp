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

#include "rismse/precoding.hpp"

#include <cmath>
#include <limits>

namespace rismse {

namespace {

constexpr double kRidge = 1e-12;
constexpr double kMuCap = 1152921504606846976.0; // 2^60
constexpr int kMaxBisection = 200;

struct Factorization
{
    Eigen::LLT<CMatrix> llt;
    bool ridged = false;
};

Factorization factor_normal_matrix(const CMatrix& D, double mu)
{
    if (mu < 0.0)
        throw std::invalid_argument("precoding: mu must be nonnegative");
    const Eigen::Index M = D.cols();
    CMatrix V = D.adjoint() * D;
    V.diagonal().array() += mu;

    Factorization f;
    f.llt.compute(V);
    bool ok = f.llt.info() == Eigen::Success;
    if (ok && mu == 0.0)
    {
        const RVector piv = f.llt.matrixL().toDenseMatrix().diagonal().cwiseAbs2().real();
        ok = piv.minCoeff() > 1e-12 * piv.maxCoeff();
    }
    if (!ok)
    {
        if (mu > 0.0)
            throw std::runtime_error("precoding: D^H D + mu I is not positive definite");
        const double scale = std::max(V.diagonal().real().sum() / static_cast<double>(M), 1e-300);
        V.diagonal().array() += kRidge * scale;
        f.llt.compute(V);
        if (f.llt.info() != Eigen::Success)
            throw std::runtime_error("precoding: Cholesky failed even with ridge");
        f.ridged = true;
    }
    return f;
}

CVector d_conj(const CMatrix& D, int k)
{
    if (k < 0 || k >= D.rows())
        throw std::invalid_argument("precoding: user index out of range");
    return D.row(k).adjoint();
}

struct Iterate
{
    CMatrix W;
    double mu = 0.0;
    double power = 0.0;
    double objective = 0.0;
    std::vector<double> per_user;
    std::vector<bool> exhausted;
    bool ridged = false;
};

} // namespace

CMatrix stack_G(const std::vector<CVector>& g)
{
    if (g.empty())
        throw std::invalid_argument("stack_G: no users");
    const Eigen::Index N = g.front().size();
    CMatrix G = CMatrix::Zero(N * static_cast<Eigen::Index>(g.size()), N);
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        if (g[k].size() != N)
            throw std::invalid_argument("stack_G: inconsistent vector lengths");
        G.block(static_cast<Eigen::Index>(k) * N, 0, N, N) = g[k].asDiagonal();
    }
    return G;
}

CMatrix build_D(const CVector& beta, const CVector& theta, const CMatrix& G, const CMatrix& H)
{
    const Eigen::Index K = beta.size();
    const Eigen::Index N = theta.size();
    if (G.rows() != K * N || G.cols() != N || H.rows() != N)
        throw std::invalid_argument("build_D: dimension mismatch");
    CMatrix selector = CMatrix::Zero(K, K * N);
    for (Eigen::Index k = 0; k < K; ++k)
        selector.block(k, k * N, 1, N) = beta(k) * theta.transpose();
    return selector * G * H;
}

CMatrix build_D(const CVector& beta, const CVector& theta, const std::vector<CMatrix>& F)
{
    if (static_cast<std::size_t>(beta.size()) != F.size())
        throw std::invalid_argument("build_D: beta and F sizes differ");
    CMatrix D = effective_channel(theta, F);
    for (Eigen::Index k = 0; k < D.rows(); ++k)
        D.row(k) *= beta(k);
    return D;
}

CMatrix effective_channel(const CVector& theta, const std::vector<CMatrix>& F)
{
    if (F.empty())
        throw std::invalid_argument("effective_channel: no users");
    CMatrix Ht(static_cast<Eigen::Index>(F.size()), F.front().cols());
    for (std::size_t k = 0; k < F.size(); ++k)
    {
        if (F[k].rows() != theta.size())
            throw std::invalid_argument("effective_channel: dimension mismatch");
        Ht.row(static_cast<Eigen::Index>(k)) = theta.transpose() * F[k];
    }
    return Ht;
}

ContinuousSolution solve_subproblem_continuous(const CMatrix& D, int k, double mu)
{
    const CVector rhs = d_conj(D, k);
    Factorization f = factor_normal_matrix(D, mu);
    return {f.llt.solve(rhs), f.ridged};
}

DiscreteSolution solve_subproblem_discrete(const CMatrix& D, int k, double mu, const QuantizationAlphabet& alphabet,
                                           const SesdOptions& options)
{
    const CVector rhs = d_conj(D, k);
    Factorization f = factor_normal_matrix(D, mu);
    const CVector w_hat = f.llt.solve(rhs);

    MilsProblem problem;
    problem.R = f.llt.matrixU();
    // c = (d^T R^{-1})^H = R^{-H} d^*, and R^H is the lower factor
    problem.c = f.llt.matrixL().solve(rhs);
    problem.alphabet = alphabet.complex_points();
    std::vector<std::size_t> seed(static_cast<std::size_t>(w_hat.size()));
    for (Eigen::Index m = 0; m < w_hat.size(); ++m)
        seed[static_cast<std::size_t>(m)] = quantize_index(w_hat(m), alphabet);
    problem.incumbent = std::move(seed);

    MilsSolution sol = sesd_solve(problem, options);
    DiscreteSolution out;
    out.w = sol.argmin;
    out.indices = std::move(sol.indices);
    out.objective = sol.objective - problem.c.squaredNorm();
    out.exhausted = sol.exhausted;
    out.nodes = sol.nodes_visited;
    out.ridged = f.ridged;
    return out;
}

double precoding_objective(const CMatrix& D, const CMatrix& W)
{
    if (D.cols() != W.rows() || D.rows() != W.cols())
        throw std::invalid_argument("precoding_objective: dimension mismatch");
    double f = (D * W).squaredNorm();
    for (Eigen::Index k = 0; k < D.rows(); ++k)
        f -= 2.0 * (D.row(k) * W.col(k)).value().real();
    return f;
}

PrecodingResult optimize_precoding(const PrecodingInstance& inst, PrecodingMethod method, const SesdOptions& options)
{
    const Eigen::Index K = inst.D.rows();
    const Eigen::Index M = inst.D.cols();
    const double P = inst.power_budget;
    if (!(P > 0.0))
        throw std::invalid_argument("optimize_precoding: power budget must be positive");
    if (inst.alphabet.size() < 2)
        throw std::invalid_argument("optimize_precoding: invalid alphabet");

    PrecodingResult result;
    Iterate best;
    bool have_best = false;

    auto evaluate = [&](double mu) {
        Iterate it;
        it.mu = mu;
        it.W.resize(M, K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const int user = static_cast<int>(k);
            if (method == PrecodingMethod::Sesd)
            {
                DiscreteSolution s = solve_subproblem_discrete(inst.D, user, mu, inst.alphabet, options);
                it.W.col(k) = s.w;
                it.per_user.push_back(s.objective);
                it.exhausted.push_back(s.exhausted);
                it.ridged = it.ridged || s.ridged;
                result.nodes += s.nodes;
            }
            else
            {
                const ContinuousSolution c = solve_subproblem_continuous(inst.D, user, mu);
                CVector w(M);
                for (Eigen::Index m = 0; m < M; ++m)
                    w(m) = quantize(c.w(m), inst.alphabet);
                it.W.col(k) = w;
                const CVector Dw = inst.D * w;
                it.per_user.push_back(Dw.squaredNorm() + mu * w.squaredNorm() -
                                      2.0 * (inst.D.row(k) * w).value().real());
                it.exhausted.push_back(true);
                it.ridged = it.ridged || c.ridged;
            }
        }
        it.power = it.W.squaredNorm();
        it.objective = precoding_objective(inst.D, it.W);
        const bool feasible = it.power <= P;
        result.steps.push_back({mu, it.power, it.objective, it.objective + mu * (it.power - P), feasible});
        if (feasible)
        {
            const double tol = tie_tolerance(best.objective);
            if (!have_best || it.objective < best.objective - tol ||
                (it.objective <= best.objective + tol && it.power > best.power))
            {
                best = it;
                have_best = true;
            }
        }
        return feasible;
    };

    if (!evaluate(0.0))
    {
        double lo = 0.0;
        double hi = inst.mu_start > 0.0 ? inst.mu_start : 1.0;
        while (!evaluate(hi))
        {
            lo = hi;
            hi *= 2.0;
            if (hi > kMuCap)
                throw std::runtime_error("optimize_precoding: no feasible multiplier found (alphabet scale too large?)");
        }
        for (int step = 0; step < kMaxBisection; ++step)
        {
            if (std::abs(best.power - P) <= inst.power_tol)
                break;
            if (hi - lo <= 1e-9 * hi)
                break;
            const double mid = 0.5 * (lo + hi);
            if (evaluate(mid))
                hi = mid;
            else
                lo = mid;
        }
    }

    result.W = std::move(best.W);
    result.mu = best.mu;
    result.power = best.power;
    result.per_user_objectives = std::move(best.per_user);
    result.exhausted_flags = std::move(best.exhausted);
    result.ridged = best.ridged;
    result.power_tolerance_met = std::abs(result.power - P) <= inst.power_tol;
    return result;
}

} // namespace rismse
