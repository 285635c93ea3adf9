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

#include "rismse/ris.hpp"

#include <cmath>
#include <limits>

namespace rismse {

RisInstance build_ris_instance(const CMatrix& W, const std::vector<CMatrix>& F, const CVector& beta,
                               PhaseAlphabet alphabet, double alpha)
{
    if (F.empty() || static_cast<std::size_t>(W.cols()) != F.size() || beta.size() != W.cols())
        throw std::invalid_argument("build_ris_instance: dimension mismatch");
    const Eigen::Index N = F.front().rows();
    RisInstance inst;
    inst.A = CMatrix::Zero(N, N);
    inst.a = CVector::Zero(N);
    for (std::size_t k = 0; k < F.size(); ++k)
    {
        if (F[k].rows() != N || F[k].cols() != W.rows())
            throw std::invalid_argument("build_ris_instance: dimension mismatch");
        const Eigen::Index kk = static_cast<Eigen::Index>(k);
        const CMatrix T = F[k].conjugate() * W.conjugate(); // N x K, columns F_k^* w_i^*
        inst.A.noalias() += std::norm(beta(kk)) * (T * T.adjoint());
        inst.a += std::conj(beta(kk)) * T.col(kk);
    }
    inst.A = (0.5 * (inst.A + inst.A.adjoint())).eval();
    inst.alphabet = std::move(alphabet);
    inst.alpha = alpha;
    return inst;
}

RisInstance build_ris_instance(const CMatrix& W, const std::vector<CMatrix>& F, PhaseAlphabet alphabet, double alpha)
{
    return build_ris_instance(W, F, CVector::Ones(W.cols()), std::move(alphabet), alpha);
}

double ris_objective(const RisInstance& inst, const CVector& theta)
{
    return (theta.adjoint() * inst.A * theta).value().real() - 2.0 * inst.a.dot(theta).real();
}

AoResult ao_continuous(const RisInstance& inst, const CVector& theta_init, double tol, int max_sweeps)
{
    const Eigen::Index N = inst.size();
    if (theta_init.size() != N)
        throw std::invalid_argument("ao_continuous: theta_init has wrong length");
    for (Eigen::Index n = 0; n < N; ++n)
        if (std::abs(std::abs(theta_init(n)) - 1.0) > 1e-9)
            throw std::invalid_argument("ao_continuous: theta_init must be unit modulus");

    AoResult res;
    res.theta = theta_init;
    // running product A theta keeps one element update O(N)
    CVector At = inst.A * res.theta;
    double prev = ris_objective(inst, res.theta);
    res.objective_trace.push_back(prev);
    while (res.sweeps < max_sweeps)
    {
        for (Eigen::Index n = 0; n < N; ++n)
        {
            const cd z = At(n) - inst.A(n, n) * res.theta(n) - inst.a(n);
            const double mag = std::abs(z);
            if (mag == 0.0)
            {
                res.degenerate = true;
                continue;
            }
            const cd updated = -z / mag;
            const cd delta = updated - res.theta(n);
            if (delta != cd(0.0))
            {
                At += inst.A.col(n) * delta;
                res.theta(n) = updated;
            }
        }
        ++res.sweeps;
        At = inst.A * res.theta; // refresh against drift
        const double obj = ris_objective(inst, res.theta);
        res.objective_trace.push_back(obj);
        const bool negligible = prev - obj < tol;
        prev = obj;
        if (negligible)
            break;
    }
    return res;
}

std::vector<std::size_t> nearest_phase_indices(const CVector& theta, const PhaseAlphabet& alphabet)
{
    std::vector<std::size_t> idx(static_cast<std::size_t>(theta.size()), 0);
    for (Eigen::Index n = 0; n < theta.size(); ++n)
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < alphabet.size(); ++m)
        {
            const double d = std::abs(theta(n) - alphabet.coefficients[m]);
            if (d < best)
            {
                best = d;
                idx[static_cast<std::size_t>(n)] = m;
            }
        }
    }
    return idx;
}

CVector nearest_phase(const CVector& theta, const PhaseAlphabet& alphabet)
{
    return phases_from_indices(nearest_phase_indices(theta, alphabet), alphabet);
}

CVector phases_from_indices(const std::vector<std::size_t>& idx, const PhaseAlphabet& alphabet)
{
    CVector theta(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t n = 0; n < idx.size(); ++n)
        theta(static_cast<Eigen::Index>(n)) = alphabet.coefficients.at(idx[n]);
    return theta;
}

MilsProblem ris_mils_problem(const RisInstance& inst)
{
    if (!(inst.alpha > 0.0))
        throw std::invalid_argument("ris: alpha must be positive");
    CMatrix shifted = inst.A;
    shifted.diagonal().array() += inst.alpha;
    Eigen::LLT<CMatrix> llt(shifted);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("ris: Cholesky of A + alpha I failed (A is not PSD)");
    MilsProblem p;
    p.R = llt.matrixU();
    p.c = llt.matrixL().solve(inst.a);
    p.alphabet = inst.alphabet.coefficients;
    return p;
}

RisSesdResult optimize_ris_sesd(const RisInstance& inst, const CVector& theta_warm, const SesdOptions& options,
                                double ao_tol, const std::optional<std::vector<std::size_t>>& extra_candidate)
{
    MilsProblem p = ris_mils_problem(inst);

    const AoResult ao = ao_continuous(inst, theta_warm, ao_tol);
    std::vector<std::size_t> seed = nearest_phase_indices(ao.theta, inst.alphabet);
    double seed_obj = ris_objective(inst, phases_from_indices(seed, inst.alphabet));
    if (extra_candidate)
    {
        if (extra_candidate->size() != seed.size())
            throw std::invalid_argument("optimize_ris_sesd: candidate has wrong length");
        const double obj = ris_objective(inst, phases_from_indices(*extra_candidate, inst.alphabet));
        if (obj < seed_obj)
        {
            seed = *extra_candidate;
            seed_obj = obj;
        }
    }
    p.incumbent = seed;

    MilsSolution sol = sesd_solve(p, options);
    RisSesdResult res;
    res.theta = sol.argmin;
    res.indices = std::move(sol.indices);
    res.objective = ris_objective(inst, res.theta);
    res.exhausted = sol.exhausted;
    res.nodes = sol.nodes_visited;
    res.incumbent_objective = seed_obj;
    return res;
}

} // namespace rismse
