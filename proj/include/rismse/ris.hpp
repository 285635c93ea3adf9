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

#ifndef RISMSE_RIS_HPP
#define RISMSE_RIS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rismse/alphabets.hpp"
#include "rismse/sesd.hpp"
#include "rismse/types.hpp"

namespace rismse {

/// Quadratic RIS sub-problem: minimize theta^H A theta - 2 Re(a^H theta)
/// over theta in F^N. The alpha I shift only enters the sphere-decoder form.
struct RisInstance
{
    CMatrix A; // N x N Hermitian PSD
    CVector a;
    PhaseAlphabet alphabet;
    double alpha = 1.0;

    Eigen::Index size() const { return a.size(); }
};

/// A = sum_k |beta_k|^2 F_k^* W^* W^T F_k^T, a = sum_k beta_k^* F_k^* w_k^*.
/// With unit gains this is exactly the receiver-agnostic form.
RisInstance build_ris_instance(const CMatrix& W, const std::vector<CMatrix>& F, const CVector& beta,
                               PhaseAlphabet alphabet, double alpha = 1.0);
RisInstance build_ris_instance(const CMatrix& W, const std::vector<CMatrix>& F, PhaseAlphabet alphabet,
                               double alpha = 1.0);

double ris_objective(const RisInstance& instance, const CVector& theta);

struct AoResult
{
    CVector theta;
    int sweeps = 0;
    bool degenerate = false; // some element had a zero update direction and was kept
    std::vector<double> objective_trace; // after each sweep, starting with the initial value
};

/// Cyclic per-element updates theta_n = -z_n/|z_n|, z_n = sum_{m != n} A_nm theta_m - a_n,
/// until a sweep lowers the objective by less than tol.
AoResult ao_continuous(const RisInstance& instance, const CVector& theta_init, double tol = 1e-6,
                       int max_sweeps = 10000);

/// Per element nearest coefficient; ties go to the smallest index.
std::vector<std::size_t> nearest_phase_indices(const CVector& theta, const PhaseAlphabet& alphabet);
CVector nearest_phase(const CVector& theta, const PhaseAlphabet& alphabet);

CVector phases_from_indices(const std::vector<std::size_t>& idx, const PhaseAlphabet& alphabet);

/// Cholesky factor and target of the alpha-shifted problem:
/// A + alpha I = B^H B, b = B^{-H} a.
MilsProblem ris_mils_problem(const RisInstance& instance);

struct RisSesdResult
{
    CVector theta;
    std::vector<std::size_t> indices;
    double objective = 0.0; // ris_objective(theta)
    bool exhausted = true;
    std::uint64_t nodes = 0;
    double incumbent_objective = 0.0;
};

/// Sphere decoding on the alpha-shifted problem. The search is seeded with the
/// better of nearest_phase(ao_continuous(theta_warm)) and the optional extra
/// candidate (both in F^N).
RisSesdResult optimize_ris_sesd(const RisInstance& instance, const CVector& theta_warm,
                                const SesdOptions& options = {}, double ao_tol = 1e-6,
                                const std::optional<std::vector<std::size_t>>& extra_candidate = std::nullopt);

} // namespace rismse

#endif
