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

#ifndef RISMSE_SESD_HPP
#define RISMSE_SESD_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rismse/types.hpp"

namespace rismse {

/// min ||c - R x||^2 over x in alphabet^n, R upper triangular with a
/// nonzero diagonal. The incumbent (alphabet indices) seeds the search radius.
struct MilsProblem
{
    CMatrix R;
    CVector c;
    std::vector<cd> alphabet;
    std::optional<std::vector<std::size_t>> incumbent;

    std::size_t dimension() const { return static_cast<std::size_t>(c.size()); }
};

struct MilsSolution
{
    std::vector<std::size_t> indices; // per layer, into the alphabet
    CVector argmin;
    double objective = 0.0;
    std::uint64_t nodes_visited = 0;
    bool exhausted = true;
};

enum class SymbolOrder
{
    SchnorrEuchner, // ascending distance to the layer center
    Natural         // alphabet index order
};

struct SesdOptions
{
    std::optional<std::uint64_t> node_budget;
    SymbolOrder order = SymbolOrder::SchnorrEuchner;
};

/// Depth-first Schnorr-Euchner sphere decoding from layer n-1 down to 0.
/// With exhausted == true the result is a global minimizer; among (numerically)
/// equal objectives the point with the lexicographically smallest index vector,
/// compared from the last layer down, is returned. When the node budget trips
/// the best point found so far (or the incumbent) is returned with exhausted == false.
MilsSolution sesd_solve(const MilsProblem& problem, const SesdOptions& options = {});

/// Exhaustive enumeration with the same tie rule. Limited to 1e7 candidates.
MilsSolution brute_force_mils(const MilsProblem& problem);

/// Greedy layer-by-layer nearest symbol (the Babai point).
MilsSolution babai_point(const MilsProblem& problem);

double mils_objective(const CMatrix& R, const CVector& c, const CVector& x);

/// true if a is preferred over b under the tie rule (last layer compared first)
bool lexicographically_smaller(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Objectives closer than this are treated as equal by both solvers.
double tie_tolerance(double objective);

} // namespace rismse

#endif
