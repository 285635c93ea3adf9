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

#include "rismse/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rismse {

namespace {

// Symmetric tridiagonal Jacobi matrix with zero diagonal; off-diagonal beta_k.
template <typename OffDiag>
QuadratureRule golub_welsch(int order, double mu0, OffDiag off_diag)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k)
    {
        const double b = off_diag(k);
        J(k - 1, k) = b;
        J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: eigen decomposition failed");

    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i)
    {
        const double v0 = es.eigenvectors()(0, i);
        rule.nodes[i] = es.eigenvalues()(i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

QuadratureRule gauss_hermite(int order)
{
    if (order < 1)
        throw std::invalid_argument("gauss_hermite: order must be positive");
    return golub_welsch(order, std::sqrt(std::numbers::pi),
                        [](int k) { return std::sqrt(0.5 * k); });
}

QuadratureRule gauss_legendre(int order)
{
    if (order < 1)
        throw std::invalid_argument("gauss_legendre: order must be positive");
    return golub_welsch(order, 2.0, [](int k) {
        const double kk = static_cast<double>(k);
        return kk / std::sqrt(4.0 * kk * kk - 1.0);
    });
}

} // namespace rismse
