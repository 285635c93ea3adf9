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

#ifndef RISMSE_QUADRATURE_HPP
#define RISMSE_QUADRATURE_HPP

#include <vector>

namespace rismse {

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Golub-Welsch rules. Hermite is for the weight exp(-x^2) on the real line,
// Legendre for the unit weight on [-1, 1].
QuadratureRule gauss_hermite(int order);
QuadratureRule gauss_legendre(int order);

} // namespace rismse

#endif
