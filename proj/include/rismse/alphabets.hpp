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

#ifndef RISMSE_ALPHABETS_HPP
#define RISMSE_ALPHABETS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "rismse/types.hpp"

namespace rismse {

/// Real label set of a symmetric, zero-free uniform scalar quantizer. The same
/// labels are used for the real and imaginary parts of a fronthaul sample, so
/// the complex alphabet is the L x L product set.
struct QuantizationAlphabet
{
    std::vector<double> labels; // strictly increasing, symmetric about zero
    double scale = 1.0;         // Gaussian standard deviation the labels were designed for

    std::size_t size() const { return labels.size(); }
    double step() const { return labels.size() > 1 ? labels[1] - labels[0] : 0.0; }

    /// Complex product alphabet; point p*L + q is labels[p] + j*labels[q].
    std::vector<cd> complex_points() const;
    cd point(std::size_t index) const;
};

/// Discrete RIS reflection coefficients exp(j*m*pi/2^(b-1)), m = 0..2^b-1.
struct PhaseAlphabet
{
    int bits = 1;
    std::vector<cd> coefficients;

    std::size_t size() const { return coefficients.size(); }
};

/// Mean squared error of the L-level uniform quantizer with the given step for
/// a zero-mean Gaussian input of standard deviation sigma (Gauss-Legendre per cell).
double uniform_quantizer_distortion(int levels, double step, double sigma);

/// Uniform labels whose step minimizes the Gaussian distortion.
QuantizationAlphabet design_uniform_labels(int levels, double sigma);

/// Index of the label nearest to x. Ties go to the label of smaller
/// magnitude, then to the negative one.
std::size_t nearest_label_index(double x, std::span<const double> labels);

/// Index into QuantizationAlphabet::complex_points() of Q(x).
std::size_t quantize_index(cd x, const QuantizationAlphabet& alphabet);

cd quantize(cd x, const QuantizationAlphabet& alphabet);

PhaseAlphabet phase_alphabet(int bits);

} // namespace rismse

#endif
