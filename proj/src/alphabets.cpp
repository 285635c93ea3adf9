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

#include "rismse/alphabets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rismse/quadrature.hpp"

namespace rismse {

std::vector<cd> QuantizationAlphabet::complex_points() const
{
    std::vector<cd> points;
    points.reserve(labels.size() * labels.size());
    for (double re : labels)
        for (double im : labels)
            points.emplace_back(re, im);
    return points;
}

cd QuantizationAlphabet::point(std::size_t index) const
{
    const std::size_t L = labels.size();
    return {labels.at(index / L), labels.at(index % L)};
}

namespace {

constexpr int kCellOrder = 48;
constexpr double kTailSpan = 12.0; // in standard deviations
constexpr int kTailPieces = 6;

double gaussian_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// integral over [lo, hi] of (x - r)^2 phi(x) dx, unit Gaussian
double cell_error(const QuadratureRule& gl, double lo, double hi, double r)
{
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    {
        const double x = mid + half * gl.nodes[i];
        acc += gl.weights[i] * (x - r) * (x - r) * gaussian_pdf(x);
    }
    return half * acc;
}

const QuadratureRule& cell_rule()
{
    static const QuadratureRule rule = gauss_legendre(kCellOrder);
    return rule;
}

// Distortion for unit variance; the positive half-line doubled.
double unit_distortion(int levels, double step)
{
    const auto& gl = cell_rule();
    const int half = levels / 2;
    double total = 0.0;
    for (int i = 0; i < half; ++i)
    {
        const double r = (i + 0.5) * step;
        const double lo = i * step;
        if (i + 1 < half)
        {
            total += cell_error(gl, lo, (i + 1) * step, r);
            continue;
        }
        // overload cell, truncated far in the tail
        const double piece = kTailSpan / kTailPieces;
        for (int p = 0; p < kTailPieces; ++p)
        {
            const double a = std::max(lo, p * piece);
            const double b = (p + 1) * piece;
            if (b > a)
                total += cell_error(gl, a, b, r);
        }
        if (lo > kTailSpan)
            total += cell_error(gl, lo, lo + kTailSpan, r);
    }
    return 2.0 * total;
}

void check_levels(int levels)
{
    if (levels < 2 || levels % 2 != 0)
        throw std::invalid_argument("quantizer level count must be even and >= 2, got " + std::to_string(levels));
}

} // namespace

double uniform_quantizer_distortion(int levels, double step, double sigma)
{
    check_levels(levels);
    if (!(sigma > 0.0))
        throw std::invalid_argument("quantizer design: sigma must be positive");
    if (!(step > 0.0))
        throw std::invalid_argument("quantizer design: step must be positive");
    return sigma * sigma * unit_distortion(levels, step / sigma);
}

QuantizationAlphabet design_uniform_labels(int levels, double sigma)
{
    check_levels(levels);
    if (!(sigma > 0.0))
        throw std::invalid_argument("quantizer design: sigma must be positive");

    // Golden-section search on the unit-variance problem; the optimum scales with sigma.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-6;
    double b = 4.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = unit_distortion(levels, x1);
    double f2 = unit_distortion(levels, x2);
    while (b - a > 1e-8)
    {
        if (f1 <= f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = unit_distortion(levels, x1);
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = unit_distortion(levels, x2);
        }
    }
    const double step = 0.5 * (a + b) * sigma;

    QuantizationAlphabet alphabet;
    alphabet.scale = sigma;
    alphabet.labels.resize(levels);
    const int half = levels / 2;
    for (int i = 0; i < half; ++i)
    {
        const double v = (2 * i + 1) * step / 2.0;
        alphabet.labels[half + i] = v;
        alphabet.labels[half - 1 - i] = -v;
    }
    return alphabet;
}

std::size_t nearest_label_index(double x, std::span<const double> labels)
{
    const auto it = std::lower_bound(labels.begin(), labels.end(), x);
    if (it == labels.begin())
        return 0;
    if (it == labels.end())
        return labels.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - labels.begin());
    const std::size_t lo = hi - 1;
    const double d_lo = x - labels[lo];
    const double d_hi = labels[hi] - x;
    if (d_lo < d_hi)
        return lo;
    if (d_hi < d_lo)
        return hi;
    const double m_lo = std::abs(labels[lo]);
    const double m_hi = std::abs(labels[hi]);
    if (m_lo != m_hi)
        return m_lo < m_hi ? lo : hi;
    return labels[lo] < 0.0 ? lo : hi;
}

std::size_t quantize_index(cd x, const QuantizationAlphabet& alphabet)
{
    const std::span<const double> labels(alphabet.labels);
    return nearest_label_index(x.real(), labels) * labels.size() + nearest_label_index(x.imag(), labels);
}

cd quantize(cd x, const QuantizationAlphabet& alphabet)
{
    const std::span<const double> labels(alphabet.labels);
    return {labels[nearest_label_index(x.real(), labels)], labels[nearest_label_index(x.imag(), labels)]};
}

PhaseAlphabet phase_alphabet(int bits)
{
    if (bits < 1 || bits > 8)
        throw std::invalid_argument("phase_alphabet: bits must be in [1, 8], got " + std::to_string(bits));
    PhaseAlphabet alphabet;
    alphabet.bits = bits;
    const int count = 1 << bits;
    alphabet.coefficients.reserve(count);
    for (int m = 0; m < count; ++m)
    {
        // quarter turns are represented exactly
        if ((4 * m) % count == 0)
        {
            static constexpr cd quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
            alphabet.coefficients.push_back(quarter[(4 * m) / count]);
            continue;
        }
        const double angle = 2.0 * std::numbers::pi * m / count;
        alphabet.coefficients.emplace_back(std::cos(angle), std::sin(angle));
    }
    return alphabet;
}

} // namespace rismse
