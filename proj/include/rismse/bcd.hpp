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

#ifndef RISMSE_BCD_HPP
#define RISMSE_BCD_HPP

#include <cstdint>
#include <vector>

#include "rismse/alphabets.hpp"
#include "rismse/channel.hpp"
#include "rismse/config.hpp"
#include "rismse/random.hpp"
#include "rismse/sesd.hpp"
#include "rismse/types.hpp"

namespace rismse {

// Per-user link quantities. h_ki = theta^T F_k w_i.

cd receiver_gain(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, double N0);
double mse_user(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, cd beta_k, double N0);
double sinr_user(const CVector& theta, const CMatrix& F_k, const CMatrix& W, int k, double N0);

CVector optimal_gains(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, double N0);
std::vector<double> user_mse(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W,
                             const CVector& beta, double N0);
double sum_mse(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, const CVector& beta,
               double N0);
double sum_rate(const CVector& theta, const std::vector<CMatrix>& F, const CMatrix& W, double N0);

/// H^H (H H^H + (K N0 / P) I)^{-1}, without power normalization.
CMatrix rzf_unscaled(const CMatrix& H_eff, double P, double N0);

/// RZF on the effective channel rows theta^T F_k, scaled so ||W||_F^2 = P.
CMatrix rzf_init(const CVector& theta, const std::vector<CMatrix>& F, double P, double N0);

/// Everything one BCD run needs, resolved from a SystemConfig.
struct BcdSettings
{
    double P = 1.0;
    double N0 = 1e-13;
    QuantizationAlphabet quantizer;
    PhaseAlphabet phases;
    double alpha = 1.0;
    double eps_outer = 1e-4;
    double power_tol = 1e-3;
    double ao_tol = 1e-6;
    int max_iters = 200;
    bool ris_keep_current = false;
    SesdOptions sesd;
};

BcdSettings make_settings(const SystemConfig& config);

struct IterationRecord
{
    int iteration = 0;
    double sum_mse = 0.0;
    double sum_rate = 0.0;
    std::vector<double> user_mse;
    std::vector<double> user_sinr;
    double mse_after_precoding = 0.0; // (W new, theta old, beta old)
    double mse_after_ris = 0.0;       // (W new, theta new, beta old)
    double mu = 0.0;
    double power = 0.0;
    bool precoding_exhausted = true;
    bool ris_exhausted = true;
    std::uint64_t sesd_nodes = 0;
    bool anomaly = false; // sum MSE rose by more than 1e-6 over the previous iteration
};

struct SolverState
{
    BenchmarkScheme scheme = BenchmarkScheme::SesdBoth;
    CMatrix W;
    CVector theta;
    CVector beta;
    int iteration = 0;
    bool converged = false;
    double initial_sum_mse = 0.0;
    double initial_sum_rate = 0.0;
    std::vector<IterationRecord> trace;
    std::uint64_t sesd_solves = 0;
    std::uint64_t sesd_exhausted = 0;

    double final_sum_mse() const { return trace.empty() ? initial_sum_mse : trace.back().sum_mse; }
    double final_sum_rate() const { return trace.empty() ? initial_sum_rate : trace.back().sum_rate; }
};

/// Block coordinate descent: precoding, RIS configuration, receiver gains,
/// until the sum MSE changes by at most eps_outer. theta0 is the initial RIS
/// configuration (entries in the phase alphabet).
SolverState run_bcd(const BcdSettings& settings, const ChannelRealization& channels, BenchmarkScheme scheme,
                    const CVector& theta0);

/// Same, with theta0 drawn uniformly from the phase alphabet using rng.
SolverState run_bcd(const SystemConfig& config, const ChannelRealization& channels, BenchmarkScheme scheme,
                    Rng& rng);

CVector random_phases(int N, const PhaseAlphabet& alphabet, Rng& rng);

} // namespace rismse

#endif
