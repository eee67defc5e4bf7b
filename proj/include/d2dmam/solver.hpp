// SPDX-License-Identifier: Apache-2.0
//
// d2dmam: C++ library and simulation CLI for D2D-aided multi-antenna
// multicasting.
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

#ifndef D2DMAM_SOLVER_HPP
#define D2DMAM_SOLVER_HPP

#include <vector>

#include "d2dmam/cxmat.hpp"
#include "d2dmam/types.hpp"

namespace d2dmam {

/// max_{S >= 0, tr(S) <= 1} min_k h_k^H S h_k over the channel columns.
struct MaxMinProblem {
    ComplexMatrix channels;  // M x K_sub, column k = h_k

    explicit MaxMinProblem(ComplexMatrix channels_in);
    explicit MaxMinProblem(const std::vector<ComplexVector>& channel_list);

    Index dimension() const { return channels.rows(); }
    Index user_count() const { return channels.cols(); }
};

struct SolverSettings {
    double tolerance = 1e-6;       // relative objective tolerance
    int max_iterations = 5000;     // total ascent steps across the schedule
    double tau_init_factor = 0.1;  // initial temperature, relative to scale
    double tau_decay = 0.7;        // temperature decay per stage
    double tau_floor_factor = 1e-6;  // temperature floor, relative to scale
};

struct MaxMinSolution {
    HermitianMatrix sigma;     // feasible: PSD, tr <= 1
    double value = 0.0;        // min_k h_k^H sigma h_k
    int iterations = 0;        // ascent steps consumed
    double certified_gap = 0.0;  // softmin-weight dual bound minus value, >= 0
    bool converged = true;     // false when max_iterations was exhausted
};

/// Smoothed projected gradient ascent: min_k is replaced by a log-sum-exp
/// softmin whose temperature anneals from tau_init to tau_floor; each step
/// backtracks along the softmin gradient and projects back onto the
/// spectahedron. The best true objective seen is returned, so the result is
/// feasible and never worse than the I/M start even without convergence.
MaxMinSolution solve_maxmin(const MaxMinProblem& problem,
                            const SolverSettings& settings = SolverSettings{});

/// Multicast rate for a solved covariance at BS transmit SNR rho:
/// log2(1 + rho * value).
double capacity_rate(const MaxMinSolution& solution, double rho);

}  // namespace d2dmam

#endif  // D2DMAM_SOLVER_HPP
