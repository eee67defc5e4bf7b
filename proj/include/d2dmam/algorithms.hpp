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

#ifndef D2DMAM_ALGORITHMS_HPP
#define D2DMAM_ALGORITHMS_HPP

#include <vector>

#include "d2dmam/channel.hpp"
#include "d2dmam/cxmat.hpp"
#include "d2dmam/solver.hpp"
#include "d2dmam/types.hpp"

namespace d2dmam {

struct AlgorithmResult {
    HermitianMatrix sigma;    // feasible transmit covariance
    double r = 0.0;           // encoding rate, bits
    double outage_rate = 0.0;  // r for single-phase, r/2 for two-phase
    int iterations = 0;
    std::vector<double> rate_trace;  // r per outer iteration, nondecreasing
    int served_phase1 = 0;    // UEs decoding in phase 1 at (r, sigma)
    bool converged = true;
};

/// Single-phase baseline: serve the ceil((1-eps)K) UEs with the highest
/// channel power gain ||h_k||^2 (ties by lowest index), beam to the subset
/// with the max-min covariance, and transmit at the subset's worst rate.
/// The whole time resource goes to phase 1, so outage_rate = r.
AlgorithmResult baseline(const ChannelSet& channel_set, double epsilon,
                         double rho,
                         const SolverSettings& solver_settings =
                             SolverSettings{});

/// Iterative two-phase algorithm. Starting from the full UE set and rate 0,
/// each outer iteration (1) solves max-min over the current phase-1 set,
/// keeping the previous covariance when the new solve is numerically worse
/// on that subset, (2) maximizes the rate over [previous rate, best phase-1
/// rate in the set], and (3) re-derives the phase-1 set; it stops when the
/// rate or the set stops changing. The rate never decreases, and the final
/// pair stays outage-feasible: if the rate search cannot verify even its
/// lower endpoint under the new covariance, the iteration reverts to the
/// previous (feasible) covariance and terminates. outage_rate = r / 2.
AlgorithmResult d2d_mam(const ChannelSet& channel_set, double epsilon,
                        double rho, double rho_ue,
                        const SolverSettings& solver_settings =
                            SolverSettings{},
                        int max_outer_iterations = 100);

/// UE selection from average power gains only: indices of the
/// ceil((1-eps)K) largest gammas, ties by lowest index, ascending order.
/// Meaningful for isotropic fading where E[h h^H] = gamma I.
std::vector<Index> statistical_selection(const std::vector<double>& gammas,
                                         double epsilon);

}  // namespace d2dmam

#endif  // D2DMAM_ALGORITHMS_HPP
