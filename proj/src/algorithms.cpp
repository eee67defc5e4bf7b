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

#include "d2dmam/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "d2dmam/protocol.hpp"

namespace d2dmam {

namespace {

// Indices of the `count` largest scores, ties by lowest index, returned
// ascending.
std::vector<Index> top_indices(const std::vector<double>& scores,
                               int count) {
    std::vector<Index> order(scores.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double sa = scores[static_cast<size_t>(a)];
        const double sb = scores[static_cast<size_t>(b)];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    order.resize(static_cast<size_t>(count));
    std::sort(order.begin(), order.end());
    return order;
}

ComplexMatrix select_columns(const ComplexMatrix& channels,
                             const std::vector<Index>& subset) {
    ComplexMatrix out(channels.rows(), static_cast<Index>(subset.size()));
    for (size_t i = 0; i < subset.size(); ++i) {
        out.col(static_cast<Index>(i)) = channels.col(subset[i]);
    }
    return out;
}

}  // namespace

AlgorithmResult baseline(const ChannelSet& channel_set, double epsilon,
                         double rho, const SolverSettings& solver_settings) {
    const Index k_total = channel_set.downlink.cols();
    const int required = required_success_count(k_total, epsilon);

    std::vector<double> gains(static_cast<size_t>(k_total));
    for (Index k = 0; k < k_total; ++k) {
        gains[static_cast<size_t>(k)] =
            channel_set.downlink.col(k).squaredNorm();
    }
    const std::vector<Index> subset = top_indices(gains, required);
    const ComplexMatrix sub_channels =
        select_columns(channel_set.downlink, subset);

    const MaxMinSolution sol =
        solve_maxmin(MaxMinProblem(sub_channels), solver_settings);

    AlgorithmResult out;
    out.sigma = sol.sigma;
    out.r = rate_bits(rho * sol.value);
    out.outage_rate = out.r;
    out.iterations = 1;
    out.rate_trace = {out.r};
    out.converged = sol.converged;
    const DecodeOutcome oc =
        evaluate(channel_set, out.sigma, out.r, rho, 0.0);
    out.served_phase1 = static_cast<int>(oc.relay_set.size());
    return out;
}

AlgorithmResult d2d_mam(const ChannelSet& channel_set, double epsilon,
                        double rho, double rho_ue,
                        const SolverSettings& solver_settings,
                        int max_outer_iterations) {
    if (max_outer_iterations < 1) {
        throw std::invalid_argument("d2d_mam: max_outer_iterations >= 1");
    }
    const Index k_total = channel_set.downlink.cols();
    const Index m = channel_set.downlink.rows();
    const Tolerances& tol = default_tolerances();

    std::vector<Index> set_prev(static_cast<size_t>(k_total));
    std::iota(set_prev.begin(), set_prev.end(), Index{0});
    double r_prev = 0.0;
    HermitianMatrix sigma_prev(ComplexMatrix::Identity(m, m) / double(m));

    AlgorithmResult out;
    for (int n = 1; n <= max_outer_iterations; ++n) {
        const ComplexMatrix sub =
            select_columns(channel_set.downlink, set_prev);
        const MaxMinSolution sol =
            solve_maxmin(MaxMinProblem(sub), solver_settings);

        // Keep the previous covariance when the fresh solve is worse on the
        // current subset; the rate then cannot decrease between iterations.
        const double min_new = quadratic_forms(sol.sigma, sub).minCoeff();
        const double min_prev = quadratic_forms(sigma_prev, sub).minCoeff();
        HermitianMatrix sigma_n =
            (min_new >= min_prev) ? sol.sigma : sigma_prev;

        // Rate interval: the upper end is the best phase-1 rate inside the
        // current set, so at least one UE always decodes in phase 1.
        const double best_q = quadratic_forms(sigma_n, sub).maxCoeff();
        const double upper = std::max(rate_bits(rho * best_q), r_prev);
        const RateSearchResult rs = constrained_max_rate(
            channel_set, sigma_n, epsilon, rho, rho_ue, r_prev, upper, tol);

        if (!rs.feasible) {
            // Even the previous rate failed verification under sigma_n: a
            // changed relay set can lower phase-2 rates. Revert to the
            // previous covariance, which is feasible at r_prev, and stop.
            const DecodeOutcome oc = evaluate(channel_set, sigma_prev,
                                              r_prev, rho, rho_ue, tol);
            out.sigma = sigma_prev;
            out.r = r_prev;
            out.rate_trace.push_back(r_prev);
            out.iterations = n;
            out.served_phase1 = static_cast<int>(oc.relay_set.size());
            out.converged = true;
            break;
        }

        const double r_n = rs.r;
        const DecodeOutcome oc =
            evaluate(channel_set, sigma_n, r_n, rho, rho_ue, tol);
        out.rate_trace.push_back(r_n);
        out.sigma = sigma_n;
        out.r = r_n;
        out.iterations = n;
        out.served_phase1 = static_cast<int>(oc.relay_set.size());

        const bool rate_fixed =
            std::abs(r_n - r_prev) <= tol.rate_equal_bits;
        const bool set_fixed = (oc.relay_set == set_prev);
        if (rate_fixed || set_fixed) {
            out.converged = true;
            break;
        }
        if (n == max_outer_iterations) {
            out.converged = false;
            break;
        }
        sigma_prev = std::move(sigma_n);
        r_prev = r_n;
        set_prev = oc.relay_set;
    }
    out.outage_rate = out.r / 2.0;
    return out;
}

std::vector<Index> statistical_selection(const std::vector<double>& gammas,
                                         double epsilon) {
    if (gammas.empty()) {
        throw std::invalid_argument("statistical_selection: empty gammas");
    }
    for (double g : gammas) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument(
                "statistical_selection: gammas must be positive");
        }
    }
    const int count =
        required_success_count(static_cast<Index>(gammas.size()), epsilon);
    return top_indices(gammas, count);
}

}  // namespace d2dmam
