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
//
// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero when any criterion fails. Statistical
// criteria run at a desk scale (hundreds of trials, minutes of CPU) chosen
// so that the checked orderings hold with wide margins, and every random
// quantity is drawn from fixed seeds, so the suite is bit-reproducible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "d2dmam/algorithms.hpp"
#include "d2dmam/channel.hpp"
#include "d2dmam/harness.hpp"
#include "d2dmam/protocol.hpp"
#include "d2dmam/rng.hpp"
#include "d2dmam/solver.hpp"
#include "support/oracles.hpp"

namespace {

using namespace d2dmam;
namespace oracle = d2dmam::testing;

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

std::string fmt(double x, int precision = 3) {
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

/// Reduced-size experiment defaults used by the statistical criteria:
/// K = 20 UEs, M = 8 antennas, half the UEs NLoS, 30 dB / 20 dB SNRs.
ExperimentConfig scaled_defaults() {
    ExperimentConfig cfg;
    cfg.channel.M = 8;
    cfg.channel.K = 20;
    cfg.channel.K_nlos = 10;
    cfg.epsilon = 0.1;
    cfg.nlos_fraction = 0.5;
    cfg.trials = 100;
    cfg.master_seed = 1;
    return cfg;
}

/// Per-(value, algorithm) mean outage rates from a finished sweep.
std::map<std::pair<double, std::string>, double> outage_by_key(
    const std::vector<SweepRow>& rows) {
    std::map<std::pair<double, std::string>, double> out;
    for (const SweepRow& row : rows) {
        out[{row.sweep_value, row.algorithm}] = row.mean_outage_rate_bits;
    }
    return out;
}

// ---------------------------------------------------------------------
// Shared trial bank: criterion 2 runs the Monte-Carlo trials and keeps
// everything; criterion 3 re-checks feasibility on the same results.
// ---------------------------------------------------------------------

struct TrialBank {
    ExperimentConfig cfg;
    std::vector<ChannelSet> channel_sets;
    std::vector<AlgorithmResult> d2d;
    std::vector<AlgorithmResult> bl;
    bool ready = false;
};

TrialBank bank;

constexpr int kBankTrials = 200;

void fill_bank() {
    bank.cfg = scaled_defaults();
    bank.channel_sets.reserve(kBankTrials);
    bank.d2d.reserve(kBankTrials);
    bank.bl.reserve(kBankTrials);
    for (int t = 0; t < kBankTrials; ++t) {
        RngStream rng = RngStream::for_trial(bank.cfg.master_seed,
                                             static_cast<std::uint64_t>(t));
        const Scenario scenario = generate_scenario(bank.cfg.channel, rng);
        ChannelSet cs = generate_channels(scenario, bank.cfg.channel, rng);
        bank.d2d.push_back(d2d_mam(cs, bank.cfg.epsilon, bank.cfg.channel.rho,
                                   bank.cfg.channel.rho_ue, bank.cfg.solver,
                                   bank.cfg.max_outer_iterations));
        bank.bl.push_back(baseline(cs, bank.cfg.epsilon, bank.cfg.channel.rho,
                                   bank.cfg.solver));
        bank.channel_sets.push_back(std::move(cs));
    }
    bank.ready = true;
}

// ---------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------

/// 1. On random two-antenna instances the solver matches an independent
/// dense grid search over the feasible set within 1e-3 absolute, in under
/// a minute for 100 instances.
CriterionResult solver_vs_grid_oracle() {
    const auto start = std::chrono::steady_clock::now();
    RngStream rng(9101);
    double max_dev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Index k_sub = 1 + (i % 3);
        const ComplexMatrix h =
            oracle::unit_scaled_channel_matrix(rng, 2, k_sub);
        const MaxMinSolution sol = solve_maxmin(MaxMinProblem(h));
        const oracle::GridOracleResult ref = oracle::grid_maxmin_oracle(h);
        max_dev = std::max(max_dev, std::abs(sol.value - ref.value));
    }
    const double secs = elapsed_seconds(start);
    CriterionResult res;
    res.pass = max_dev <= 1e-3 && secs < 60.0;
    res.detail = "max |solver - oracle| = " + fmt(max_dev) + " over 100 "
                 "instances in " + fmt(secs) + " s";
    return res;
}

/// 2. Over 200 seeded trials at the reduced defaults, every per-iteration
/// rate trace is nondecreasing, at least 99% of trials converge within the
/// 100-iteration budget, and the median iteration count is at most 10.
CriterionResult monotone_convergence() {
    fill_bank();
    int monotone_violations = 0;
    int converged = 0;
    std::vector<int> iteration_counts;
    iteration_counts.reserve(bank.d2d.size());
    for (const AlgorithmResult& res : bank.d2d) {
        for (std::size_t i = 1; i < res.rate_trace.size(); ++i) {
            if (res.rate_trace[i] < res.rate_trace[i - 1]) {
                ++monotone_violations;
            }
        }
        if (res.converged && res.iterations <= 100) ++converged;
        iteration_counts.push_back(res.iterations);
    }
    std::sort(iteration_counts.begin(), iteration_counts.end());
    const std::size_t n = iteration_counts.size();
    const double median =
        0.5 * (iteration_counts[(n - 1) / 2] + iteration_counts[n / 2]);
    const double conv_frac = static_cast<double>(converged) /
                             static_cast<double>(n);
    CriterionResult res;
    res.pass = monotone_violations == 0 && conv_frac >= 0.99 && median <= 10.0;
    res.detail = std::to_string(monotone_violations) +
                 " trace violations; converged " + fmt(100.0 * conv_frac) +
                 "%; median iterations " + fmt(median) + " (max " +
                 std::to_string(iteration_counts[n - 1]) + ")";
    return res;
}

/// 3. Every returned (rate, covariance) pair from both algorithms meets
/// the outage constraint when re-decoded from scratch, with no tolerance
/// beyond the decode slack built into the threshold comparisons.
CriterionResult outage_feasibility() {
    if (!bank.ready) return {false, "no trial data (criterion 2 aborted)"};
    const int required =
        required_success_count(bank.cfg.channel.K, bank.cfg.epsilon);
    int violations = 0;
    int min_count = bank.cfg.channel.K;
    for (std::size_t t = 0; t < bank.channel_sets.size(); ++t) {
        const ChannelSet& cs = bank.channel_sets[t];
        const DecodeOutcome two_phase =
            evaluate(cs, bank.d2d[t].sigma, bank.d2d[t].r,
                     bank.cfg.channel.rho, bank.cfg.channel.rho_ue);
        // The baseline is single-phase: re-decode with silent UEs so that
        // only phase-1 successes count.
        const DecodeOutcome one_phase =
            evaluate(cs, bank.bl[t].sigma, bank.bl[t].r,
                     bank.cfg.channel.rho, 0.0);
        if (two_phase.success_count < required) ++violations;
        if (one_phase.success_count < required) ++violations;
        min_count = std::min({min_count, two_phase.success_count,
                              one_phase.success_count});
    }
    CriterionResult res;
    res.pass = violations == 0;
    res.detail = std::to_string(violations) + " violations over " +
                 std::to_string(bank.channel_sets.size()) +
                 " trials x 2 algorithms (min successes " +
                 std::to_string(min_count) + ", required " +
                 std::to_string(required) + ")";
    return res;
}

/// 4. The breakpoint rate search is exact: a dense grid scan of the decode
/// success count (step 1e-4 bits) never beats it by more than one step.
CriterionResult rate_search_vs_grid() {
    RngStream rng(9104);
    const double eps_cycle[4] = {0.0, 0.15, 0.3, 0.5};
    double max_margin = -std::numeric_limits<double>::infinity();
    int instances = 0;
    for (int i = 0; i < 200; ++i) {
        const Index k = 2 + (i % 5);
        const Index m = 1 + (i % 2);
        const double eps = eps_cycle[i % 4];
        const double rho = 10.0;
        const double rho_ue = (i % 3 == 0) ? 0.5 : 5.0;
        const ChannelSet cs = oracle::synthetic_channel_set(rng, m, k);
        const HermitianMatrix sigma = oracle::random_feasible_point(rng, m);
        const RateSearchResult bp =
            max_feasible_rate(cs, sigma, eps, rho, rho_ue);
        const double grid =
            oracle::grid_max_rate_oracle(cs, sigma.mat(), eps, rho, rho_ue);
        max_margin = std::max(max_margin, grid - bp.r);
        ++instances;
    }
    CriterionResult res;
    res.pass = max_margin <= 1e-4;
    res.detail = "max (grid - breakpoint) = " + fmt(max_margin) + " bits over " +
                 std::to_string(instances) + " instances";
    return res;
}

/// 5. Mean outage rate of the two-phase algorithm is at least the
/// baseline's at every target outage in {0.05, 0.1, 0.2, 0.3}, and
/// strictly larger at 0.1.
CriterionResult epsilon_trend() {
    ExperimentConfig cfg = scaled_defaults();
    cfg.sweep = SweepParam::epsilon;
    cfg.sweep_values = {0.05, 0.1, 0.2, 0.3};
    const auto means = outage_by_key(run_sweep(cfg));
    bool ordered = true;
    double min_gap = std::numeric_limits<double>::infinity();
    double gap_at_01 = 0.0;
    for (const double eps : cfg.sweep_values) {
        const double gap = means.at({eps, "d2d_mam"}) - means.at({eps, "baseline"});
        ordered = ordered && gap >= 0.0;
        min_gap = std::min(min_gap, gap);
        if (eps == 0.1) gap_at_01 = gap;
    }
    CriterionResult res;
    res.pass = ordered && gap_at_01 > 0.0;
    res.detail = "min gap " + fmt(min_gap) + " bits; gap at eps=0.1 is " +
                 fmt(gap_at_01) + " bits (" + std::to_string(cfg.trials) +
                 " trials/value)";
    return res;
}

/// 6. The two-phase-minus-baseline gap is nondecreasing in the UE transmit
/// SNR over {-10, 0, 10, 20} dB and minimal at -10 dB, where the relays
/// are nearly useless.
CriterionResult ue_snr_trend() {
    ExperimentConfig cfg = scaled_defaults();
    cfg.sweep = SweepParam::rho_ue_db;
    cfg.sweep_values = {-10.0, 0.0, 10.0, 20.0};
    const auto means = outage_by_key(run_sweep(cfg));
    std::vector<double> gaps;
    for (const double db : cfg.sweep_values) {
        gaps.push_back(means.at({db, "d2d_mam"}) - means.at({db, "baseline"}));
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        nondecreasing = nondecreasing && gaps[i] >= gaps[i - 1];
    }
    const bool minimal_first =
        gaps[0] <= *std::min_element(gaps.begin(), gaps.end());
    CriterionResult res;
    res.pass = nondecreasing && minimal_first;
    std::ostringstream os;
    os << std::setprecision(3) << "gaps (bits) at {-10, 0, 10, 20} dB: ";
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        os << (i ? ", " : "") << gaps[i];
    }
    res.detail = os.str();
    return res;
}

/// 7. Mean outage rate of the two-phase algorithm strictly increases with
/// the antenna count over {1, 4, 16} at fixed K, so it is minimal at M=1.
/// Runs at the K = 50 cell of the reference curves: with fewer UEs the
/// relay pool is sparse, the second phase saturates between M = 4 and
/// M = 16, and the last leg of the trend drowns in trial noise. Even at
/// K = 50 that leg is only a couple of percent — the published averages
/// use 2000 locations — so the detail line reports all three means for
/// judging the margin.
CriterionResult antenna_trend() {
    ExperimentConfig cfg = scaled_defaults();
    cfg.channel.K = 50;
    cfg.channel.K_nlos = 25;
    cfg.sweep = SweepParam::M;
    cfg.sweep_values = {1.0, 4.0, 16.0};
    cfg.trials = 100;
    const auto means = outage_by_key(run_sweep(cfg));
    std::vector<double> rates;
    for (const double m : cfg.sweep_values) {
        rates.push_back(means.at({m, "d2d_mam"}));
    }
    const bool increasing = rates[0] < rates[1] && rates[1] < rates[2];
    CriterionResult res;
    res.pass = increasing;
    std::ostringstream os;
    os << std::setprecision(4) << "mean outage rate (bits) at M={1, 4, 16}: "
       << rates[0] << ", " << rates[1] << ", " << rates[2] << " ("
       << cfg.trials << " trials/value, K=" << cfg.channel.K << ")";
    res.detail = os.str();
    return res;
}

/// 8. With i.i.d. isotropic synthetic channels and M = 2, the mean
/// full-set max-min value strictly decreases as the UE count grows over
/// {2, 8, 32}: serving more users fairly costs beamforming gain.
CriterionResult capacity_decay() {
    RngStream rng(9108);
    const Index k_values[3] = {2, 8, 32};
    double mean[3] = {0.0, 0.0, 0.0};
    const int draws = 60;
    for (int t = 0; t < draws; ++t) {
        const ComplexMatrix h = oracle::random_channel_matrix(rng, 2, 32);
        for (int j = 0; j < 3; ++j) {
            const MaxMinProblem problem(ComplexMatrix(h.leftCols(k_values[j])));
            mean[j] += solve_maxmin(problem).value / draws;
        }
    }
    CriterionResult res;
    res.pass = mean[0] > mean[1] && mean[1] > mean[2];
    res.detail = "mean value at K={2, 8, 32}: " + fmt(mean[0]) + ", " +
                 fmt(mean[1]) + ", " + fmt(mean[2]) + " (" +
                 std::to_string(draws) + " draws)";
    return res;
}

/// 9. Every preset is deterministic: two runs with the same seed produce
/// byte-identical CSV, and a 1-worker run matches an 8-worker run.
CriterionResult csv_determinism() {
    const char* preset_names[] = {"fig2", "fig3", "fig4", "fig5", "fig6"};
    std::string failing;
    for (const char* name : preset_names) {
        ExperimentConfig cfg = preset_config(name);
        // Shrink the population and trial count; the determinism contract
        // is size-independent.
        cfg.trials = 2;
        cfg.channel.K = 8;
        cfg.channel.M = 4;
        cfg.channel.K_nlos = derived_k_nlos(cfg.nlos_fraction, cfg.channel.K);
        const auto csv_of = [&cfg](int workers) {
            std::ostringstream os;
            write_csv(os, run_sweep(cfg, workers));
            return os.str();
        };
        const std::string first = csv_of(1);
        const std::string second = csv_of(1);
        const std::string parallel = csv_of(8);
        if (first != second || first != parallel) {
            failing = name;
            break;
        }
    }
    CriterionResult res;
    res.pass = failing.empty();
    res.detail = failing.empty()
                     ? "5 presets x {repeat, 1 vs 8 workers} byte-identical"
                     : "preset " + failing + " not deterministic";
    return res;
}

/// 10. Eigensolver and projection invariants hold on 1000 random Hermitian
/// matrices of dimension 1..32 across magnitudes: ascending eigenvalues,
/// orthonormal eigenvectors, reconstruction, and Frobenius optimality of
/// the feasible-set projection against random feasible competitors.
CriterionResult eigensolver_suite() {
    RngStream rng(9110);
    int checked = 0;
    double worst_resid = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Index dim = 1 + (i % 32);
        const double scale = std::pow(10.0, 4.0 * rng.next_double() - 2.0);
        const HermitianMatrix a(
            ComplexMatrix(scale * oracle::random_hermitian(rng, dim).mat()));
        const EigenDecomposition eig = hermitian_eig(a);

        const double a_norm = std::max(1e-300, a.mat().norm());
        for (Index j = 0; j + 1 < dim; ++j) {
            if (eig.eigenvalues(j) > eig.eigenvalues(j + 1)) {
                return {false, "eigenvalues out of order at matrix " +
                                   std::to_string(i)};
            }
        }
        const double ortho =
            (eig.eigenvectors.adjoint() * eig.eigenvectors -
             ComplexMatrix::Identity(dim, dim))
                .norm();
        const double recon =
            (eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                 eig.eigenvectors.adjoint() -
             a.mat())
                .norm() /
            a_norm;
        worst_resid = std::max({worst_resid, ortho, recon});
        if (ortho > 1e-9 || recon > 1e-9) {
            return {false, "residual " + fmt(std::max(ortho, recon)) +
                               " at matrix " + std::to_string(i)};
        }

        const HermitianMatrix p = project_spectahedron(a);
        const EigenDecomposition peig = hermitian_eig(p);
        if (peig.eigenvalues.minCoeff() < -1e-10 || p.trace() > 1.0 + 1e-10) {
            return {false, "projection infeasible at matrix " +
                               std::to_string(i)};
        }
        const double dist = (a.mat() - p.mat()).norm();
        for (int probe = 0; probe < 2; ++probe) {
            const HermitianMatrix f = oracle::random_feasible_point(rng, dim);
            if (dist > (a.mat() - f.mat()).norm() + 1e-9 * a_norm) {
                return {false, "projection suboptimal at matrix " +
                                   std::to_string(i)};
            }
        }
        ++checked;
    }
    CriterionResult res;
    res.pass = checked == 1000;
    res.detail = "1000 matrices (dim 1..32), worst residual " +
                 fmt(worst_resid);
    return res;
}

}  // namespace

int main() {
    using Fn = std::function<CriterionResult()>;
    const std::vector<std::pair<const char*, Fn>> criteria = {
        {"max-min solver matches dense grid oracle", solver_vs_grid_oracle},
        {"iterative rate traces monotone, convergence in budget",
         monotone_convergence},
        {"returned rates outage-feasible under exact re-decode",
         outage_feasibility},
        {"breakpoint rate search never beaten by grid scan",
         rate_search_vs_grid},
        {"two-phase beats baseline across target outages", epsilon_trend},
        {"two-phase gain grows with UE transmit SNR", ue_snr_trend},
        {"outage rate strictly increasing in antenna count", antenna_trend},
        {"full-set max-min value decays with user count", capacity_decay},
        {"CSV byte-identical across reruns and worker counts",
         csv_determinism},
        {"eigensolver and projection property suite", eigensolver_suite},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = criteria[i].second();
        } catch (const std::exception& e) {
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %2zu. %s: %s (%.1f s)\n", res.pass ? "PASS" : "FAIL",
                    i + 1, criteria[i].first, res.detail.c_str(),
                    elapsed_seconds(start));
        std::fflush(stdout);
        if (!res.pass) ++failures;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
