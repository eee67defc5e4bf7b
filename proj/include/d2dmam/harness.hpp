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

#ifndef D2DMAM_HARNESS_HPP
#define D2DMAM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "d2dmam/algorithms.hpp"
#include "d2dmam/channel.hpp"
#include "d2dmam/solver.hpp"
#include "d2dmam/types.hpp"

namespace d2dmam {

enum class SweepParam {
    epsilon,
    K,
    M,
    rho_db,
    rho_ue_db,
    nlos_fraction,
    alpha_nlos,
};

const char* sweep_param_name(SweepParam p);
SweepParam sweep_param_from_name(const std::string& name);

/// 10^(db/10).
double db_to_linear(double db);
double linear_to_db(double linear);

/// round(fraction * K) clamped to [0, K]: the K_nlos coupling applied when
/// K or the NLoS fraction changes.
int derived_k_nlos(double fraction, int K);

struct ExperimentConfig {
    ChannelConfig channel;
    double epsilon = 0.1;
    // K_nlos is re-derived as round(nlos_fraction * K) whenever a sweep
    // changes K or the fraction itself, so the two stay consistent.
    double nlos_fraction = 0.5;
    int trials = 2000;
    std::uint64_t master_seed = 1;
    SweepParam sweep = SweepParam::epsilon;
    std::vector<double> sweep_values;
    bool run_baseline = true;
    bool run_d2d_mam = true;
    SolverSettings solver;
    int max_outer_iterations = 100;

    void validate() const;
};

/// One CSV row: a (sweep value, algorithm) pair with trial-mean metrics.
struct SweepRow {
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string algorithm;
    double mean_outage_rate_bits = 0.0;
    double mean_served_phase1 = 0.0;
    double mean_iterations = 0.0;
    double converged_frac = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

struct TrialResult {
    std::optional<AlgorithmResult> baseline_result;
    std::optional<AlgorithmResult> d2d_result;
};

/// Copy of `base` with one sweep value applied (including the K_nlos
/// coupling above).
ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   double value);

/// One seeded trial of an already-materialized config: the RNG stream is
/// derived from (master_seed, trial_index) alone, so results are
/// bit-identical regardless of execution order or thread count.
TrialResult run_trial(const ExperimentConfig& config,
                      std::uint64_t trial_index);

/// All sweep values, `trials` trials each, optionally across worker
/// threads. Per-trial outputs land in a trial-indexed buffer and are
/// reduced by pairwise summation, so the aggregate does not depend on the
/// worker count.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                int workers = 1);

/// Header plus one line per row; floats carry 9 significant digits.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Parameterizations of the five standard experiments (fig2 .. fig6);
/// fig2 and fig3 share a config and differ only in which column is read.
ExperimentConfig preset_config(const std::string& name);

/// Overrides fields of `config` with the keys present in the JSON text
/// (schema mirrors ExperimentConfig; SNRs are given in dB as rho_db /
/// rho_ue_db). Unknown keys are rejected.
void apply_config_json(ExperimentConfig& config, const std::string& text);

std::string config_to_json(const ExperimentConfig& config);

}  // namespace d2dmam

#endif  // D2DMAM_HARNESS_HPP
