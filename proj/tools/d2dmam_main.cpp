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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "d2dmam/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Monte-Carlo sweeps for D2D-aided multi-antenna multicasting; "
        "emits per-sweep-value trial means as CSV"};

    std::string preset, sweep_name, config_path, out_path;
    std::vector<double> values;
    int trials = 0, K = 0, M = 0, workers = 1;
    std::uint64_t seed = 0;
    double eps = 0.0, rho_db = 0.0, rho_ue_db = 0.0, nlos_frac = 0.0;
    double alpha_nlos = 0.0;

    app.add_option("--preset", preset,
                   "Named experiment: fig2|fig3|fig4|fig5|fig6");
    const auto* opt_sweep =
        app.add_option("--sweep", sweep_name,
                       "Swept parameter: epsilon|K|M|rho_db|rho_ue_db|"
                       "nlos_fraction|alpha_nlos");
    const auto* opt_values =
        app.add_option("--values", values, "Comma-separated sweep values")
            ->delimiter(',');
    const auto* opt_trials =
        app.add_option("--trials", trials, "Trials per sweep value");
    const auto* opt_seed = app.add_option("--seed", seed, "Master RNG seed");
    const auto* opt_eps = app.add_option("--eps", eps, "Target outage");
    const auto* opt_k = app.add_option("--K", K, "UE count");
    const auto* opt_m = app.add_option("--M", M, "BS antenna count");
    const auto* opt_rho =
        app.add_option("--rho-db", rho_db, "BS transmit SNR in dB");
    const auto* opt_rho_ue =
        app.add_option("--rho-ue-db", rho_ue_db, "UE transmit SNR in dB");
    const auto* opt_nlos =
        app.add_option("--nlos-frac", nlos_frac, "Fraction of NLoS UEs");
    const auto* opt_alpha = app.add_option("--alpha-nlos", alpha_nlos,
                                           "NLoS pathloss exponent");
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--workers", workers, "Worker threads");
    app.add_option("--config", config_path,
                   "JSON config file (flags override it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    d2dmam::ExperimentConfig cfg;
    try {
        if (!preset.empty()) cfg = d2dmam::preset_config(preset);
        if (!config_path.empty()) {
            d2dmam::apply_config_json(cfg, read_file(config_path));
        }
        if (*opt_sweep) cfg.sweep = d2dmam::sweep_param_from_name(sweep_name);
        if (*opt_values) cfg.sweep_values = values;
        if (*opt_trials) cfg.trials = trials;
        if (*opt_seed) cfg.master_seed = seed;
        if (*opt_eps) cfg.epsilon = eps;
        if (*opt_k) cfg.channel.K = K;
        if (*opt_m) cfg.channel.M = M;
        if (*opt_rho) cfg.channel.rho = d2dmam::db_to_linear(rho_db);
        if (*opt_rho_ue) cfg.channel.rho_ue = d2dmam::db_to_linear(rho_ue_db);
        if (*opt_alpha) cfg.channel.alpha_nlos = alpha_nlos;
        if (*opt_nlos) cfg.nlos_fraction = nlos_frac;
        if (*opt_k || *opt_nlos) {
            cfg.channel.K_nlos =
                d2dmam::derived_k_nlos(cfg.nlos_fraction, cfg.channel.K);
        }
        if (preset.empty() && !*opt_sweep && config_path.empty()) {
            throw std::invalid_argument(
                "either --preset, --sweep, or --config is required");
        }
        if (cfg.sweep_values.empty()) {
            throw std::invalid_argument(
                "no sweep values: pass --values, a preset, or a config "
                "file with \"values\"");
        }
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "run with --help for usage\n";
        return 2;
    }

    try {
        const std::vector<d2dmam::SweepRow> rows =
            d2dmam::run_sweep(cfg, workers);
        if (out_path.empty()) {
            d2dmam::write_csv(std::cout, rows);
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open " + out_path);
            d2dmam::write_csv(out, rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
