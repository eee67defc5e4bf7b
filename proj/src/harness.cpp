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

#include "d2dmam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "d2dmam/rng.hpp"

namespace d2dmam {

namespace {

using nlohmann::json;

constexpr const char* kSweepNames[] = {
    "epsilon", "K", "M", "rho_db", "rho_ue_db", "nlos_fraction",
    "alpha_nlos",
};

int round_count(double v, const char* name) {
    const double r = std::round(v);
    if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || r < 1.0 ||
        r > 1e9) {
        throw std::invalid_argument(std::string(name) +
                                    " must be a positive integer");
    }
    return static_cast<int>(r);
}

// One sweep value, checked against its parameter's domain without building
// the swept config; validate() runs this on every value up front so a bad
// entry fails before any trial starts.
void check_sweep_value(SweepParam param, double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("sweep value must be finite");
    }
    switch (param) {
        case SweepParam::epsilon:
            if (!(value >= 0.0) || !(value < 1.0)) {
                throw std::invalid_argument(
                    "epsilon sweep value must be in [0, 1)");
            }
            break;
        case SweepParam::K:
            round_count(value, "K");
            break;
        case SweepParam::M:
            round_count(value, "M");
            break;
        case SweepParam::rho_db:
        case SweepParam::rho_ue_db:
            break;  // any finite dB value is a valid SNR
        case SweepParam::nlos_fraction:
            if (!(value >= 0.0) || !(value <= 1.0)) {
                throw std::invalid_argument(
                    "nlos_fraction sweep value must be in [0, 1]");
            }
            break;
        case SweepParam::alpha_nlos:
            if (!(value > 0.0)) {
                throw std::invalid_argument(
                    "alpha_nlos sweep value must be positive");
            }
            break;
    }
}

// Order-stable sum: splitting in halves gives the same result no matter how
// the values were produced.
double pairwise_sum(const double* data, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

std::string g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

SweepRow aggregate_rows(const ExperimentConfig& cfg, double sweep_value,
                        const std::string& algorithm,
                        const std::vector<const AlgorithmResult*>& results) {
    std::vector<double> outage, served, iters, conv;
    outage.reserve(results.size());
    served.reserve(results.size());
    iters.reserve(results.size());
    conv.reserve(results.size());
    for (const AlgorithmResult* r : results) {
        outage.push_back(r->outage_rate);
        served.push_back(static_cast<double>(r->served_phase1));
        iters.push_back(static_cast<double>(r->iterations));
        conv.push_back(r->converged ? 1.0 : 0.0);
    }
    SweepRow row;
    row.sweep_param = sweep_param_name(cfg.sweep);
    row.sweep_value = sweep_value;
    row.algorithm = algorithm;
    row.mean_outage_rate_bits = pairwise_mean(outage);
    row.mean_served_phase1 = pairwise_mean(served);
    row.mean_iterations = pairwise_mean(iters);
    row.converged_frac = pairwise_mean(conv);
    row.trials = cfg.trials;
    row.seed = cfg.master_seed;
    return row;
}

}  // namespace

const char* sweep_param_name(SweepParam p) {
    return kSweepNames[static_cast<int>(p)];
}

SweepParam sweep_param_from_name(const std::string& name) {
    for (int i = 0; i < 7; ++i) {
        if (name == kSweepNames[i]) return static_cast<SweepParam>(i);
    }
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

double db_to_linear(double db) {
    if (!std::isfinite(db)) {
        throw std::invalid_argument("db_to_linear: non-finite dB value");
    }
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
    if (!(linear > 0.0) || !std::isfinite(linear)) {
        throw std::invalid_argument("linear_to_db: value must be > 0");
    }
    return 10.0 * std::log10(linear);
}

int derived_k_nlos(double fraction, int K) {
    const long n = std::lround(fraction * static_cast<double>(K));
    return static_cast<int>(std::clamp(n, 0L, static_cast<long>(K)));
}

void ExperimentConfig::validate() const {
    channel.validate();
    if (!(epsilon >= 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must be in [0, 1)");
    }
    if (!(nlos_fraction >= 0.0) || !(nlos_fraction <= 1.0)) {
        throw std::invalid_argument("nlos_fraction must be in [0, 1]");
    }
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!run_baseline && !run_d2d_mam) {
        throw std::invalid_argument("no algorithm enabled");
    }
    if (max_outer_iterations < 1) {
        throw std::invalid_argument("max_outer_iterations must be >= 1");
    }
    if (sweep_values.empty()) {
        throw std::invalid_argument("sweep_values must be nonempty");
    }
    for (const double v : sweep_values) check_sweep_value(sweep, v);
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   double value) {
    ExperimentConfig c = base;
    switch (c.sweep) {
        case SweepParam::epsilon:
            c.epsilon = value;
            break;
        case SweepParam::K:
            c.channel.K = round_count(value, "K");
            c.channel.K_nlos = derived_k_nlos(c.nlos_fraction, c.channel.K);
            break;
        case SweepParam::M:
            c.channel.M = round_count(value, "M");
            break;
        case SweepParam::rho_db:
            c.channel.rho = db_to_linear(value);
            break;
        case SweepParam::rho_ue_db:
            c.channel.rho_ue = db_to_linear(value);
            break;
        case SweepParam::nlos_fraction:
            if (!(value >= 0.0) || !(value <= 1.0)) {
                throw std::invalid_argument(
                    "nlos_fraction sweep value must be in [0, 1]");
            }
            c.nlos_fraction = value;
            c.channel.K_nlos = derived_k_nlos(value, c.channel.K);
            break;
        case SweepParam::alpha_nlos:
            c.channel.alpha_nlos = value;
            break;
    }
    c.validate();
    return c;
}

TrialResult run_trial(const ExperimentConfig& config,
                      std::uint64_t trial_index) {
    try {
        RngStream rng = RngStream::for_trial(config.master_seed, trial_index);
        const Scenario scenario = generate_scenario(config.channel, rng);
        const ChannelSet channels =
            generate_channels(scenario, config.channel, rng);
        TrialResult out;
        if (config.run_baseline) {
            out.baseline_result = baseline(channels, config.epsilon,
                                           config.channel.rho, config.solver);
        }
        if (config.run_d2d_mam) {
            out.d2d_result =
                d2d_mam(channels, config.epsilon, config.channel.rho,
                        config.channel.rho_ue, config.solver,
                        config.max_outer_iterations);
        }
        return out;
    } catch (const std::exception& e) {
        throw std::runtime_error("trial " + std::to_string(trial_index) +
                                 ": " + e.what());
    }
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                int workers) {
    config.validate();
    if (config.sweep_values.empty()) {
        throw std::invalid_argument("run_sweep: no sweep values");
    }
    if (workers < 1) {
        throw std::invalid_argument("run_sweep: workers must be >= 1");
    }

    std::vector<SweepRow> rows;
    for (double value : config.sweep_values) {
        const ExperimentConfig c = apply_sweep_value(config, value);
        std::vector<TrialResult> results(
            static_cast<size_t>(c.trials));

        std::atomic<std::uint64_t> next{0};
        std::atomic<bool> stop{false};
        std::mutex err_mutex;
        std::exception_ptr err;
        const auto work = [&]() {
            while (!stop.load(std::memory_order_relaxed)) {
                const std::uint64_t i =
                    next.fetch_add(1, std::memory_order_relaxed);
                if (i >= static_cast<std::uint64_t>(c.trials)) return;
                try {
                    results[i] = run_trial(c, i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!err) err = std::current_exception();
                    stop.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        };

        const int pool_size = std::min(workers, c.trials);
        if (pool_size <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<size_t>(pool_size));
            for (int t = 0; t < pool_size; ++t) pool.emplace_back(work);
            for (std::thread& t : pool) t.join();
        }
        if (err) {
            try {
                std::rethrow_exception(err);
            } catch (const std::exception& e) {
                throw std::runtime_error(
                    "sweep " + std::string(sweep_param_name(c.sweep)) +
                    " = " + g9(value) + ": " + e.what());
            }
        }

        if (c.run_baseline) {
            std::vector<const AlgorithmResult*> ptrs;
            ptrs.reserve(results.size());
            for (const TrialResult& t : results) {
                ptrs.push_back(&*t.baseline_result);
            }
            rows.push_back(aggregate_rows(c, value, "baseline", ptrs));
        }
        if (c.run_d2d_mam) {
            std::vector<const AlgorithmResult*> ptrs;
            ptrs.reserve(results.size());
            for (const TrialResult& t : results) {
                ptrs.push_back(&*t.d2d_result);
            }
            rows.push_back(aggregate_rows(c, value, "d2d_mam", ptrs));
        }
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "sweep_param,sweep_value,algorithm,mean_outage_rate_bits,"
          "mean_served_phase1,mean_iterations,converged_frac,trials,seed\n";
    for (const SweepRow& r : rows) {
        os << r.sweep_param << ',' << g9(r.sweep_value) << ','
           << r.algorithm << ',' << g9(r.mean_outage_rate_bits) << ','
           << g9(r.mean_served_phase1) << ',' << g9(r.mean_iterations)
           << ',' << g9(r.converged_frac) << ',' << r.trials << ','
           << r.seed << '\n';
    }
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;  // defaults: M=16, K=50, half NLoS, 30/20 dB
    if (name == "fig2" || name == "fig3") {
        c.sweep = SweepParam::epsilon;
        c.sweep_values = {0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
    } else if (name == "fig4") {
        c.sweep = SweepParam::rho_ue_db;
        c.sweep_values = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    } else if (name == "fig5") {
        c.sweep = SweepParam::nlos_fraction;
        c.sweep_values = {0.0, 0.25, 0.5, 0.75, 1.0};
    } else if (name == "fig6") {
        c.sweep = SweepParam::M;
        c.sweep_values = {1.0, 2.0, 4.0, 8.0, 16.0};
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return c;
}

void apply_config_json(ExperimentConfig& config, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    bool k_nlos_explicit = false;
    for (const auto& [key, val] : j.items()) {
        if (key == "channel") {
            for (const auto& [ck, cv] : val.items()) {
                if (ck == "M") {
                    config.channel.M = cv.get<int>();
                } else if (ck == "K") {
                    config.channel.K = cv.get<int>();
                } else if (ck == "K_nlos") {
                    config.channel.K_nlos = cv.get<int>();
                    k_nlos_explicit = true;
                } else if (ck == "alpha_los") {
                    config.channel.alpha_los = cv.get<double>();
                } else if (ck == "alpha_nlos") {
                    config.channel.alpha_nlos = cv.get<double>();
                } else if (ck == "beta") {
                    config.channel.beta = cv.get<double>();
                } else if (ck == "delta") {
                    config.channel.delta = cv.get<double>();
                } else if (ck == "d_max") {
                    config.channel.d_max = cv.get<double>();
                } else if (ck == "rho_db") {
                    config.channel.rho = db_to_linear(cv.get<double>());
                } else if (ck == "rho_ue_db") {
                    config.channel.rho_ue = db_to_linear(cv.get<double>());
                } else {
                    throw std::invalid_argument("config: unknown channel key "
                                                + ck);
                }
            }
        } else if (key == "epsilon") {
            config.epsilon = val.get<double>();
        } else if (key == "nlos_fraction") {
            config.nlos_fraction = val.get<double>();
        } else if (key == "trials") {
            config.trials = val.get<int>();
        } else if (key == "master_seed") {
            config.master_seed = val.get<std::uint64_t>();
        } else if (key == "sweep") {
            config.sweep = sweep_param_from_name(val.get<std::string>());
        } else if (key == "values") {
            config.sweep_values = val.get<std::vector<double>>();
        } else if (key == "algorithms") {
            config.run_baseline = false;
            config.run_d2d_mam = false;
            for (const auto& a : val) {
                const std::string s = a.get<std::string>();
                if (s == "baseline") {
                    config.run_baseline = true;
                } else if (s == "d2d_mam") {
                    config.run_d2d_mam = true;
                } else {
                    throw std::invalid_argument(
                        "config: unknown algorithm " + s);
                }
            }
        } else if (key == "max_outer_iterations") {
            config.max_outer_iterations = val.get<int>();
        } else if (key == "solver") {
            for (const auto& [sk, sv] : val.items()) {
                if (sk == "tolerance") {
                    config.solver.tolerance = sv.get<double>();
                } else if (sk == "max_iterations") {
                    config.solver.max_iterations = sv.get<int>();
                } else if (sk == "tau_init_factor") {
                    config.solver.tau_init_factor = sv.get<double>();
                } else if (sk == "tau_decay") {
                    config.solver.tau_decay = sv.get<double>();
                } else if (sk == "tau_floor_factor") {
                    config.solver.tau_floor_factor = sv.get<double>();
                } else {
                    throw std::invalid_argument("config: unknown solver key "
                                                + sk);
                }
            }
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    // Keep the NLoS count coupled to K unless the file pinned it.
    if (!k_nlos_explicit) {
        config.channel.K_nlos =
            derived_k_nlos(config.nlos_fraction, config.channel.K);
    }
}

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["channel"] = {
        {"M", config.channel.M},
        {"K", config.channel.K},
        {"K_nlos", config.channel.K_nlos},
        {"alpha_los", config.channel.alpha_los},
        {"alpha_nlos", config.channel.alpha_nlos},
        {"beta", config.channel.beta},
        {"delta", config.channel.delta},
        {"d_max", config.channel.d_max},
        {"rho_db", linear_to_db(config.channel.rho)},
        {"rho_ue_db", linear_to_db(config.channel.rho_ue)},
    };
    j["epsilon"] = config.epsilon;
    j["nlos_fraction"] = config.nlos_fraction;
    j["trials"] = config.trials;
    j["master_seed"] = config.master_seed;
    j["sweep"] = sweep_param_name(config.sweep);
    j["values"] = config.sweep_values;
    json algs = json::array();
    if (config.run_baseline) algs.push_back("baseline");
    if (config.run_d2d_mam) algs.push_back("d2d_mam");
    j["algorithms"] = algs;
    j["max_outer_iterations"] = config.max_outer_iterations;
    j["solver"] = {
        {"tolerance", config.solver.tolerance},
        {"max_iterations", config.solver.max_iterations},
        {"tau_init_factor", config.solver.tau_init_factor},
        {"tau_decay", config.solver.tau_decay},
        {"tau_floor_factor", config.solver.tau_floor_factor},
    };
    return j.dump(2);
}

}  // namespace d2dmam
