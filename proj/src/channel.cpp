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

#include "d2dmam/channel.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace d2dmam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMinSeparation = 0.1;  // meters; keeps pathloss gains bounded

}  // namespace

void ChannelConfig::validate() const {
    if (M < 1) throw std::invalid_argument("ChannelConfig: M must be >= 1");
    if (K < 1) throw std::invalid_argument("ChannelConfig: K must be >= 1");
    if (K_nlos < 0 || K_nlos > K)
        throw std::invalid_argument("ChannelConfig: K_nlos must be in [0, K]");
    if (alpha_los <= 0.0 || alpha_nlos <= 0.0)
        throw std::invalid_argument("ChannelConfig: pathloss exponents must be positive");
    if (beta <= 0.0) throw std::invalid_argument("ChannelConfig: beta must be positive");
    if (delta <= 0.0) throw std::invalid_argument("ChannelConfig: delta must be positive");
    if (d_max <= 0.0) throw std::invalid_argument("ChannelConfig: d_max must be positive");
    if (rho < 0.0 || rho_ue < 0.0)
        throw std::invalid_argument("ChannelConfig: SNRs must be nonnegative");
}

ComplexVector array_response(double theta, int M, double delta) {
    if (M < 1) throw std::invalid_argument("array_response: M must be >= 1");
    ComplexVector a(M);
    const double phase_step = -kTwoPi * delta * std::cos(theta);
    for (int m = 0; m < M; ++m) a[m] = std::polar(1.0, phase_step * m);
    return a;
}

double pathloss_gain(double beta, double distance, double alpha) {
    return beta * std::pow(distance, -alpha);
}

ComplexVector downlink_channel(double gamma, Complex eta, double theta, int M, double delta) {
    return std::sqrt(gamma) * eta * array_response(theta, M, delta);
}

Scenario generate_scenario(const ChannelConfig& config, RngStream& rng) {
    config.validate();
    const int K = config.K;

    Scenario s;
    s.positions.resize(K, 2);
    s.is_nlos.assign(K, false);
    s.steering_angles.resize(K);
    s.bs_distances.resize(K);
    s.ue_distances = RealMatrix::Zero(K, K);

    for (int k = 0; k < K; ++k) {
        while (true) {
            const double radius = config.d_max * std::sqrt(rng.next_double());
            const double angle = -0.5 * M_PI + M_PI * rng.next_double();
            const double x = radius * std::cos(angle);
            const double y = radius * std::sin(angle);
            if (radius < kMinSeparation) continue;
            bool separated = true;
            for (int j = 0; j < k; ++j) {
                const double dx = x - s.positions(j, 0);
                const double dy = y - s.positions(j, 1);
                if (std::hypot(dx, dy) < kMinSeparation) {
                    separated = false;
                    break;
                }
            }
            if (!separated) continue;
            s.positions(k, 0) = x;
            s.positions(k, 1) = y;
            s.bs_distances[k] = radius;
            s.steering_angles[k] = angle;
            break;
        }
    }

    for (int k = 0; k < K; ++k)
        for (int j = k + 1; j < K; ++j) {
            const double d = std::hypot(s.positions(k, 0) - s.positions(j, 0),
                                        s.positions(k, 1) - s.positions(j, 1));
            s.ue_distances(k, j) = d;
            s.ue_distances(j, k) = d;
        }

    // Partial Fisher-Yates: K_nlos indices without replacement.
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    for (int i = 0; i < config.K_nlos; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K - i)));
        std::swap(order[i], order[j]);
        s.is_nlos[order[i]] = true;
    }
    return s;
}

ChannelSet generate_channels(const Scenario& scenario, const ChannelConfig& config,
                             RngStream& rng) {
    const int K = config.K;
    const int M = config.M;
    if (scenario.positions.rows() != K || static_cast<int>(scenario.is_nlos.size()) != K)
        throw std::invalid_argument("generate_channels: scenario/config size mismatch");

    ChannelSet cs;
    cs.downlink.resize(M, K);
    cs.d2d = ComplexMatrix::Zero(K, K);

    // Independent child streams for the two fading blocks, so the D2D draws
    // do not depend on how many downlink draws the antenna count consumed.
    // Sweeps over M then reuse identical D2D channels per trial, which
    // pairs the compared configurations on common random numbers.
    RngStream downlink_rng(rng.next_u64());
    RngStream d2d_rng(rng.next_u64());

    for (int k = 0; k < K; ++k) {
        const double d = scenario.bs_distances[k];
        if (d <= 0.0) throw std::invalid_argument("generate_channels: zero BS-UE distance");
        const double alpha = scenario.is_nlos[k] ? config.alpha_nlos : config.alpha_los;
        const double gamma = pathloss_gain(config.beta, d, alpha);
        cs.downlink.col(k) = downlink_channel(gamma, downlink_rng.next_cnormal(),
                                              scenario.steering_angles[k], M, config.delta);
    }

    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j) {
            if (k == j) continue;
            const double d = scenario.ue_distances(k, j);
            if (d <= 0.0) throw std::invalid_argument("generate_channels: zero UE-UE distance");
            const double gamma = pathloss_gain(config.beta, d, config.alpha_los);
            cs.d2d(k, j) = std::sqrt(gamma) * d2d_rng.next_cnormal();
        }
    return cs;
}

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json real_matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix real_matrix_from_json(const json& j) {
    const auto rows = static_cast<Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : Index{0};
    RealMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    const auto rows = static_cast<Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : Index{0};
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(j.at(i).at(c));
    return m;
}

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
    json j;
    j["positions"] = real_matrix_to_json(scenario.positions);
    j["is_nlos"] = scenario.is_nlos;
    j["steering_angles"] = std::vector<double>(scenario.steering_angles.begin(),
                                               scenario.steering_angles.end());
    j["bs_distances"] = std::vector<double>(scenario.bs_distances.begin(),
                                            scenario.bs_distances.end());
    j["ue_distances"] = real_matrix_to_json(scenario.ue_distances);
    return j.dump();
}

Scenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.positions = real_matrix_from_json(j.at("positions"));
    s.is_nlos = j.at("is_nlos").get<std::vector<bool>>();
    const auto angles = j.at("steering_angles").get<std::vector<double>>();
    const auto dists = j.at("bs_distances").get<std::vector<double>>();
    s.steering_angles = Eigen::Map<const RealVector>(angles.data(),
                                                     static_cast<Index>(angles.size()));
    s.bs_distances = Eigen::Map<const RealVector>(dists.data(),
                                                  static_cast<Index>(dists.size()));
    s.ue_distances = real_matrix_from_json(j.at("ue_distances"));
    return s;
}

std::string channel_set_to_json(const ChannelSet& channels) {
    json j;
    j["downlink"] = complex_matrix_to_json(channels.downlink);
    j["d2d"] = complex_matrix_to_json(channels.d2d);
    return j.dump();
}

ChannelSet channel_set_from_json(const std::string& text) {
    const json j = json::parse(text);
    ChannelSet cs;
    cs.downlink = complex_matrix_from_json(j.at("downlink"));
    cs.d2d = complex_matrix_from_json(j.at("d2d"));
    return cs;
}

}  // namespace d2dmam
