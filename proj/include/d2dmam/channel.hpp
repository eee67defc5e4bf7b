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

#ifndef D2DMAM_CHANNEL_HPP
#define D2DMAM_CHANNEL_HPP

#include <string>
#include <vector>

#include "d2dmam/rng.hpp"
#include "d2dmam/types.hpp"

namespace d2dmam {

/// Physical and population parameters for one drop. SNRs are linear ratios.
struct ChannelConfig {
    int M = 16;               // BS antenna count
    int K = 50;               // UE count
    int K_nlos = 25;          // UEs in NLoS conditions toward the BS
    double alpha_los = 2.0;   // LoS pathloss exponent
    double alpha_nlos = 4.0;  // NLoS pathloss exponent
    double beta = 1.0;        // average channel power gain at 1 m
    double delta = 0.5;       // antenna spacing / wavelength
    double d_max = 50.0;      // cell radius in meters
    double rho = 1000.0;      // BS transmit SNR (30 dB)
    double rho_ue = 100.0;    // UE transmit SNR (20 dB), common to all UEs

    void validate() const;  // throws std::invalid_argument
};

/// UE geometry for one drop: positions in the closed semicircle of radius
/// d_max around the BS at the origin (x >= 0 half-plane), LoS flags, polar
/// steering angles, and all BS-UE / UE-UE distances.
struct Scenario {
    RealMatrix positions;          // K x 2, meters
    std::vector<bool> is_nlos;     // exactly K_nlos true
    RealVector steering_angles;    // radians, polar angle seen from the BS
    RealVector bs_distances;       // d_k, meters
    RealMatrix ue_distances;       // d_kj = d_jk, zero diagonal, meters
};

/// One small-scale realization: downlink vectors as columns of an M x K
/// matrix and the K x K device-to-device gain matrix (row k = receiver,
/// column j = transmitter, zero diagonal).
struct ChannelSet {
    ComplexMatrix downlink;  // M x K, column k = h_k
    ComplexMatrix d2d;       // K x K, entry (k, j) = h_kj
};

/// Uniform linear array response: entry m is exp(-i 2 pi delta m cos(theta)).
ComplexVector array_response(double theta, int M, double delta);

/// Average channel power gain at distance d: beta * d^(-alpha).
double pathloss_gain(double beta, double distance, double alpha);

/// Deterministic downlink vector sqrt(gamma) * eta * a(theta); exposed so
/// fixed-fading cases are testable without a stream.
ComplexVector downlink_channel(double gamma, Complex eta, double theta, int M, double delta);

/// Draw UE positions uniformly over the semicircular area (radius
/// d_max * sqrt(u), angle uniform), flag K_nlos UEs NLoS without
/// replacement, and fill in every distance. Positions closer than 0.1 m to
/// the BS or to an already placed UE are redrawn.
Scenario generate_scenario(const ChannelConfig& config, RngStream& rng);

/// Draw the small-scale coefficients (i.i.d. CN(0,1)) and assemble
/// h_k = sqrt(gamma_k) eta_k a(theta_k) plus the D2D gains
/// h_kj = sqrt(gamma_kj) eta_kj, with LoS exponents on every D2D link.
ChannelSet generate_channels(const Scenario& scenario, const ChannelConfig& config,
                             RngStream& rng);

/// JSON fixture format (complex numbers as [re, im] pairs).
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);
std::string channel_set_to_json(const ChannelSet& channels);
ChannelSet channel_set_from_json(const std::string& text);

}  // namespace d2dmam

#endif  // D2DMAM_CHANNEL_HPP
