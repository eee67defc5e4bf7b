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

#ifndef D2DMAM_PROTOCOL_HPP
#define D2DMAM_PROTOCOL_HPP

#include <vector>

#include "d2dmam/channel.hpp"
#include "d2dmam/cxmat.hpp"
#include "d2dmam/types.hpp"

namespace d2dmam {

/// Result of running both phases at a fixed encoding rate r.
///
/// Threshold comparisons carry an absolute slack of
/// Tolerances::decode_slack_bits in favor of decoding, so a UE whose rate
/// equals r exactly always decodes even after rounding.
struct DecodeOutcome {
    RealVector phase1_rates;       // t_k = log2(1 + rho h_k^H S h_k), bits
    std::vector<Index> relay_set;  // ascending indices with t_k >= r - slack
    RealVector phase2_rates;       // s_k given relay_set, bits; 0 if empty
    std::vector<bool> success_flags;  // phase 1 or phase 2 decoded
    double success_fraction = 0.0;
    int success_count = 0;
};

/// Rate search result; `feasible` is false only when no candidate in range
/// met the outage constraint and the returned rate is an unverified
/// fallback.
struct RateSearchResult {
    double r = 0.0;
    bool feasible = true;
};

/// log2(1 + x) in bits for a nonnegative SNR-like argument.
double rate_bits(double snr);

/// Phase-1 achievable rate of one downlink channel under covariance sigma.
double phase1_rate(const ComplexVector& h, const HermitianMatrix& sigma,
                   double rho);

/// Phase-2 achievable rate of UE k listening to the relay set, which
/// retransmits at per-UE SNR rho_ue. The received amplitude is the coherent
/// complex sum over the relays' D2D channels; destructive phase alignment is
/// physical, not an error. The zero D2D diagonal makes a relay's own index
/// contribute nothing, so passing k inside relay_set is harmless.
double phase2_rate(Index k, const std::vector<Index>& relay_set,
                   const ChannelSet& channel_set, double rho_ue);

/// Run both phases at encoding rate r: relay set from the phase-1
/// thresholds, then phase-2 rates against exactly that relay set.
DecodeOutcome evaluate(const ChannelSet& channel_set,
                       const HermitianMatrix& sigma, double r, double rho,
                       double rho_ue,
                       const Tolerances& tol = default_tolerances());

/// Minimum number of successes required by outage target epsilon among K
/// UEs: ceil((1 - epsilon) * K), computed with a tiny slack so that exact
/// products such as 0.9 * 20 do not round up to 19.
int required_success_count(Index K, double epsilon);

/// Largest r >= 0 whose success count reaches required_success_count.
/// The success count is piecewise constant in r with breakpoints only at
/// the phase-1 rates {t_k} and at the phase-2 rates {s_k(U_i)} of the
/// nested relay sets U_i induced by sorted thresholds, so enumerating that
/// finite candidate set maximizes exactly. The winner is re-verified with
/// `evaluate` before being returned. Always feasible: r = 0 decodes for
/// everyone.
RateSearchResult max_feasible_rate(const ChannelSet& channel_set,
                                   const HermitianMatrix& sigma,
                                   double epsilon, double rho, double rho_ue,
                                   const Tolerances& tol =
                                       default_tolerances());

/// max_feasible_rate restricted to candidates in [lower, upper]; the
/// endpoints themselves are candidates. Returns {lower, false} when nothing
/// in range is feasible.
RateSearchResult constrained_max_rate(const ChannelSet& channel_set,
                                      const HermitianMatrix& sigma,
                                      double epsilon, double rho,
                                      double rho_ue, double lower,
                                      double upper,
                                      const Tolerances& tol =
                                          default_tolerances());

}  // namespace d2dmam

#endif  // D2DMAM_PROTOCOL_HPP
