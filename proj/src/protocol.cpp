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

#include "d2dmam/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace d2dmam {

namespace {

void check_snr(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) +
                                    " must be finite and >= 0");
    }
}

void check_channel_set(const ChannelSet& cs) {
    const Index k = cs.downlink.cols();
    if (cs.downlink.rows() < 1 || k < 1) {
        throw std::invalid_argument("ChannelSet: empty downlink matrix");
    }
    if (cs.d2d.rows() != k || cs.d2d.cols() != k) {
        throw std::invalid_argument("ChannelSet: D2D matrix must be K x K");
    }
    if (!cs.downlink.allFinite() || !cs.d2d.allFinite()) {
        throw std::invalid_argument("ChannelSet: channels must be finite");
    }
}

// Per-(sigma, rho, rho_ue) tables for the exact rate search. `order` sorts
// UEs by descending phase-1 rate, so every relay set that can occur is a
// prefix of it; s(k, i) is UE k's phase-2 rate when the top-i UEs relay.
struct RateTables {
    RealVector t;               // phase-1 rates, UE order
    std::vector<double> t_desc;  // t sorted descending
    RealMatrix s;               // K x (K+1), prefix relay sets
};

RateTables build_tables(const ChannelSet& cs, const HermitianMatrix& sigma,
                        double rho, double rho_ue) {
    const Index k_total = cs.downlink.cols();
    RateTables tb;

    const RealVector q = quadratic_forms(sigma, cs.downlink);
    tb.t.resize(k_total);
    for (Index k = 0; k < k_total; ++k) tb.t(k) = rate_bits(rho * q(k));

    std::vector<Index> order(static_cast<size_t>(k_total));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (tb.t(a) != tb.t(b)) return tb.t(a) > tb.t(b);
        return a < b;
    });
    tb.t_desc.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        tb.t_desc[i] = tb.t(order[i]);
    }

    const double amp = std::sqrt(rho_ue);
    tb.s.resize(k_total, k_total + 1);
    for (Index k = 0; k < k_total; ++k) {
        Complex sum(0.0, 0.0);
        tb.s(k, 0) = 0.0;
        for (Index i = 0; i < k_total; ++i) {
            sum += amp * cs.d2d(k, order[static_cast<size_t>(i)]);
            tb.s(k, i + 1) = rate_bits(std::norm(sum));
        }
    }
    return tb;
}

// Success count at encoding rate r. Relay membership and the phase-2 rates
// use the same threshold rule as `evaluate`; only the phase-2 summation
// order differs (threshold order here, ascending index there).
int count_at(const RateTables& tb, double r, double slack) {
    const double thr = r - slack;
    const auto first_below = std::partition_point(
        tb.t_desc.begin(), tb.t_desc.end(),
        [&](double v) { return v >= thr; });
    const Index relays =
        static_cast<Index>(first_below - tb.t_desc.begin());
    int count = static_cast<int>(relays);
    for (Index k = 0; k < tb.t.size(); ++k) {
        if (tb.t(k) < thr && tb.s(k, relays) >= thr) ++count;
    }
    return count;
}

// All rates at which the success count can change, clipped to [lower,
// upper]; the endpoints themselves are included. Descending and deduped.
std::vector<double> collect_candidates(const RateTables& tb, double lower,
                                       double upper) {
    const Index k_total = tb.t.size();
    std::vector<double> cands;
    cands.reserve(static_cast<size_t>(k_total) *
                      static_cast<size_t>(k_total + 2) +
                  3);
    const auto add = [&](double v) {
        if (v >= lower && v <= upper) cands.push_back(v);
    };
    add(0.0);
    cands.push_back(lower);
    if (std::isfinite(upper)) cands.push_back(upper);
    for (Index k = 0; k < k_total; ++k) add(tb.t(k));
    for (Index k = 0; k < k_total; ++k) {
        for (Index i = 1; i <= k_total; ++i) add(tb.s(k, i));
    }
    std::sort(cands.begin(), cands.end(), std::greater<double>());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

RateSearchResult search_feasible_rate(const ChannelSet& cs,
                                      const HermitianMatrix& sigma,
                                      double epsilon, double rho,
                                      double rho_ue, double lower,
                                      double upper, const Tolerances& tol) {
    const int required = required_success_count(cs.downlink.cols(), epsilon);
    const RateTables tb = build_tables(cs, sigma, rho, rho_ue);
    const std::vector<double> cands = collect_candidates(tb, lower, upper);
    for (double c : cands) {
        if (count_at(tb, c, tol.decode_slack_bits) < required) continue;
        // Re-verify with `evaluate`: its phase-2 sums run in a different
        // order, and the returned rate must be feasible under it exactly.
        const DecodeOutcome oc = evaluate(cs, sigma, c, rho, rho_ue, tol);
        if (oc.success_count >= required) return {c, true};
    }
    return {lower, false};
}

}  // namespace

double rate_bits(double snr) {
    check_snr(snr, "snr");
    return std::log1p(snr) / std::numbers::ln2;
}

double phase1_rate(const ComplexVector& h, const HermitianMatrix& sigma,
                   double rho) {
    check_snr(rho, "rho");
    return rate_bits(rho * quadratic_form(sigma, h));
}

double phase2_rate(Index k, const std::vector<Index>& relay_set,
                   const ChannelSet& channel_set, double rho_ue) {
    check_snr(rho_ue, "rho_ue");
    const Index k_total = channel_set.d2d.rows();
    if (k < 0 || k >= k_total) {
        throw std::invalid_argument("phase2_rate: UE index out of range");
    }
    const double amp = std::sqrt(rho_ue);
    Complex sum(0.0, 0.0);
    for (Index j : relay_set) {
        if (j < 0 || j >= k_total) {
            throw std::invalid_argument("phase2_rate: relay out of range");
        }
        sum += amp * channel_set.d2d(k, j);
    }
    return rate_bits(std::norm(sum));
}

DecodeOutcome evaluate(const ChannelSet& channel_set,
                       const HermitianMatrix& sigma, double r, double rho,
                       double rho_ue, const Tolerances& tol) {
    check_channel_set(channel_set);
    check_snr(rho, "rho");
    check_snr(rho_ue, "rho_ue");
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("evaluate: r must be finite and >= 0");
    }
    if (sigma.dim() != channel_set.downlink.rows()) {
        throw std::invalid_argument("evaluate: sigma dimension mismatch");
    }

    const Index k_total = channel_set.downlink.cols();
    const double thr = r - tol.decode_slack_bits;
    DecodeOutcome out;

    const RealVector q = quadratic_forms(sigma, channel_set.downlink);
    out.phase1_rates.resize(k_total);
    for (Index k = 0; k < k_total; ++k) {
        out.phase1_rates(k) = rate_bits(rho * q(k));
        if (out.phase1_rates(k) >= thr) out.relay_set.push_back(k);
    }

    out.phase2_rates.resize(k_total);
    out.success_flags.assign(static_cast<size_t>(k_total), false);
    for (Index k = 0; k < k_total; ++k) {
        out.phase2_rates(k) =
            phase2_rate(k, out.relay_set, channel_set, rho_ue);
        const bool ok =
            out.phase1_rates(k) >= thr || out.phase2_rates(k) >= thr;
        out.success_flags[static_cast<size_t>(k)] = ok;
        if (ok) ++out.success_count;
    }
    out.success_fraction =
        static_cast<double>(out.success_count) / static_cast<double>(k_total);
    return out;
}

int required_success_count(Index K, double epsilon) {
    if (K < 1) {
        throw std::invalid_argument("required_success_count: K must be >= 1");
    }
    if (!(epsilon >= 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument(
            "required_success_count: epsilon must be in [0, 1)");
    }
    // The 1e-9 slack keeps exactly representable products from rounding up:
    // in doubles 0.9 * 20 slightly exceeds 18, and a bare ceil would demand
    // 19 successes.
    const int raw = static_cast<int>(
        std::ceil((1.0 - epsilon) * static_cast<double>(K) - 1e-9));
    return std::clamp(raw, 1, static_cast<int>(K));
}

RateSearchResult max_feasible_rate(const ChannelSet& channel_set,
                                   const HermitianMatrix& sigma,
                                   double epsilon, double rho, double rho_ue,
                                   const Tolerances& tol) {
    check_channel_set(channel_set);
    check_snr(rho, "rho");
    check_snr(rho_ue, "rho_ue");
    return search_feasible_rate(channel_set, sigma, epsilon, rho, rho_ue,
                                0.0, std::numeric_limits<double>::infinity(),
                                tol);
}

RateSearchResult constrained_max_rate(const ChannelSet& channel_set,
                                      const HermitianMatrix& sigma,
                                      double epsilon, double rho,
                                      double rho_ue, double lower,
                                      double upper, const Tolerances& tol) {
    check_channel_set(channel_set);
    check_snr(rho, "rho");
    check_snr(rho_ue, "rho_ue");
    if (!(lower >= 0.0) || !std::isfinite(lower) || !(lower <= upper)) {
        throw std::invalid_argument(
            "constrained_max_rate: need 0 <= lower <= upper");
    }
    return search_feasible_rate(channel_set, sigma, epsilon, rho, rho_ue,
                                lower, upper, tol);
}

}  // namespace d2dmam
