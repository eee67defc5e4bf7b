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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "d2dmam/cxmat.hpp"
#include "d2dmam/solver.hpp"
#include "support/oracles.hpp"

using namespace d2dmam;
using d2dmam::testing::grid_maxmin_oracle;
using d2dmam::testing::random_channel_matrix;
using d2dmam::testing::unit_scaled_channel_matrix;

namespace {

/// Feasibility and self-consistency checks every solution must satisfy.
void check_solution(const MaxMinProblem& problem, const MaxMinSolution& sol) {
    const Tolerances& tol = default_tolerances();
    const auto eig = hermitian_eig(sol.sigma);
    CHECK(eig.eigenvalues.minCoeff() >= -tol.psd_slack);
    CHECK(sol.sigma.trace() <= 1.0 + tol.trace_slack);
    const double recomputed =
        quadratic_forms(sol.sigma, problem.channels).minCoeff();
    CHECK(sol.value == doctest::Approx(recomputed).epsilon(1e-10));
    CHECK(sol.certified_gap >= 0.0);
    CHECK(sol.iterations >= 0);
}

}  // namespace

TEST_CASE("problem construction validates input") {
    CHECK_THROWS_AS(MaxMinProblem{ComplexMatrix(2, 0)}, std::invalid_argument);

    ComplexMatrix with_zero_column = ComplexMatrix::Zero(2, 2);
    with_zero_column(0, 0) = 1.0;  // column 1 stays zero
    CHECK_THROWS_AS(MaxMinProblem{with_zero_column}, std::invalid_argument);

    RngStream rng(1);
    ComplexMatrix bad = random_channel_matrix(rng, 2, 2);
    bad(1, 1) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(MaxMinProblem{bad}, std::invalid_argument);

    // Vector-of-vectors constructor requires equal dimensions.
    std::vector<ComplexVector> ragged{ComplexVector::Ones(2),
                                      ComplexVector::Ones(3)};
    CHECK_THROWS_AS(MaxMinProblem{ragged}, std::invalid_argument);
}

TEST_CASE("settings validation") {
    RngStream rng(2);
    const MaxMinProblem problem{random_channel_matrix(rng, 2, 2)};
    SolverSettings s;
    s.tolerance = 0.0;
    CHECK_THROWS_AS(solve_maxmin(problem, s), std::invalid_argument);
    s = SolverSettings{};
    s.max_iterations = 0;
    CHECK_THROWS_AS(solve_maxmin(problem, s), std::invalid_argument);
}

TEST_CASE("single user: matched rank-1 beamforming is optimal") {
    RngStream rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Index m = 1 + static_cast<Index>(rng.next_below(6));
        const ComplexMatrix h = random_channel_matrix(rng, m, 1);
        const MaxMinProblem problem{h};
        const MaxMinSolution sol = solve_maxmin(problem);
        check_solution(problem, sol);

        const double power = h.col(0).squaredNorm();
        CHECK(sol.value == doctest::Approx(power).epsilon(1e-6));
        // Covariance collapses onto the matched projector h h^H / ||h||^2.
        const ComplexMatrix matched =
            h.col(0) * h.col(0).adjoint() / power;
        CHECK((sol.sigma.mat() - matched).norm() <= 2e-2);
    }
}

TEST_CASE("orthogonal symmetric pair splits power evenly") {
    const double c = 1.7;
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = c;
    h(1, 1) = c;
    const MaxMinProblem problem{h};
    const MaxMinSolution sol = solve_maxmin(problem);
    check_solution(problem, sol);
    CHECK(sol.value == doctest::Approx(c * c / 2.0).epsilon(1e-5));
    CHECK(sol.sigma.mat()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(sol.sigma.mat()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("grid oracle agrees with closed forms") {
    // Validates the oracle itself before it is used as a referee.
    RngStream rng(4);
    const ComplexMatrix h1 = unit_scaled_channel_matrix(rng, 2, 1);
    const auto single = grid_maxmin_oracle(h1);
    CHECK(single.value == doctest::Approx(h1.col(0).squaredNorm()).epsilon(1e-3));

    ComplexMatrix ortho = ComplexMatrix::Zero(2, 2);
    ortho(0, 0) = 1.0;
    ortho(1, 1) = 1.0;
    const auto pair = grid_maxmin_oracle(ortho);
    CHECK(pair.value == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("solver matches the dense grid oracle on small instances") {
    RngStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Index users = 1 + static_cast<Index>(rng.next_below(3));
        const ComplexMatrix h = unit_scaled_channel_matrix(rng, 2, users);
        const MaxMinProblem problem{h};
        const MaxMinSolution sol = solve_maxmin(problem);
        check_solution(problem, sol);

        const auto oracle = grid_maxmin_oracle(h);
        CHECK(std::abs(sol.value - oracle.value) <= 1e-3);
    }
}

TEST_CASE("scaling the channels by c scales the value by c squared") {
    RngStream rng(6);
    for (int trial = 0; trial < 8; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.next_below(3));
        const Index users = 1 + static_cast<Index>(rng.next_below(4));
        const ComplexMatrix h = random_channel_matrix(rng, m, users);
        const double c = (trial % 2 == 0) ? 4.0 : 0.125;

        const MaxMinSolution base = solve_maxmin(MaxMinProblem{h});
        const MaxMinSolution scaled = solve_maxmin(MaxMinProblem{c * h});
        CHECK(scaled.value ==
              doctest::Approx(c * c * base.value).epsilon(1e-8));
    }
}

TEST_CASE("adding a user never raises the value") {
    RngStream rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.next_below(3));
        const ComplexMatrix h = random_channel_matrix(rng, m, 5);
        double previous = std::numeric_limits<double>::infinity();
        for (Index users = 1; users <= 5; ++users) {
            const MaxMinSolution sol =
                solve_maxmin(MaxMinProblem{h.leftCols(users)});
            // Slack covers the solver's accuracy on both sides of the
            // pair; each solve is only certified to the grid-oracle level.
            CHECK(sol.value <= previous * (1.0 + 1e-3) + 1e-12);
            previous = sol.value;
        }
    }
}

TEST_CASE("value dominates the uniform-mixture feasible point") {
    RngStream rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.next_below(3));
        const Index users = 1 + static_cast<Index>(rng.next_below(4));
        const ComplexMatrix h = random_channel_matrix(rng, m, users);

        // Explicit feasible point: uniform mixture of matched projectors.
        ComplexMatrix mix = ComplexMatrix::Zero(m, m);
        for (Index k = 0; k < users; ++k) {
            mix += h.col(k) * h.col(k).adjoint() / h.col(k).squaredNorm();
        }
        mix /= static_cast<double>(users);
        const double mix_value =
            quadratic_forms(HermitianMatrix(mix), h).minCoeff();

        const double floor =
            h.colwise().squaredNorm().minCoeff() / static_cast<double>(users);
        const MaxMinSolution sol = solve_maxmin(MaxMinProblem{h});
        CHECK(mix_value >= floor - 1e-12);  // mixture already beats the bound
        CHECK(sol.value >= mix_value * (1.0 - 1e-5));
        CHECK(sol.value >= floor * (1.0 - 1e-5));
    }
}

TEST_CASE("iteration budget is respected and reported") {
    RngStream rng(9);
    const ComplexMatrix h = random_channel_matrix(rng, 4, 6);
    SolverSettings tight;
    tight.max_iterations = 3;
    const MaxMinSolution sol = solve_maxmin(MaxMinProblem{h}, tight);
    CHECK(sol.iterations <= 3);
    CHECK_FALSE(sol.converged);
    // Still feasible and no worse than the isotropic start.
    const double iso =
        quadratic_forms(HermitianMatrix(ComplexMatrix::Identity(4, 4) / 4.0), h)
            .minCoeff();
    CHECK(sol.value >= iso * (1.0 - 1e-12));

    const MaxMinSolution full = solve_maxmin(MaxMinProblem{h});
    CHECK(full.converged);
    CHECK(full.value >= sol.value * (1.0 - 1e-12));
}

TEST_CASE("certified gap is tight on easy instances") {
    // Single user: the softmin certificate pins the optimum exactly, so the
    // reported gap must be small relative to the value.
    RngStream rng(10);
    const ComplexMatrix h = random_channel_matrix(rng, 3, 1);
    const MaxMinSolution sol = solve_maxmin(MaxMinProblem{h});
    CHECK(sol.certified_gap >= 0.0);
    CHECK(sol.certified_gap <= 1e-3 * sol.value);
}

TEST_CASE("capacity_rate closed forms") {
    MaxMinSolution sol;
    sol.value = 0.0;
    CHECK(capacity_rate(sol, 1000.0) == 0.0);

    sol.value = 3.0;
    CHECK(capacity_rate(sol, 1.0) == doctest::Approx(2.0));

    sol.value = 0.5;
    CHECK(capacity_rate(sol, 2.0) == doctest::Approx(1.0));
}
