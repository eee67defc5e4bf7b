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

#include "d2dmam/cxmat.hpp"

#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace d2dmam {

const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

EigNonConvergence::EigNonConvergence(double residual_, int sweeps_)
    : std::runtime_error("hermitian_eig: off-diagonal residual " + std::to_string(residual_) +
                         " after " + std::to_string(sweeps_) + " sweeps"),
      residual(residual_),
      sweeps(sweeps_) {}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("HermitianMatrix: input must be square");
    if (!a.allFinite())
        throw std::invalid_argument("HermitianMatrix: input must be finite");
    m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::Identity(Index m) {
    return HermitianMatrix(ComplexMatrix::Identity(m, m));
}

HermitianMatrix HermitianMatrix::Zero(Index m) {
    return HermitianMatrix(ComplexMatrix::Zero(m, m));
}

double quadratic_form(const HermitianMatrix& sigma, const ComplexVector& h) {
    if (h.size() != sigma.dim())
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    double v = h.dot(sigma.mat() * h).real();
    // For PSD sigma the exact value is nonnegative; absorb rounding noise.
    if (v < 0.0 && v > -1e-12 * (1.0 + h.squaredNorm())) v = 0.0;
    return v;
}

RealVector quadratic_forms(const HermitianMatrix& sigma, const ComplexMatrix& channels) {
    if (channels.rows() != sigma.dim())
        throw std::invalid_argument("quadratic_forms: dimension mismatch");
    const ComplexMatrix g = sigma.mat() * channels;
    RealVector q(channels.cols());
    for (Index k = 0; k < channels.cols(); ++k) {
        double v = channels.col(k).dot(g.col(k)).real();
        if (v < 0.0 && v > -1e-12 * (1.0 + channels.col(k).squaredNorm())) v = 0.0;
        q[k] = v;
    }
    return q;
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& a, const Tolerances& tol) {
    const Index n = a.dim();
    if (n > tol.eig_dim_cap)
        throw std::invalid_argument("hermitian_eig: dimension exceeds configured cap");

    ComplexMatrix work = a.mat();
    ComplexMatrix vecs = ComplexMatrix::Identity(n, n);
    const double scale = std::max(work.norm(), 1e-300);
    const double target = 1e-11 * scale;

    int sweep = 0;
    double off = offdiag_norm(work);
    while (off > target) {
        if (sweep >= tol.eig_max_sweeps) throw EigNonConvergence(off / scale, sweep);
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                if (std::norm(work(p, q)) <= 1e-30 * scale * scale) continue;
                Eigen::JacobiRotation<Complex> rot;
                rot.makeJacobi(work(p, p).real(), work(p, q), work(q, q).real());
                work.applyOnTheLeft(p, q, rot.adjoint());
                work.applyOnTheRight(p, q, rot);
                work(p, q) = work(q, p) = Complex(0.0, 0.0);
                work(p, p) = Complex(work(p, p).real(), 0.0);
                work(q, q) = Complex(work(q, q).real(), 0.0);
                vecs.applyOnTheRight(p, q, rot);
            }
        }
        ++sweep;
        off = offdiag_norm(work);
    }

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    for (Index i = 0; i < n; ++i) dec.eigenvalues[i] = work(i, i).real();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index i, Index j) { return dec.eigenvalues[i] < dec.eigenvalues[j]; });

    RealVector sorted_vals(n);
    ComplexMatrix sorted_vecs(n, n);
    for (Index i = 0; i < n; ++i) {
        sorted_vals[i] = dec.eigenvalues[order[static_cast<std::size_t>(i)]];
        sorted_vecs.col(i) = vecs.col(order[static_cast<std::size_t>(i)]);
    }
    dec.eigenvalues = std::move(sorted_vals);
    dec.eigenvectors = std::move(sorted_vecs);
    return dec;
}

RealVector project_simplex_ball(const RealVector& y) {
    RealVector x = y.cwiseMax(0.0);
    const double total = x.sum();
    if (total <= 1.0) return x;

    // Sorted-threshold projection onto {x >= 0, sum(x) = 1}.
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (j + 1 == sorted.size() || sorted[j + 1] <= candidate) {
            theta = candidate;
            break;
        }
    }
    return (x.array() - theta).max(0.0).matrix();
}

HermitianMatrix project_spectahedron(const HermitianMatrix& a, const Tolerances& tol) {
    const EigenDecomposition dec = hermitian_eig(a, tol);
    const RealVector lambda = project_simplex_ball(dec.eigenvalues);
    const ComplexMatrix projected = dec.eigenvectors * lambda.asDiagonal() *
                                    dec.eigenvectors.adjoint();
    return HermitianMatrix(projected);
}

}  // namespace d2dmam
