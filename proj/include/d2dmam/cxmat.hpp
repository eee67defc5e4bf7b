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

#ifndef D2DMAM_CXMAT_HPP
#define D2DMAM_CXMAT_HPP

#include <stdexcept>

#include "d2dmam/types.hpp"

namespace d2dmam {

/// Thrown when the eigensolver fails to reduce the off-diagonal mass below
/// its target within the sweep cap. Carries the final relative residual.
class EigNonConvergence : public std::runtime_error {
  public:
    EigNonConvergence(double residual, int sweeps);
    double residual;
    int sweeps;
};

/// Dense complex Hermitian matrix. Construction symmetrizes the input as
/// (A + A^H)/2 and rejects non-square or non-finite input, so a held value
/// always satisfies A == A^H to rounding.
class HermitianMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const ComplexMatrix& a);

    static HermitianMatrix Identity(Index m);
    static HermitianMatrix Zero(Index m);

    Index dim() const { return m_.rows(); }
    const ComplexMatrix& mat() const { return m_; }
    double trace() const { return m_.trace().real(); }

  private:
    ComplexMatrix m_;
};

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues in ascending
/// order, column i of `eigenvectors` paired with `eigenvalues[i]`, and the
/// eigenvector matrix unitary.
struct EigenDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Re(h^H sigma h). Exactly real for Hermitian sigma; tiny negative values
/// (|x| <= hermitian_symmetry scale) returned by rounding on PSD matrices
/// are clamped to zero.
double quadratic_form(const HermitianMatrix& sigma, const ComplexVector& h);

/// Re(h^H sigma h) simultaneously for every column of `channels`.
RealVector quadratic_forms(const HermitianMatrix& sigma, const ComplexMatrix& channels);

/// Full eigen-decomposition by cyclic Jacobi with complex plane rotations.
/// Unconditionally convergent at the dimensions used here; throws
/// EigNonConvergence past the sweep cap and std::invalid_argument above the
/// dimension cap.
EigenDecomposition hermitian_eig(const HermitianMatrix& a,
                                 const Tolerances& tol = default_tolerances());

/// Euclidean projection of a nonnegative vector clamp onto
/// {x >= 0, sum(x) <= 1}: clamp negatives, then the sorted-threshold simplex
/// projection when the clamped sum exceeds one.
RealVector project_simplex_ball(const RealVector& y);

/// Frobenius-nearest matrix in {S >= 0, tr(S) <= 1}: eigenvalues projected
/// onto the simplex ball, eigenvectors preserved.
HermitianMatrix project_spectahedron(const HermitianMatrix& a,
                                     const Tolerances& tol = default_tolerances());

}  // namespace d2dmam

#endif  // D2DMAM_CXMAT_HPP
