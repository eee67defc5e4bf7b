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

#ifndef D2DMAM_TYPES_HPP
#define D2DMAM_TYPES_HPP

#include <Eigen/Core>
#include <complex>

namespace d2dmam {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Centralized numeric tolerances. Every comparison threshold used by the
/// library lives here so a run can be reproduced with non-default slack.
struct Tolerances {
    double hermitian_symmetry = 1e-12;  // max asymmetry accepted after (A+A^H)/2
    double eig_residual = 1e-9;         // ||A v - lambda v|| cap, relative to ||A||_F
    double psd_slack = 1e-10;           // eigenvalue floor for feasibility checks
    double trace_slack = 1e-10;         // trace cap overshoot for feasibility checks
    double decode_slack_bits = 1e-12;   // threshold slack in favor of decoding
    double rate_equal_bits = 1e-12;     // two rates closer than this are equal
    Index eig_dim_cap = 256;            // largest matrix the eigensolver accepts
    int eig_max_sweeps = 60;            // cyclic Jacobi sweep cap
};

const Tolerances& default_tolerances();

}  // namespace d2dmam

#endif  // D2DMAM_TYPES_HPP
