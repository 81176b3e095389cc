// SPDX-License-Identifier: Apache-2.0
//
// mimo-dscat: multi-cell massive MIMO simulator with uplink power control
// for double-scattering channels
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
// -------------------------------------------------------------------------

#ifndef DSCAT_CORRELATION_HPP
#define DSCAT_CORRELATION_HPP

#include <armadillo>
#include <cstddef>

namespace dscat
{

// Gauss-Legendre nodes and weights on [-1, 1], computed via the symmetric
// eigenproblem of the Jacobi matrix and cached per order (thread-safe).
void gauss_legendre(std::size_t n, arma::vec &nodes, arma::vec &weights);

// Antenna correlation of a half-wavelength-style uniform linear array whose
// incoming energy arrives from a Gaussian angle distribution centered at
// `angle_rad` with standard deviation `spread_rad`:
//
//   R(m, q) = integral over phi of exp(j 2 pi spacing (m - q) sin phi)
//             * Normal(phi; angle, spread^2) d phi,
//
// evaluated by Gauss-Legendre quadrature over an 8-sigma window and
// normalized so the diagonal is exactly 1 (trace M). The positive-mixture
// construction keeps the matrix positive semidefinite. Special cases:
// non-finite spread yields the identity (uncorrelated array), zero spread the
// rank-one steering covariance.
arma::cx_mat bs_correlation_matrix(std::size_t antennas, double angle_rad, double spread_rad,
                                   double spacing_wavelengths);

// Exponential correlation across scatterer indices: T(i, j) = r^|i-j| with
// r in [0, 1). Unit diagonal, hence trace S.
arma::mat scatterer_correlation_matrix(std::size_t scatterers, double r);

// Hermitian positive-semidefinite square root via eigendecomposition.
// Eigenvalues in [-1e-10, 0) are treated as rounding noise and clamped to
// zero; anything lower throws std::invalid_argument.
arma::cx_mat hermitian_sqrt(const arma::cx_mat &m);

// Same policy for real symmetric matrices.
arma::mat symmetric_sqrt(const arma::mat &m);

} // namespace dscat

#endif
