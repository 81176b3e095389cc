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

#include "dscat/correlation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dscat
{

void gauss_legendre(std::size_t n, arma::vec &nodes, arma::vec &weights)
{
    if (n == 0)
        throw std::invalid_argument("gauss_legendre: order must be positive");

    static std::mutex cache_mutex;
    static std::map<std::size_t, std::pair<arma::vec, arma::vec>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end())
        {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }

    // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
    // 2 * (first eigenvector component)^2.
    arma::mat jacobi(n, n, arma::fill::zeros);
    for (std::size_t k = 1; k < n; ++k)
    {
        double b = double(k) / std::sqrt(4.0 * double(k) * double(k) - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }

    arma::vec eigval;
    arma::mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, jacobi))
        throw std::runtime_error("gauss_legendre: eigendecomposition failed");

    arma::vec w(n);
    for (std::size_t i = 0; i < n; ++i)
        w(i) = 2.0 * eigvec(0, i) * eigvec(0, i);

    nodes = eigval;
    weights = w;
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(n, std::make_pair(nodes, weights));
}

arma::cx_mat bs_correlation_matrix(std::size_t antennas, double angle_rad, double spread_rad,
                                   double spacing_wavelengths)
{
    if (antennas == 0)
        throw std::invalid_argument("bs_correlation_matrix: antennas must be positive");
    if (!(spacing_wavelengths > 0.0))
        throw std::invalid_argument("bs_correlation_matrix: spacing must be positive");
    if (spread_rad < 0.0)
        throw std::invalid_argument("bs_correlation_matrix: spread must be non-negative");

    std::size_t m = antennas;
    if (!std::isfinite(spread_rad))
        return arma::cx_mat(m, m, arma::fill::eye);

    constexpr double two_pi = 6.283185307179586476925287;
    arma::cx_vec first_row(m);

    if (spread_rad == 0.0)
    {
        // limit case: all energy from the nominal angle
        for (std::size_t d = 0; d < m; ++d)
        {
            double phase = two_pi * spacing_wavelengths * double(d) * std::sin(angle_rad);
            first_row(d) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    else
    {
        // Quadrature window of +-8 sigma captures the Gaussian to ~1e-15.
        // The integrand oscillates at most spacing * (m-1) * 16 sigma cycles
        // across the window; scale the order accordingly.
        double cycles = spacing_wavelengths * double(m - 1) * 16.0 * spread_rad;
        std::size_t order = std::size_t(std::ceil(2.2 * cycles)) + 32;
        if (order < 128)
            order = 128;

        arma::vec nodes, weights;
        gauss_legendre(order, nodes, weights);

        arma::vec phi = angle_rad + 8.0 * spread_rad * nodes;
        arma::vec dens(order);
        for (std::size_t q = 0; q < order; ++q)
        {
            double t = (phi(q) - angle_rad) / spread_rad;
            dens(q) = weights(q) * std::exp(-0.5 * t * t);
        }
        double total = arma::accu(dens);

        // steering phases advance by a fixed step per antenna at each node,
        // so the row entries come from running complex powers
        arma::cx_vec step(order), run(order, arma::fill::ones);
        for (std::size_t q = 0; q < order; ++q)
        {
            double s = two_pi * spacing_wavelengths * std::sin(phi(q));
            step(q) = std::complex<double>(std::cos(s), std::sin(s));
        }
        for (std::size_t d = 0; d < m; ++d)
        {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t q = 0; q < order; ++q)
                acc += dens(q) * run(q);
            first_row(d) = acc / total;
            if (d + 1 < m)
                run %= step;
        }
    }

    arma::cx_mat r(m, m);
    for (std::size_t i = 0; i < m; ++i)
    {
        r(i, i) = 1.0;
        for (std::size_t j = i + 1; j < m; ++j)
        {
            // R(i, j) carries the phase of (i - j): conjugate of first_row
            r(i, j) = std::conj(first_row(j - i));
            r(j, i) = first_row(j - i);
        }
    }
    return r;
}

arma::mat scatterer_correlation_matrix(std::size_t scatterers, double r)
{
    if (scatterers == 0)
        throw std::invalid_argument("scatterer_correlation_matrix: size must be positive");
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("scatterer_correlation_matrix: coefficient must lie in [0,1)");

    arma::mat t(scatterers, scatterers);
    for (std::size_t i = 0; i < scatterers; ++i)
        for (std::size_t j = 0; j < scatterers; ++j)
            t(i, j) = std::pow(r, double(i > j ? i - j : j - i));
    return t;
}

static void clamp_psd_eigenvalues(arma::vec &eigval, const char *who)
{
    for (std::size_t i = 0; i < eigval.n_elem; ++i)
    {
        if (eigval(i) < -1e-10)
            throw std::invalid_argument(std::string(who) + ": matrix is not positive semidefinite");
        if (eigval(i) < 0.0)
            eigval(i) = 0.0;
    }
}

arma::cx_mat hermitian_sqrt(const arma::cx_mat &m)
{
    if (m.n_rows != m.n_cols)
        throw std::invalid_argument("hermitian_sqrt: matrix must be square");

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, arma::cx_mat(0.5 * (m + m.t()))))
        throw std::runtime_error("hermitian_sqrt: eigendecomposition failed");

    clamp_psd_eigenvalues(eigval, "hermitian_sqrt");
    return eigvec * arma::diagmat(arma::sqrt(eigval)) * eigvec.t();
}

arma::mat symmetric_sqrt(const arma::mat &m)
{
    if (m.n_rows != m.n_cols)
        throw std::invalid_argument("symmetric_sqrt: matrix must be square");

    arma::vec eigval;
    arma::mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, arma::mat(0.5 * (m + m.t()))))
        throw std::runtime_error("symmetric_sqrt: eigendecomposition failed");

    clamp_psd_eigenvalues(eigval, "symmetric_sqrt");
    return eigvec * arma::diagmat(arma::sqrt(eigval)) * eigvec.t();
}

} // namespace dscat
