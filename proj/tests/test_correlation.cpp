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

#include <doctest.h>

#include <armadillo>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "dscat/correlation.hpp"

using namespace dscat;

namespace
{

constexpr double kTwoPi = 6.283185307179586476925287;

// Independent reference for the array correlation: trapezoid rule with a
// dense grid over the same 8-sigma window, normalized by the window mass.
std::complex<double> trapezoid_correlation(long lag, double angle, double spread, double spacing)
{
    const std::size_t n = 400001;
    double lo = angle - 8.0 * spread, hi = angle + 8.0 * spread;
    double h = (hi - lo) / double(n - 1);
    std::complex<double> acc(0.0, 0.0);
    double mass = 0.0;
    for (std::size_t q = 0; q < n; ++q)
    {
        double phi = lo + h * double(q);
        double t = (phi - angle) / spread;
        double w = std::exp(-0.5 * t * t);
        if (q == 0 || q + 1 == n)
            w *= 0.5;
        double phase = kTwoPi * spacing * double(lag) * std::sin(phi);
        acc += w * std::complex<double>(std::cos(phase), std::sin(phase));
        mass += w;
    }
    return acc / mass;
}

} // namespace

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly")
{
    arma::vec nodes, weights;
    gauss_legendre(5, nodes, weights);
    REQUIRE(nodes.n_elem == 5);
    REQUIRE(weights.n_elem == 5);

    // int_{-1}^{1} x^k dx = 2/(k+1) for even k, 0 for odd k; exact up to k = 9
    for (std::size_t k = 0; k < 10; ++k)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < 5; ++i)
            acc += weights(i) * std::pow(nodes(i), double(k));
        double expect = (k % 2 == 0) ? 2.0 / double(k + 1) : 0.0;
        CHECK(std::abs(acc - expect) < 1e-13);
    }

    SUBCASE("weights are positive and sum to the interval length")
    {
        CHECK(weights.min() > 0.0);
        CHECK(arma::accu(weights) == doctest::Approx(2.0));
    }

    SUBCASE("nodes are symmetric about zero")
    {
        arma::vec sorted = arma::sort(nodes);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(std::abs(sorted(i) + sorted(4 - i)) < 1e-14);
    }

    SUBCASE("degree 2n is NOT integrated exactly (rule is not overclaimed)")
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < 5; ++i)
            acc += weights(i) * std::pow(nodes(i), 10.0);
        CHECK(std::abs(acc - 2.0 / 11.0) > 1e-6);
    }

    CHECK_THROWS_AS(gauss_legendre(0, nodes, weights), std::invalid_argument);
}

TEST_CASE("array correlation matches an independent quadrature of the same density")
{
    const double angle = 30.0 * arma::datum::pi / 180.0;
    const double spread = 10.0 * arma::datum::pi / 180.0;
    const double spacing = 0.5;
    const std::size_t m = 4;

    arma::cx_mat r = bs_correlation_matrix(m, angle, spread, spacing);
    REQUIRE(r.n_rows == m);
    REQUIRE(r.n_cols == m);

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
        {
            std::complex<double> expect = trapezoid_correlation(long(i) - long(j), angle, spread, spacing);
            CHECK(std::abs(r(i, j) - expect) < 1e-8);
        }
}

TEST_CASE("array correlation structural properties")
{
    const double angle = -0.7;
    const double spread = 10.0 * arma::datum::pi / 180.0;
    arma::cx_mat r = bs_correlation_matrix(16, angle, spread, 0.5);

    SUBCASE("unit diagonal, trace = antennas")
    {
        for (std::size_t i = 0; i < 16; ++i)
        {
            CHECK(r(i, i).real() == doctest::Approx(1.0));
            CHECK(std::abs(r(i, i).imag()) < 1e-14);
        }
        CHECK(arma::trace(r).real() == doctest::Approx(16.0));
    }

    SUBCASE("hermitian")
    {
        CHECK(arma::abs(r - r.t()).max() < 1e-14);
    }

    SUBCASE("positive semidefinite")
    {
        arma::vec eig = arma::eig_sym(r);
        CHECK(eig.min() > -1e-10);
    }

    SUBCASE("off-diagonal magnitudes strictly below one")
    {
        CHECK(std::abs(r(0, 1)) < 1.0);
        CHECK(std::abs(r(0, 15)) < std::abs(r(0, 1)));
    }
}

TEST_CASE("array correlation limit cases")
{
    SUBCASE("zero spread gives the rank-one steering covariance")
    {
        const double angle = 0.4;
        arma::cx_mat r = bs_correlation_matrix(8, angle, 0.0, 0.5);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
            {
                double phase = kTwoPi * 0.5 * (double(i) - double(j)) * std::sin(angle);
                std::complex<double> expect(std::cos(phase), std::sin(phase));
                CHECK(std::abs(r(i, j) - expect) < 1e-12);
            }
        arma::vec eig = arma::eig_sym(r);
        CHECK(eig.max() == doctest::Approx(8.0));  // rank one: all trace in one mode
        CHECK(std::abs(eig(6)) < 1e-10);
    }

    SUBCASE("non-finite spread gives the identity")
    {
        arma::cx_mat r = bs_correlation_matrix(6, 1.0, std::numeric_limits<double>::infinity(), 0.5);
        CHECK(arma::abs(r - arma::cx_mat(6, 6, arma::fill::eye)).max() == 0.0);
    }

    SUBCASE("invalid arguments throw")
    {
        CHECK_THROWS_AS(bs_correlation_matrix(0, 0.0, 0.1, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(bs_correlation_matrix(4, 0.0, 0.1, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(bs_correlation_matrix(4, 0.0, -0.1, 0.5), std::invalid_argument);
    }
}

TEST_CASE("scatterer correlation is the exponential profile")
{
    arma::mat t = scatterer_correlation_matrix(9, 0.55);
    REQUIRE(t.n_rows == 9);

    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            CHECK(t(i, j) == doctest::Approx(std::pow(0.55, std::abs(double(i) - double(j))))
                                 .epsilon(1e-14));

    CHECK(arma::trace(t) == doctest::Approx(9.0));
    CHECK(arma::eig_sym(t).min() > 0.0); // exponential profile with |r|<1 is positive definite

    SUBCASE("r = 0 gives the identity")
    {
        arma::mat id = scatterer_correlation_matrix(5, 0.0);
        CHECK(arma::abs(id - arma::eye(5, 5)).max() == 0.0);
    }

    SUBCASE("r outside [0, 1) throws")
    {
        CHECK_THROWS_AS(scatterer_correlation_matrix(5, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(scatterer_correlation_matrix(5, -0.2), std::invalid_argument);
        CHECK_THROWS_AS(scatterer_correlation_matrix(0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("matrix square roots reproduce their input")
{
    SUBCASE("hermitian root of a correlation matrix")
    {
        arma::cx_mat r = bs_correlation_matrix(12, 0.3, 0.2, 0.5);
        arma::cx_mat s = hermitian_sqrt(r);
        CHECK(arma::abs(s - s.t()).max() < 1e-12);           // root is hermitian
        CHECK(arma::abs(s * s - r).max() < 1e-10);           // and squares back
    }

    SUBCASE("symmetric root of the scatterer profile")
    {
        arma::mat t = scatterer_correlation_matrix(21, 0.55);
        arma::mat s = symmetric_sqrt(t);
        CHECK(arma::abs(s - s.t()).max() < 1e-12);
        CHECK(arma::abs(s * s - t).max() < 1e-10);
    }

    SUBCASE("root of the identity is the identity")
    {
        arma::cx_mat s = hermitian_sqrt(arma::cx_mat(7, 7, arma::fill::eye));
        CHECK(arma::abs(s - arma::cx_mat(7, 7, arma::fill::eye)).max() < 1e-14);
    }

    SUBCASE("rank-deficient input is accepted, indefinite input is not")
    {
        arma::cx_mat outer(3, 3);
        arma::cx_vec a = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
        outer = a * a.t(); // PSD, rank one
        arma::cx_mat s = hermitian_sqrt(outer);
        CHECK(arma::abs(s * s - outer).max() < 1e-10);

        arma::cx_mat bad(2, 2, arma::fill::eye);
        bad(1, 1) = std::complex<double>(-1.0, 0.0);
        CHECK_THROWS_AS(hermitian_sqrt(bad), std::invalid_argument);
    }
}
