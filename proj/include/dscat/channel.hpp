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

#ifndef DSCAT_CHANNEL_HPP
#define DSCAT_CHANNEL_HPP

#include <armadillo>
#include <cstdint>
#include <vector>

#include "dscat/config.hpp"
#include "dscat/correlation.hpp"
#include "dscat/geometry.hpp"
#include "dscat/rng.hpp"

namespace dscat
{

// Second-order statistics of one user-to-BS link. The channel itself is
//
//   h = sqrt(beta / S) * Rb^(1/2) * G * Rs^(1/2) * g,
//
// with G (antennas x S) and g (S) independent standard complex Gaussians, so
// the aggregate covariance is beta * d * Rb with d = tr(Rs) / S. The channel
// is conditionally Gaussian given the scatterer leg but not Gaussian overall;
// only a large scatterer count washes that out.
struct LinkStatistics
{
    double beta = 0.0;       // large-scale gain (linear)
    double d = 1.0;          // scatterer-side gain, tr(Rs)/S
    std::size_t scatterers = 0;

    arma::cx_mat bs_corr;      // Rb, antennas x antennas, trace = antennas
    arma::mat scatter_corr;    // Rs, S x S, trace = S

    double scatter_corr_sq_trace = 0.0; // tr(Rs^2), used by the SE analysis

    // Square roots are computed on demand (prepare_sampling); empty until then.
    arma::cx_mat bs_corr_sqrt;
    arma::mat scatter_corr_sqrt;

    void validate() const; // throws std::invalid_argument
};

// Statistics for every (BS, user) pair of a drop, BS-major:
// links[bs * total_users + user].
struct LinkStatsGrid
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;
    std::size_t antennas = 0;
    std::size_t scatterers = 0;
    std::vector<LinkStatistics> links;

    std::size_t total_users() const { return cells * users_per_cell; }
    LinkStatistics &at(std::size_t bs, std::size_t user) { return links[bs * total_users() + user]; }
    const LinkStatistics &at(std::size_t bs, std::size_t user) const { return links[bs * total_users() + user]; }

    // Serving-link statistics of user (cell, k).
    const LinkStatistics &serving(std::size_t cell, std::size_t k) const
    {
        return at(cell, cell * users_per_cell + k);
    }

    // Computes the matrix square roots needed by sample_channel.
    void prepare_sampling();
};

// Draws shadow fading (iid across links) and assembles large-scale gains and
// correlation matrices for one drop. The BS-side correlation depends on the
// link azimuth; the scatterer-side correlation is shared. `seed` is consumed
// for shadowing only, so two grids built from the same seed at different
// antenna counts share their large-scale realization.
LinkStatsGrid build_link_statistics(const NetworkConfig &cfg, const NetworkGeometry &geometry,
                                    std::uint64_t seed);

// One channel draw. Consumes exactly S + antennas*S complex Gaussians from
// the engine (scatterer leg first, then the BS-side matrix, column-major).
struct ChannelWorkspace
{
    arma::cx_vec scatter_coef;  // S
    arma::cx_mat bs_fading;     // antennas x S
    arma::cx_vec mixed;         // antennas
    void resize(std::size_t antennas, std::size_t scatterers);
};

void sample_channel(const LinkStatistics &link, Rng &engine, ChannelWorkspace &ws, arma::cx_vec &h);
arma::cx_vec sample_channel(const LinkStatistics &link, Rng &engine);

} // namespace dscat

#endif
