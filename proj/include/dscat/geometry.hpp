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

#ifndef DSCAT_GEOMETRY_HPP
#define DSCAT_GEOMETRY_HPP

#include <armadillo>
#include <cstdint>

#include "dscat/config.hpp"
#include "dscat/rng.hpp"

namespace dscat
{

// One random placement of base stations and users. BSs sit at cell centers of
// the grid tiling; users are uniform in their serving cell outside the
// minimum-distance disc around their BS.
struct NetworkGeometry
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;

    arma::mat bs_xy;    // cells x 2
    arma::mat user_xy;  // total_users x 2, row = cell * users_per_cell + user

    // distance(u, l) = distance from user u (flat index) to BS l, in meters
    arma::mat distance;

    // angle(u, l) = azimuth of user u seen from BS l, radians in (-pi, pi]
    arma::mat angle;

    std::size_t user_index(std::size_t cell, std::size_t user) const { return cell * users_per_cell + user; }
};

NetworkGeometry drop_network(const NetworkConfig &cfg, std::uint64_t seed);

// Large-scale channel gain (linear, unitless) at the given distance with an
// explicit shadow-fading term in dB. Distances below the model's minimum are
// clamped to it.
double large_scale_fading_db(double distance_m, double shadow_db, const PathlossParams &p);
double large_scale_fading(double distance_m, double shadow_db, const PathlossParams &p);

} // namespace dscat

#endif
