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

#ifndef DSCAT_PILOTS_HPP
#define DSCAT_PILOTS_HPP

#include <armadillo>
#include <vector>

#include <json.hpp>

#include "dscat/channel.hpp"
#include "dscat/config.hpp"
#include "dscat/rng.hpp"

namespace dscat
{

// Pilot assignment: which of the pilot_count orthogonal pilot sequences each
// user transmits. Users sharing a pilot contaminate each other's estimates.
struct PilotPlan
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;
    std::size_t pilot_count = 0;

    arma::umat pilot_index; // cells x users_per_cell

    // groups[t] = flat user indices transmitting pilot t, ascending
    std::vector<std::vector<std::size_t>> groups;

    std::size_t pilot_of(std::size_t cell, std::size_t k) const { return pilot_index(cell, k); }

    // All users sharing the pilot of user (cell, k), including the user itself.
    const std::vector<std::size_t> &reuse_set(std::size_t cell, std::size_t k) const
    {
        return groups[pilot_of(cell, k)];
    }

    // Throws std::invalid_argument if a pilot index is out of range or two
    // users of one cell share a pilot.
    void validate() const;

    static PilotPlan from_indices(std::size_t cells, std::size_t users_per_cell,
                                  std::size_t pilot_count, const arma::umat &indices);
};

// The reference assignment: user k of every cell transmits pilot k, so each
// pilot is reused once per cell.
PilotPlan assign_pilots(const NetworkConfig &cfg);

// Pilot observation at one BS after despreading pilot `pilot`:
//
//   y = tau_p * sum over users in groups[pilot] of sqrt(pilot power) * h
//     + noise with noise ~ CN(0, sigma^2 tau_p I).
//
// `channels` holds the channels from every user to this BS, one column per
// flat user index. The first overload takes the noise vector explicitly (it
// must already carry the sigma^2 tau_p scaling); the second draws it.
arma::cx_vec processed_pilot_signal(const PilotPlan &plan, std::size_t pilot, const NetworkConfig &cfg,
                                    const arma::cx_mat &channels, const arma::cx_vec &noise);
arma::cx_vec processed_pilot_signal(const PilotPlan &plan, std::size_t pilot, const NetworkConfig &cfg,
                                    const arma::cx_mat &channels, Rng &engine);

// Per-(BS, pilot) quantities that every estimate reuses: the despread-signal
// covariance (divided by tau_p)
//
//   B = sum over the pilot's users of a * Rb + sigma^2 I,
//   a = tau_p * pilot power * beta * d,
//
// kept both as an explicit inverse (psi = B^-1, consumed wholesale by the SE
// analysis) and as a Cholesky factor (for the per-draw solves on the
// estimation path).
struct EstimationContext
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;
    std::size_t pilot_count = 0;
    std::size_t antennas = 0;
    double sigma2 = 0.0;
    double tau_p = 0.0;

    PilotPlan plan;

    arma::mat pilot_gain; // cells x total_users, the `a` coefficients

    std::vector<arma::cx_mat> psi;       // index = bs * pilot_count + pilot
    std::vector<arma::cx_mat> chol_lower;

    const arma::cx_mat &psi_at(std::size_t bs, std::size_t pilot) const
    {
        return psi[bs * pilot_count + pilot];
    }
    const arma::cx_mat &chol_at(std::size_t bs, std::size_t pilot) const
    {
        return chol_lower[bs * pilot_count + pilot];
    }

    // Covariance of the channel estimate for link (bs, user):
    // pilot power * beta^2 * d^2 * tau_p * Rb psi Rb.
    arma::cx_mat estimate_covariance(const LinkStatsGrid &grid, const NetworkConfig &cfg,
                                     std::size_t bs, std::size_t user) const;

    nlohmann::json to_json() const;
};

EstimationContext build_estimation_context(const LinkStatsGrid &grid, const PilotPlan &plan,
                                           const NetworkConfig &cfg);

// LMMSE channel estimate of link (bs, user) from the despread observation of
// that user's pilot: sqrt(pilot power) * beta * d * Rb * B^-1 * y.
arma::cx_vec lmmse_estimate(const EstimationContext &ctx, const LinkStatsGrid &grid,
                            const NetworkConfig &cfg, std::size_t bs, std::size_t user,
                            const arma::cx_vec &y);

} // namespace dscat

#endif
