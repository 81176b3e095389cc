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

#ifndef DSCAT_SE_HPP
#define DSCAT_SE_HPP

#include <armadillo>
#include <array>
#include <cstdint>
#include <vector>

#include "dscat/channel.hpp"
#include "dscat/config.hpp"
#include "dscat/pilots.hpp"

namespace dscat
{

// Effective uplink SINR of one user split into its hardening-bound parts:
// deterministic signal power over (everything the receiver cannot predict).
// `non_coherent` collects interference that does not ride on the user's own
// estimate direction; `coherent` the pilot-aligned part contributed by the
// user's reuse set. The two producers below decompose the denominator along
// slightly different seams (the closed form attributes per formula term, the
// Monte-Carlo estimator by reuse-set membership), but their totals target the
// same quantity.
struct SinrTerms
{
    double signal = 0.0;
    double non_coherent = 0.0;
    double coherent = 0.0;
    double noise = 0.0;

    // Closed form only: coherent split into [0] cross-user alignment,
    // [1] scatter-excess alignment, [2] scatter-excess mixing.
    std::array<double, 3> coherent_parts{0.0, 0.0, 0.0};

    double denominator() const { return non_coherent + coherent + noise; }
    double sinr() const { return denominator() > 0.0 ? signal / denominator() : 0.0; }
};

// Deterministic SINR coefficients of one drop under maximum-ratio combining.
// Every term is linear in the transmit-power vector, so the cache can be
// evaluated at any power allocation without touching the matrices again.
// Rows index the served user, columns the interfering user (flat indices).
struct SinrTermCache
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;
    double sigma2 = 0.0;

    arma::vec signal_coef;        // LK: numerator = p_i * signal_coef(i)
    arma::vec noise_term;         // LK: constant denominator part
    arma::mat non_coherent_coef;  // LK x LK
    arma::mat coherent_coef[3];   // LK x LK each; zero outside the reuse set
    arma::mat interference_coef;  // sum of the four matrices above

    PilotPlan plan;

    std::size_t total_users() const { return cells * users_per_cell; }

    // SINR of every user at power vector p (mW, flat indices).
    arma::vec sinr(const arma::vec &p_mw) const;
    SinrTerms terms(std::size_t user, const arma::vec &p_mw) const;
};

SinrTermCache build_sinr_cache(const LinkStatsGrid &grid, const EstimationContext &ctx,
                               const NetworkConfig &cfg);

std::vector<SinrTerms> closed_form_sinr(const SinrTermCache &cache, const arma::vec &p_mw);

// Sample moments feeding the hardening bound, estimated over independent
// channel and pilot-noise realizations with maximum-ratio combining on the
// LMMSE estimates: E{v^H h} for the served link, E{|v^H h'|^2} for every
// interfering link at the serving BS, and E{||v||^2}. Transmit powers enter
// only afterwards, so one moment set serves any power allocation.
struct UatfMoments
{
    std::size_t cells = 0;
    std::size_t users_per_cell = 0;
    std::size_t trials = 0;

    arma::cx_vec served_gain;   // LK: mean combiner response to the served channel
    arma::mat cross_gain_sq;    // LK x LK: mean |combiner x channel| squared
    arma::vec combiner_norm_sq; // LK

    PilotPlan plan;
};

// Runs `trials` independent realizations. Trials are processed in fixed-size
// blocks (mc_block_trials) whose partial sums are merged in block order, so
// the result is bitwise independent of the thread count.
UatfMoments monte_carlo_uatf_moments(const LinkStatsGrid &grid, const EstimationContext &ctx,
                                     const NetworkConfig &cfg, std::size_t trials,
                                     std::uint64_t seed, std::size_t threads);

std::vector<SinrTerms> monte_carlo_sinr(const UatfMoments &moments, const NetworkConfig &cfg,
                                        const arma::vec &p_mw);

// Ergodic spectral efficiency in bit/s/Hz: payload fraction times
// log2(1 + SINR).
double spectral_efficiency(double sinr, const NetworkConfig &cfg);
arma::vec spectral_efficiency(const arma::vec &sinr, const NetworkConfig &cfg);

} // namespace dscat

#endif
