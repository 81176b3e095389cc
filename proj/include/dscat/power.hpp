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

#ifndef DSCAT_POWER_HPP
#define DSCAT_POWER_HPP

#include <armadillo>
#include <cstddef>
#include <vector>

#include "dscat/config.hpp"
#include "dscat/se.hpp"

namespace dscat
{

// Per-user quality-of-service targets: a spectral-efficiency floor xi in
// bit/s/Hz and its induced SINR floor nu.
struct QoSTargets
{
    arma::mat se_target_bits;  // cells x users_per_cell
    arma::vec sinr_target;     // flat, length total users

    static QoSTargets uniform(const NetworkConfig &cfg, double xi);
    static QoSTargets from_se(const NetworkConfig &cfg, const arma::mat &xi);
};

// SINR floor that makes the ergodic SE hit xi. Both conventions evaluate
// 2^(xi / payload fraction) - 1; they differ only in how the exponent is
// grouped, which can matter when matching third-party tables to the last
// digit.
double sinr_target_from_se(double xi, const NetworkConfig &cfg);

// The fixed-point map of the power-minimization problem. With the SINR
// denominator linear in the power vector,
//
//   I(p) = nu .* (interference_coef * p + noise_term) ./ signal_coef
//
// is the least power each user needs to hit its target while everyone else
// transmits p. All coefficients are nonnegative, so I is positive, monotone,
// and scalable (alpha I(p) > I(alpha p) for alpha > 1): the standard
// interference-function axioms that make the iterations below converge.
struct InterferenceFunction
{
    arma::vec target;            // nu
    arma::vec signal_coef;
    arma::vec noise_term;
    arma::mat interference_coef;

    arma::vec operator()(const arma::vec &p_mw) const;
};

InterferenceFunction interference_function(const SinrTermCache &cache, const QoSTargets &targets);

// What to do when a user's required power exceeds its budget: `cap` pins the
// user at the budget (it keeps transmitting at maximum and stays below
// target); `soft_cap` replaces the excess by budget^2 / required, backing off
// the power of users that cannot be served so they do less damage to the
// rest.
enum class CongestionPolicy
{
    cap,
    soft_cap
};

struct PowerAllocation
{
    arma::vec power_mw;  // flat, length total users
    arma::vec sinr;
    arma::vec se;

    // 1 where the user's required power I(p) fits its budget (relative slack
    // 1e-6). At a fixed point this coincides with "sinr >= target"; evaluated
    // on the final iterate it is robust to the residual oscillation of the
    // soft-cap policy, whose SINRs can sit a hair under target when the
    // total-power stopping rule fires.
    arma::uvec satisfied;
    bool all_satisfied = false;
    bool converged = false;
    std::size_t iterations = 0;

    // total transmit power after each update; front() is the starting point
    std::vector<double> total_power_trace;

    double total_power_mw() const { return arma::accu(power_mw); }
};

// Iterates p <- policy(I(p)) from p = budget until the relative change of the
// total power drops to `tolerance` (flagging non-convergence at
// max_iterations). Monotone non-increasing in total power for the `cap`
// policy from this starting point.
PowerAllocation solve_power_iteration(const SinrTermCache &cache, const QoSTargets &targets,
                                      const NetworkConfig &cfg, CongestionPolicy policy,
                                      double tolerance, std::size_t max_iterations);

// The two reference solvers with stopping parameters from cfg.power_control.
PowerAllocation algorithm1_solve(const SinrTermCache &cache, const QoSTargets &targets,
                                 const NetworkConfig &cfg);
PowerAllocation algorithm2_solve(const SinrTermCache &cache, const QoSTargets &targets,
                                 const NetworkConfig &cfg);

struct OptimalityOptions
{
    double fixed_point_tol = 1e-6;        // relative residual for fixed-point / tightness checks
    std::size_t brute_force_max_users = 0; // 0 disables the grid search
    std::size_t brute_force_rounds = 7;
    std::size_t brute_force_points = 9;   // grid points per dimension per round
};

struct FeasibilityReport
{
    bool within_budget = false;
    bool constraints_met = false;   // every SINR at or above target
    bool fixed_point = false;       // p = I(p), the tightness condition
    bool capped_fixed_point = false;// p = min(I(p), budget)
    bool feasible_instance = false; // the capped iteration can satisfy everyone

    double max_constraint_violation = 0.0; // max over users of (nu - sinr)/nu, 0 if met
    double max_fixed_point_residual = 0.0; // max over users of |p - I(p)| / p

    // Zooming grid search results (only when enabled and dimension permits):
    arma::vec best_feasible_power;
    double brute_force_resolution = 0.0;   // final grid step, mW
    bool optimal_within_resolution = false;
};

// Diagnoses a candidate allocation: feasibility of the instance, constraint
// satisfaction, tightness (fixed-point property), and optionally compares the
// total power against an exhaustive zooming grid search (small problems).
FeasibilityReport check_feasibility_and_optimality(const SinrTermCache &cache, const QoSTargets &targets,
                                                   const NetworkConfig &cfg, const arma::vec &p_mw,
                                                   const OptimalityOptions &options = {});

// Fraction of users / drops meeting their targets across a batch of solved
// allocations.
struct SatisfiedStats
{
    std::size_t drops = 0;
    std::size_t users = 0;
    std::size_t satisfied_users = 0;
    std::size_t satisfied_drops = 0;

    double user_fraction() const { return users ? double(satisfied_users) / double(users) : 0.0; }
    double drop_fraction() const { return drops ? double(satisfied_drops) / double(drops) : 0.0; }
};

SatisfiedStats satisfied_probability(const std::vector<PowerAllocation> &batch);

} // namespace dscat

#endif
