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

#include "dscat/power.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dscat
{

// relative slack for classifying constraints: fixed points sit exactly on
// the constraint surface, so strict comparisons would misclassify
constexpr double satisfied_rel_tol = 1e-6;

double sinr_target_from_se(double xi, const NetworkConfig &cfg)
{
    if (!(xi > 0.0))
        throw std::invalid_argument("sinr_target_from_se: target must be positive");
    double e;
    if (cfg.power_control.convention == TargetConvention::occupied)
        e = xi * double(cfg.coherence_block_symbols) /
            double(cfg.coherence_block_symbols - cfg.pilot_symbols);
    else
        e = xi / cfg.payload_fraction();
    return std::exp2(e) - 1.0;
}

QoSTargets QoSTargets::from_se(const NetworkConfig &cfg, const arma::mat &xi)
{
    if (xi.n_rows != cfg.cells || xi.n_cols != cfg.users_per_cell)
        throw std::invalid_argument("QoSTargets: target matrix must be cells x users_per_cell");

    QoSTargets t;
    t.se_target_bits = xi;
    t.sinr_target.set_size(cfg.total_users());
    for (std::size_t l = 0; l < cfg.cells; ++l)
        for (std::size_t k = 0; k < cfg.users_per_cell; ++k)
            t.sinr_target(cfg.user_index(l, k)) = sinr_target_from_se(xi(l, k), cfg);
    return t;
}

QoSTargets QoSTargets::uniform(const NetworkConfig &cfg, double xi)
{
    return from_se(cfg, arma::mat(cfg.cells, cfg.users_per_cell, arma::fill::value(xi)));
}

arma::vec InterferenceFunction::operator()(const arma::vec &p_mw) const
{
    if (p_mw.n_elem != target.n_elem)
        throw std::invalid_argument("interference function: power vector has wrong length");
    return target % (interference_coef * p_mw + noise_term) / signal_coef;
}

InterferenceFunction interference_function(const SinrTermCache &cache, const QoSTargets &targets)
{
    if (targets.sinr_target.n_elem != cache.total_users())
        throw std::invalid_argument("interference_function: targets do not match cache");
    if (cache.signal_coef.min() <= 0.0)
        throw std::invalid_argument("interference_function: a user has no deterministic signal gain");

    InterferenceFunction f;
    f.target = targets.sinr_target;
    f.signal_coef = cache.signal_coef;
    f.noise_term = cache.noise_term;
    f.interference_coef = cache.interference_coef;
    return f;
}

PowerAllocation solve_power_iteration(const SinrTermCache &cache, const QoSTargets &targets,
                                      const NetworkConfig &cfg, CongestionPolicy policy,
                                      double tolerance, std::size_t max_iterations)
{
    if (!(tolerance > 0.0) || max_iterations == 0)
        throw std::invalid_argument("solve_power_iteration: bad stopping parameters");

    InterferenceFunction f = interference_function(cache, targets);
    arma::vec pmax = arma::vectorise(cfg.max_power_mw.t()); // flat, user-major within cell
    if (pmax.n_elem != cache.total_users())
        throw std::invalid_argument("solve_power_iteration: budget does not match cache");

    PowerAllocation out;
    arma::vec p = pmax;
    out.total_power_trace.push_back(arma::accu(p));
    double prev_total = out.total_power_trace.front();

    for (std::size_t it = 1; it <= max_iterations; ++it)
    {
        arma::vec required = f(p);
        if (policy == CongestionPolicy::cap)
            p = arma::min(required, pmax);
        else
            for (std::size_t i = 0; i < p.n_elem; ++i)
                p(i) = required(i) <= pmax(i) ? required(i) : pmax(i) * pmax(i) / required(i);

        double total = arma::accu(p);
        out.total_power_trace.push_back(total);
        out.iterations = it;
        if (std::abs(total - prev_total) / prev_total <= tolerance)
        {
            out.converged = true;
            break;
        }
        prev_total = total;
    }

    out.power_mw = p;
    out.sinr = cache.sinr(p);
    out.se.set_size(p.n_elem);
    out.satisfied.set_size(p.n_elem);

    // Classify users by whether their required power fits the budget. At any
    // fixed point of either policy this is exactly "sinr >= nu" up to the
    // slack, but unlike the raw SINR comparison it stays stable when the
    // iteration stops early: the soft-cap updates oscillate around the fixed
    // point with per-user amplitudes the total-power stopping rule cannot
    // see, and those residues would otherwise misclassify served users.
    arma::vec required = f(p);
    for (std::size_t i = 0; i < p.n_elem; ++i)
    {
        out.se(i) = spectral_efficiency(out.sinr(i), cfg);
        out.satisfied(i) = required(i) <= pmax(i) * (1.0 + satisfied_rel_tol) ? 1u : 0u;
    }
    out.all_satisfied = arma::all(out.satisfied == 1u);
    return out;
}

PowerAllocation algorithm1_solve(const SinrTermCache &cache, const QoSTargets &targets,
                                 const NetworkConfig &cfg)
{
    return solve_power_iteration(cache, targets, cfg, CongestionPolicy::cap,
                                 cfg.power_control.tolerance, cfg.power_control.max_iterations);
}

PowerAllocation algorithm2_solve(const SinrTermCache &cache, const QoSTargets &targets,
                                 const NetworkConfig &cfg)
{
    return solve_power_iteration(cache, targets, cfg, CongestionPolicy::soft_cap,
                                 cfg.power_control.tolerance, cfg.power_control.max_iterations);
}

// Zooming grid search for the minimum-total-power feasible point. Returns an
// empty vector if no grid point is feasible in the first round.
static arma::vec brute_force_min_power(const SinrTermCache &cache, const QoSTargets &targets,
                                       const arma::vec &pmax, std::size_t rounds,
                                       std::size_t points, double *resolution_out)
{
    std::size_t dim = pmax.n_elem;
    arma::vec lo(dim, arma::fill::zeros);
    arma::vec hi = pmax;

    arma::vec best;
    double best_total = arma::datum::inf;
    double step_max = 0.0;

    for (std::size_t round = 0; round < rounds; ++round)
    {
        arma::vec step = (hi - lo) / double(points - 1);
        step_max = step.max();

        std::vector<std::size_t> idx(dim, 0);
        arma::vec cand(dim);
        bool carry = false;
        while (!carry)
        {
            for (std::size_t d = 0; d < dim; ++d)
                cand(d) = lo(d) + double(idx[d]) * step(d);

            double total = arma::accu(cand);
            if (total < best_total && cand.min() >= 0.0 && arma::all(cand <= pmax))
            {
                arma::vec sinr = cache.sinr(cand);
                bool ok = true;
                for (std::size_t i = 0; i < dim && ok; ++i)
                    ok = sinr(i) >= targets.sinr_target(i) * (1.0 - satisfied_rel_tol);
                if (ok)
                {
                    best = cand;
                    best_total = total;
                }
            }

            carry = true;
            for (std::size_t d = 0; d < dim; ++d)
            {
                if (++idx[d] < points)
                {
                    carry = false;
                    break;
                }
                idx[d] = 0;
            }
        }

        if (best.n_elem == 0)
            break; // no feasible point at the coarsest resolution
        // zoom one grid step around the incumbent
        for (std::size_t d = 0; d < dim; ++d)
        {
            lo(d) = std::max(0.0, best(d) - step(d));
            hi(d) = std::min(pmax(d), best(d) + step(d));
        }
    }

    if (resolution_out)
        *resolution_out = step_max;
    return best;
}

FeasibilityReport check_feasibility_and_optimality(const SinrTermCache &cache,
                                                   const QoSTargets &targets,
                                                   const NetworkConfig &cfg, const arma::vec &p_mw,
                                                   const OptimalityOptions &options)
{
    InterferenceFunction f = interference_function(cache, targets);
    arma::vec pmax = arma::vectorise(cfg.max_power_mw.t());
    if (p_mw.n_elem != pmax.n_elem)
        throw std::invalid_argument("check_feasibility_and_optimality: power vector has wrong length");

    FeasibilityReport rep;
    rep.within_budget = arma::all(p_mw <= pmax * (1.0 + satisfied_rel_tol)) && p_mw.min() >= 0.0;

    arma::vec sinr = cache.sinr(p_mw);
    rep.max_constraint_violation = 0.0;
    for (std::size_t i = 0; i < sinr.n_elem; ++i)
    {
        double gap = (targets.sinr_target(i) - sinr(i)) / targets.sinr_target(i);
        rep.max_constraint_violation = std::max(rep.max_constraint_violation, gap);
    }
    rep.constraints_met = rep.max_constraint_violation <= satisfied_rel_tol;
    if (rep.constraints_met)
        rep.max_constraint_violation = 0.0;

    arma::vec required = f(p_mw);
    rep.max_fixed_point_residual = 0.0;
    double capped_residual = 0.0;
    for (std::size_t i = 0; i < p_mw.n_elem; ++i)
    {
        double denom = std::max(p_mw(i), 1e-300);
        rep.max_fixed_point_residual =
            std::max(rep.max_fixed_point_residual, std::abs(p_mw(i) - required(i)) / denom);
        double capped = std::min(required(i), pmax(i));
        capped_residual = std::max(capped_residual, std::abs(p_mw(i) - capped) / denom);
    }
    rep.fixed_point = rep.max_fixed_point_residual <= options.fixed_point_tol;
    rep.capped_fixed_point = capped_residual <= options.fixed_point_tol;

    // Instance feasibility: iterate the capped map to (near) convergence and
    // see whether everyone is served at its fixed point.
    PowerAllocation capped = solve_power_iteration(cache, targets, cfg, CongestionPolicy::cap, 1e-12,
                                                   cfg.power_control.max_iterations * 10);
    rep.feasible_instance = capped.all_satisfied;

    if (options.brute_force_max_users > 0 && p_mw.n_elem <= options.brute_force_max_users)
    {
        double resolution = 0.0;
        arma::vec best = brute_force_min_power(cache, targets, pmax, options.brute_force_rounds,
                                               options.brute_force_points, &resolution);
        rep.best_feasible_power = best;
        rep.brute_force_resolution = resolution;
        if (best.n_elem > 0)
        {
            double gap = std::abs(arma::accu(p_mw) - arma::accu(best));
            rep.optimal_within_resolution = gap <= resolution * double(p_mw.n_elem) * 2.0;
        }
    }

    return rep;
}

SatisfiedStats satisfied_probability(const std::vector<PowerAllocation> &batch)
{
    SatisfiedStats s;
    for (const auto &alloc : batch)
    {
        s.drops += 1;
        s.users += alloc.satisfied.n_elem;
        s.satisfied_users += arma::accu(alloc.satisfied);
        if (alloc.all_satisfied)
            s.satisfied_drops += 1;
    }
    return s;
}

} // namespace dscat
