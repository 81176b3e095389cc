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
//
// Release acceptance gate. Each criterion prints exactly one PASS/FAIL line
// with its measured numbers; every tolerance is a named constant next to the
// check that uses it. The exit code is the number of failed criteria.
//
//   acceptance       runs all seven criteria
//   acceptance <n>   runs criterion n only (1-7)

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <armadillo>

#include "dscat/channel.hpp"
#include "dscat/config.hpp"
#include "dscat/geometry.hpp"
#include "dscat/harness.hpp"
#include "dscat/pilots.hpp"
#include "dscat/power.hpp"
#include "dscat/rng.hpp"
#include "dscat/se.hpp"

using namespace dscat;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::string fmt(const char *f, ...)
{
    char buf[1024];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

arma::vec full_power(const NetworkConfig &cfg)
{
    return arma::vectorise(cfg.max_power_mw.t()); // flat, user-major within cell
}

// One fully assembled network drop.
struct Drop
{
    NetworkGeometry geo;
    LinkStatsGrid grid;
    PilotPlan plan;
    EstimationContext ctx;
    SinrTermCache cache;
};

Drop make_drop(const NetworkConfig &cfg, std::uint64_t master, std::size_t index)
{
    Drop d;
    std::uint64_t seed = derive_seed(master, seed_salt::drop, index);
    d.geo = drop_network(cfg, seed);
    d.grid = build_link_statistics(cfg, d.geo, seed);
    d.plan = assign_pilots(cfg);
    d.ctx = build_estimation_context(d.grid, d.plan, cfg);
    d.cache = build_sinr_cache(d.grid, d.ctx, cfg);
    return d;
}

// Empirical quantile of an ascending-sorted sample.
double quantile(const std::vector<double> &sorted, double alpha)
{
    std::size_t n = sorted.size();
    std::size_t idx = std::size_t(std::ceil(alpha * double(n)));
    idx = idx == 0 ? 0 : idx - 1;
    return sorted[std::min(idx, n - 1)];
}

// First-order dominance on a quantile grid: hi's quantiles are at or above
// lo's. Returns the worst (most negative) quantile gap.
double worst_quantile_gap(const std::vector<double> &lo, const std::vector<double> &hi)
{
    double worst = 0.0;
    for (int a = 1; a <= 19; ++a)
    {
        double alpha = 0.05 * a;
        worst = std::min(worst, quantile(hi, alpha) - quantile(lo, alpha));
    }
    return worst;
}

std::map<std::string, std::string> csv_contents(const fs::path &dir)
{
    std::map<std::string, std::string> out;
    for (const auto &entry : fs::directory_iterator(dir))
    {
        if (entry.path().extension() != ".csv")
            continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[entry.path().filename().string()] = ss.str();
    }
    return out;
}

// --------------------------------------------------------------- criterion 1
// Closed-form SINR against the Monte-Carlo hardening-bound estimator on 20
// random drops at 50 antennas, full transmit power, 10^4 trials per drop.

Outcome criterion_sinr_oracle()
{
    constexpr std::size_t drops = 20;
    constexpr std::size_t trials = 10000;
    constexpr double rel_err_tol = 0.03;  // per-user |cf - mc| / mc
    constexpr double min_fraction = 0.95; // of users within rel_err_tol
    constexpr double max_runtime_s = 600.0;

    ExperimentSpec spec;
    spec.antenna_sweep = {50};
    spec.drops = drops;
    spec.trials = trials;
    spec.master_seed = 1;
    spec.threads = 0;

    SeValidationResult res = run_se_validation(spec);
    const SeAgreement &a = res.agreement.front();

    bool pass = a.frac_within_3pct >= min_fraction && res.runtime_seconds < max_runtime_s;
    return {pass, fmt("%.1f%% of %zu users within %.0f%% rel err (need >= %.0f%%); "
                      "mean rel err %.4f, max %.4f; runtime %.0fs (limit %.0fs)",
                      100.0 * a.frac_within_3pct, drops * spec.config.total_users(),
                      100.0 * rel_err_tol, 100.0 * min_fraction, a.mean_rel_err, a.max_rel_err,
                      res.runtime_seconds, max_runtime_s)};
}

// --------------------------------------------------------------- criterion 2
// Estimator correctness at 10^5 draws: the empirical covariance of the
// channel estimate matches the analytic estimate covariance entrywise, and
// the estimate is uncorrelated with the estimation error (orthogonality).
// Entry tolerances are relative to the largest diagonal entry.

Outcome criterion_estimator_covariance()
{
    constexpr std::size_t draws = 100000;
    constexpr double cov_tol = 0.02;                      // per entry, x scale
    const double cross_tol = 5.0 * std::pow(10.0, -2.5);  // per entry, x scale

    NetworkConfig cfg = default_config();
    cfg.antennas = 50;

    Drop d = make_drop(cfg, 1, 0);
    d.grid.prepare_sampling();

    const std::size_t bs = 0, user = 0, pilot = d.plan.pilot_of(0, 0);
    const std::size_t m = cfg.antennas;

    arma::cx_mat analytic = d.ctx.estimate_covariance(d.grid, cfg, bs, user);
    double scale = arma::abs(analytic.diag()).max();

    Rng engine = make_rng(derive_seed(1, seed_salt::drop, 0), seed_salt::generic, 2);
    arma::cx_mat channels(m, cfg.total_users(), arma::fill::zeros);
    arma::cx_mat acc_cov(m, m, arma::fill::zeros);
    arma::cx_mat acc_cross(m, m, arma::fill::zeros);

    for (std::size_t n = 0; n < draws; ++n)
    {
        for (std::size_t u : d.plan.groups[pilot])
            channels.col(u) = sample_channel(d.grid.at(bs, u), engine);
        arma::cx_vec y = processed_pilot_signal(d.plan, pilot, cfg, channels, engine);
        arma::cx_vec hhat = lmmse_estimate(d.ctx, d.grid, cfg, bs, user, y);
        arma::cx_vec err = channels.col(user) - hhat;
        acc_cov += hhat * hhat.t();
        acc_cross += hhat * err.t();
    }

    double cov_err = arma::abs(acc_cov / double(draws) - analytic).max() / scale;
    double cross_err = arma::abs(acc_cross / double(draws)).max() / scale;

    bool pass = cov_err <= cov_tol && cross_err <= cross_tol;
    return {pass, fmt("covariance entry error %.4f of scale (tol %.2f); "
                      "orthogonality cross-covariance %.4f of scale (tol %.4f); %zu draws",
                      cov_err, cov_tol, cross_err, cross_tol, draws)};
}

// --------------------------------------------------------------- criterion 3
// Interference-map axioms (positivity, monotonicity, strict scalability) on
// 100 randomized instances with coefficients spread over several decades.

Outcome criterion_interference_axioms()
{
    constexpr std::size_t instances = 100;
    constexpr double tol = 1e-9; // slack on the monotonicity comparison

    Rng engine = make_rng(7, seed_salt::generic, 0);
    auto decade = [&engine](double lo, double hi) {
        return std::pow(10.0, lo + (hi - lo) * uniform_unit(engine));
    };

    std::size_t violations = 0;
    for (std::size_t inst = 0; inst < instances; ++inst)
    {
        std::size_t n = 2 + std::size_t(uniform_unit(engine) * 7.0); // 2..8 users
        InterferenceFunction f;
        f.target.set_size(n);
        f.signal_coef.set_size(n);
        f.noise_term.set_size(n);
        f.interference_coef.set_size(n, n);
        for (std::size_t i = 0; i < n; ++i)
        {
            f.target(i) = decade(-1.0, 1.0);
            f.signal_coef(i) = decade(-2.0, 2.0);
            f.noise_term(i) = decade(-3.0, 1.0);
            for (std::size_t j = 0; j < n; ++j)
                f.interference_coef(i, j) = i == j ? 0.0 : decade(-4.0, 0.0);
        }

        arma::vec p(n), q(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            p(i) = decade(-2.0, 2.0);
            q(i) = p(i) + decade(-2.0, 2.0); // q >= p elementwise
        }

        arma::vec fp = f(p), fq = f(q);
        double alpha = 1.1 + 3.9 * uniform_unit(engine);
        arma::vec scaled = f(alpha * p);

        if (!(fp.min() > 0.0 && f(arma::vec(n, arma::fill::zeros)).min() > 0.0))
            violations += 1; // positivity
        if (!arma::all(fq - fp >= -tol))
            violations += 1; // monotonicity
        if (!arma::all(alpha * fp - scaled > 0.0))
            violations += 1; // strict scalability
    }

    bool pass = violations == 0;
    return {pass, fmt("%zu violations over %zu randomized instances "
                      "(positivity, monotonicity, strict scalability; slack %.0e)",
                      violations, instances, tol)};
}

// --------------------------------------------------------------- criterion 4
// On feasible drops both iterations converge from the full-power start,
// agree on the fixed point, and leave every SINR constraint tight -- the
// certificate that the fixed point is the minimal-power solution. The capped
// iteration's total power falls monotonically on every feasible drop. The
// soft-cap backoff is not a monotone map -- when a user's required power
// transiently overshoots its budget at the full-power start, the backoff
// drops that user below the fixed point and the total climbs back up -- so
// its monotone decrease is asserted exactly where its premise holds: drops
// whose trajectory never hits a budget, where the two updates coincide and
// both traces must be identical and non-increasing. A two-user instance is
// cross-checked against a zooming grid search.

Outcome criterion_convergence_optimality()
{
    constexpr double xi = 0.5;           // feasible-regime SE floor, bit/s/Hz
    constexpr double xi_low = 0.1;       // floor low enough that full power can meet every target
    constexpr std::size_t scan_drops = 60;
    constexpr std::size_t low_scan_drops = 30;
    constexpr std::size_t min_feasible = 5;
    constexpr std::size_t min_uncapped = 3;
    constexpr double refine_tol = 1e-10;     // fixed-point refinement
    constexpr double fp_agree_rel = 1e-5;    // max |p1-p2| / max p
    constexpr double tight_rel = 1e-6;       // max |sinr/target - 1|
    constexpr double mono_slack = 1e-12;     // relative, on the power trace

    NetworkConfig cfg = default_config();
    QoSTargets targets = QoSTargets::uniform(cfg, xi);
    arma::vec pmax = full_power(cfg);

    std::size_t feasible = 0, uncapped = 0, mono_bad = 0, trace_mismatch = 0, nonconv = 0;
    double worst_gap = 0.0, worst_tight = 0.0;

    auto monotone = [&mono_bad, mono_slack](const PowerAllocation &a) {
        for (std::size_t t = 1; t < a.total_power_trace.size(); ++t)
            if (a.total_power_trace[t] > a.total_power_trace[t - 1] * (1.0 + mono_slack))
                mono_bad += 1;
    };

    for (std::size_t index = 0; index < scan_drops; ++index)
    {
        Drop d = make_drop(cfg, 1, index);
        PowerAllocation ref1 =
            solve_power_iteration(d.cache, targets, cfg, CongestionPolicy::cap, refine_tol, 100000);
        if (!(ref1.converged && ref1.all_satisfied))
            continue; // congested or unresolved drop: not this criterion's subject
        feasible += 1;

        PowerAllocation a1 = algorithm1_solve(d.cache, targets, cfg); // gamma = 1e-3
        PowerAllocation a2 = algorithm2_solve(d.cache, targets, cfg);
        if (!(a1.converged && a2.converged))
            nonconv += 1;
        monotone(a1);

        PowerAllocation ref2 = solve_power_iteration(d.cache, targets, cfg,
                                                     CongestionPolicy::soft_cap, refine_tol, 100000);
        worst_gap = std::max(worst_gap, arma::abs(ref1.power_mw - ref2.power_mw).max() /
                                            ref1.power_mw.max());
        for (const PowerAllocation *r : {&ref1, &ref2})
            worst_tight =
                std::max(worst_tight, arma::abs(r->sinr / targets.sinr_target - 1.0).max());
    }

    // where no budget is hit along the way the two updates coincide: both
    // traces must be identical and fall monotonically
    QoSTargets low = QoSTargets::uniform(cfg, xi_low);
    for (std::size_t index = 0; index < low_scan_drops; ++index)
    {
        Drop d = make_drop(cfg, 1, index);
        InterferenceFunction f = interference_function(d.cache, low);
        if (!arma::all(f(pmax) <= pmax)) // full power must already meet every target
            continue;
        uncapped += 1;
        PowerAllocation a1 = algorithm1_solve(d.cache, low, cfg);
        PowerAllocation a2 = algorithm2_solve(d.cache, low, cfg);
        if (!(a1.converged && a2.converged))
            nonconv += 1;
        monotone(a1);
        monotone(a2);
        if (a2.total_power_trace != a1.total_power_trace)
            trace_mismatch += 1;
    }

    // two-user instance with a hand-solvable fixed point vs the grid search
    NetworkConfig toy = default_config();
    toy.cells = 2;
    toy.users_per_cell = 1;
    toy.pilot_symbols = 1;
    toy.pilot_power_mw = arma::mat(2, 1, arma::fill::value(200.0));
    toy.max_power_mw = arma::mat(2, 1, arma::fill::value(200.0));
    toy.power_control.tolerance = 1e-14;
    toy.power_control.max_iterations = 100000;

    SinrTermCache cache;
    cache.cells = 2;
    cache.users_per_cell = 1;
    cache.sigma2 = toy.noise_variance_mw();
    cache.signal_coef = {2.0, 3.0};
    cache.noise_term = {1.0, 1.5};
    cache.non_coherent_coef = {{0.0, 0.2}, {0.3, 0.0}};
    for (arma::mat &mcoef : cache.coherent_coef)
        mcoef = arma::mat(2, 2, arma::fill::zeros);
    cache.interference_coef = cache.non_coherent_coef;
    cache.plan = assign_pilots(toy);

    QoSTargets toy_targets;
    toy_targets.sinr_target = {1.0, 2.0};
    toy_targets.se_target_bits = arma::mat(2, 1);
    toy_targets.se_target_bits(0, 0) = spectral_efficiency(1.0, toy);
    toy_targets.se_target_bits(1, 0) = spectral_efficiency(2.0, toy);

    PowerAllocation toy_alloc = algorithm1_solve(cache, toy_targets, toy);
    OptimalityOptions opt;
    opt.brute_force_max_users = 2;
    FeasibilityReport rep =
        check_feasibility_and_optimality(cache, toy_targets, toy, toy_alloc.power_mw, opt);
    bool toy_ok = toy_alloc.converged && rep.feasible_instance && rep.within_budget &&
                  rep.constraints_met && rep.fixed_point && rep.optimal_within_resolution &&
                  rep.brute_force_resolution > 0.0;

    bool pass = feasible >= min_feasible && uncapped >= min_uncapped && nonconv == 0 &&
                mono_bad == 0 && trace_mismatch == 0 && worst_gap <= fp_agree_rel &&
                worst_tight <= tight_rel && toy_ok;
    return {pass, fmt("%zu feasible drops of %zu scanned (need >= %zu), %zu cap-free drops of "
                      "%zu (need >= %zu); trace increases %zu, trace mismatches %zu; "
                      "fixed-point gap %.2e (tol %.0e); constraint slack %.2e (tol %.0e); "
                      "2-user grid search %s at %.2e mW resolution",
                      feasible, scan_drops, min_feasible, uncapped, low_scan_drops, min_uncapped,
                      mono_bad, trace_mismatch, worst_gap, fp_agree_rel, worst_tight, tight_rel,
                      toy_ok ? "optimal" : "NOT optimal", rep.brute_force_resolution)};
}

// --------------------------------------------------------------- criterion 5
// Congested drops (SE floor 2.0 bit/s/Hz): the capped iteration pins every
// unsatisfied user exactly at its budget, the soft-capped one keeps them
// strictly below it, and the capped total power is at least the soft-capped
// total on >= 90% of drops. Absolute satisfaction percentages are
// scenario-specific, so only these ordering claims are checked (the run
// reports state the same).

Outcome criterion_congestion()
{
    constexpr double xi = 2.0;
    constexpr std::size_t drops = 60;
    constexpr std::size_t min_congested = 50;
    constexpr double min_order_fraction = 0.9;
    constexpr double order_slack = 1e-12; // relative, on the total-power comparison

    NetworkConfig cfg = default_config();
    QoSTargets targets = QoSTargets::uniform(cfg, xi);
    arma::vec pmax = full_power(cfg);

    std::size_t congested = 0, ordered = 0, cap_off_budget = 0, soft_at_budget = 0, nonconv = 0;

    for (std::size_t index = 0; index < drops; ++index)
    {
        Drop d = make_drop(cfg, 1, index);
        PowerAllocation a1 = algorithm1_solve(d.cache, targets, cfg);
        PowerAllocation a2 = algorithm2_solve(d.cache, targets, cfg);
        if (!(a1.converged && a2.converged))
        {
            // the soft-cap approach can be an underdamped oscillation that
            // needs more than the configured iteration cap to settle; such
            // drops carry no settled allocation to compare, so they are
            // counted and excluded exactly as the sweep harness does
            nonconv += 1;
            continue;
        }
        if (a1.all_satisfied)
            continue; // not congested
        congested += 1;

        for (std::size_t u = 0; u < pmax.n_elem; ++u)
        {
            if (!a1.satisfied(u) && a1.power_mw(u) != pmax(u))
                cap_off_budget += 1; // must sit exactly at the budget
            if (!a2.satisfied(u) && !(a2.power_mw(u) < pmax(u)))
                soft_at_budget += 1; // must stay strictly below it
        }
        if (a1.total_power_mw() >= a2.total_power_mw() * (1.0 - order_slack))
            ordered += 1;
    }

    double order_fraction = congested ? double(ordered) / double(congested) : 0.0;
    bool pass = congested >= min_congested && cap_off_budget == 0 && soft_at_budget == 0 &&
                order_fraction >= min_order_fraction;
    return {pass, fmt("%zu congested drops of %zu (need >= %zu, %zu hit the iteration cap); "
                      "capped users off budget %zu; soft-capped users at budget %zu; capped "
                      "total >= soft-capped total on %.1f%% (need >= %.0f%%)",
                      congested, drops, min_congested, nonconv, cap_off_budget, soft_at_budget,
                      100.0 * order_fraction, 100.0 * min_order_fraction)};
}

// --------------------------------------------------------------- criterion 6
// Distribution trends over 200 drops: SE distributions shift right as the
// array grows (50 -> 100 -> 150 antennas) with a mean gain above 0.3
// bit/s/Hz; transmit-power distributions shift right as the SE floor rises
// from 1.5 to 1.75; the satisfied-user probability is at least 0.9 at floor
// 1.5 and non-increasing in the floor.

Outcome criterion_distribution_trends()
{
    constexpr std::size_t drops = 200;
    constexpr double min_mean_gain = 0.3;   // bit/s/Hz, 50 -> 150 antennas
    constexpr double sat_floor = 0.9;       // satisfied-user fraction at SE floor 1.5
    constexpr double quantile_slack = 1e-9; // on the dominance comparisons
    constexpr double max_runtime_s = 1800.0;

    auto t0 = std::chrono::steady_clock::now();

    const std::vector<std::size_t> antenna_counts = {50, 100, 150};
    std::vector<std::vector<double>> se(antenna_counts.size());

    for (std::size_t index = 0; index < drops; ++index)
    {
        std::uint64_t seed = derive_seed(1, seed_salt::drop, index);
        for (std::size_t mi = 0; mi < antenna_counts.size(); ++mi)
        {
            NetworkConfig cfg = default_config();
            cfg.antennas = antenna_counts[mi];
            NetworkGeometry geo = drop_network(cfg, seed);
            LinkStatsGrid grid = build_link_statistics(cfg, geo, seed);
            PilotPlan plan = assign_pilots(cfg);
            EstimationContext ctx = build_estimation_context(grid, plan, cfg);
            SinrTermCache cache = build_sinr_cache(grid, ctx, cfg);
            arma::vec s = spectral_efficiency(cache.sinr(full_power(cfg)), cfg);
            se[mi].insert(se[mi].end(), s.begin(), s.end());
        }
    }
    for (auto &v : se)
        std::sort(v.begin(), v.end());

    double se_gap = std::min(worst_quantile_gap(se[0], se[1]), worst_quantile_gap(se[1], se[2]));
    double mean_gain = arma::mean(arma::vec(se[2])) - arma::mean(arma::vec(se[0]));
    bool se_shift = se_gap >= -quantile_slack && mean_gain > min_mean_gain;

    ExperimentSpec spec;
    spec.xi_sweep = {1.5, 1.75, 2.0};
    spec.algorithms = {1, 2};
    spec.drops = drops;
    spec.master_seed = 1;
    spec.threads = 0;
    PowerSweepResult sweep = run_power_sweep(spec);

    auto cell = [&sweep](double xi, int alg) -> const PowerSweepCell & {
        for (const auto &c : sweep.cells)
            if (c.xi == xi && c.algorithm == alg)
                return c;
        throw std::logic_error("sweep cell missing");
    };
    auto pooled = [](const PowerSweepCell &c) {
        std::vector<double> v(c.feasible_power_cdf.values.begin(), c.feasible_power_cdf.values.end());
        v.insert(v.end(), c.congested_power_cdf.values.begin(), c.congested_power_cdf.values.end());
        std::sort(v.begin(), v.end());
        return v;
    };

    // Raising the SE floor raises the power the capped iteration settles on
    // (its fixed point is componentwise non-decreasing in the target), so its
    // per-user power distribution must shift right. The soft-cap backoff is
    // excluded on purpose: it cuts the power of users that cannot be served,
    // so a higher floor can lower those users' powers by design.
    double power_gap = worst_quantile_gap(pooled(cell(1.5, 1)), pooled(cell(1.75, 1)));
    bool power_shift = power_gap >= -quantile_slack;

    double sat15 = std::max(cell(1.5, 1).stats.user_fraction(), cell(1.5, 2).stats.user_fraction());
    bool sat_high = sat15 >= sat_floor;
    bool sat_trend = true;
    for (int alg : {1, 2})
        for (std::size_t x = 1; x < spec.xi_sweep.size(); ++x)
            sat_trend = sat_trend && cell(spec.xi_sweep[x], alg).stats.user_fraction() <=
                                         cell(spec.xi_sweep[x - 1], alg).stats.user_fraction() +
                                             quantile_slack;

    double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = se_shift && power_shift && sat_high && sat_trend && runtime < max_runtime_s;
    return {pass, fmt("SE shift right with antennas %s (worst quantile gap %.2e), mean gain "
                      "%.3f bit/s/Hz (need > %.1f); capped-policy power shift right with SE "
                      "floor %s (worst gap %.2e mW; %zu/%zu drops feasible at 1.5/1.75); "
                      "satisfied fraction at floor 1.5 = %.3f (need >= %.2f) %s, "
                      "non-increasing in the floor %s; runtime %.0fs (limit %.0fs); %zu drops",
                      se_shift ? "OK" : "VIOLATED", se_gap, mean_gain, min_mean_gain,
                      power_shift ? "OK" : "VIOLATED", power_gap, cell(1.5, 1).feasible_drops,
                      cell(1.75, 1).feasible_drops, sat15, sat_floor,
                      sat_high ? "OK" : "VIOLATED", sat_trend ? "OK" : "VIOLATED", runtime,
                      max_runtime_s, drops)};
}

// --------------------------------------------------------------- criterion 7
// Determinism: re-running either experiment with the same master seed, at a
// different thread count or in a fresh process state, produces byte-identical
// CSV outputs.

Outcome criterion_determinism()
{
    fs::path base = fs::temp_directory_path() / "dscat-acceptance-determinism";
    fs::remove_all(base);

    auto run_se = [&base](std::size_t threads, const char *sub) {
        ExperimentSpec spec;
        spec.antenna_sweep = {50};
        spec.drops = 3;
        spec.trials = 600; // two full Monte-Carlo blocks plus a partial one
        spec.master_seed = 99;
        spec.threads = threads;
        SeValidationResult res = run_se_validation(spec);
        write_se_validation(res, spec, (base / sub).string());
    };
    auto run_power = [&base](std::size_t threads, const char *sub) {
        ExperimentSpec spec;
        spec.config.antennas = 50;
        spec.xi_sweep = {1.5, 2.0};
        spec.algorithms = {1, 2};
        spec.drops = 4;
        spec.master_seed = 99;
        spec.threads = threads;
        PowerSweepResult res = run_power_sweep(spec);
        write_power_sweep(res, spec, (base / sub).string());
    };

    run_se(1, "se_t1");
    run_se(3, "se_t3");
    run_se(1, "se_rerun");
    run_power(1, "power_t1");
    run_power(3, "power_t3");
    run_power(1, "power_rerun");

    std::size_t files = 0, mismatches = 0;
    for (const char *kind : {"se", "power"})
    {
        auto ref = csv_contents(base / (std::string(kind) + "_t1"));
        files += ref.size();
        for (const char *other : {"_t3", "_rerun"})
        {
            auto cmp = csv_contents(base / (kind + std::string(other)));
            if (cmp.size() != ref.size())
                mismatches += 1;
            for (const auto &[name, bytes] : ref)
            {
                auto it = cmp.find(name);
                if (it == cmp.end() || it->second != bytes)
                    mismatches += 1;
            }
        }
    }

    bool pass = mismatches == 0 && files > 0;
    return {pass, fmt("%zu CSV files x {3 threads, re-run} vs the single-thread pass: "
                      "%zu byte mismatches",
                      files, mismatches)};
}

} // namespace

int main(int argc, char **argv)
{
    struct Entry
    {
        const char *name;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {"closed-form SINR vs Monte-Carlo oracle", criterion_sinr_oracle},
        {"estimator covariance and orthogonality", criterion_estimator_covariance},
        {"interference-map axioms", criterion_interference_axioms},
        {"convergence and optimality on feasible drops", criterion_convergence_optimality},
        {"congestion behavior of the two policies", criterion_congestion},
        {"distribution trends over 200 drops", criterion_distribution_trends},
        {"byte-identical re-runs", criterion_determinism},
    };
    const int total = int(sizeof entries / sizeof entries[0]);

    int first = 0, last = total;
    if (argc > 1)
    {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > total)
        {
            std::fprintf(stderr, "usage: %s [1-%d]\n", argv[0], total);
            return 2;
        }
        first = n - 1;
        last = n;
    }

    int failures = 0;
    for (int i = first; i < last; ++i)
    {
        Outcome o = entries[i].fn();
        std::printf("criterion %d %s  %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                    entries[i].name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    if (last - first > 1)
        std::printf("%d of %d criteria passed\n", (last - first) - failures, last - first);
    return failures;
}
