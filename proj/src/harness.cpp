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

#include "dscat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "dscat/geometry.hpp"
#include "dscat/parallel.hpp"
#include "dscat/pilots.hpp"
#include "dscat/rng.hpp"

namespace dscat
{

void ExperimentSpec::validate() const
{
    config.validate();
    if (drops == 0)
        throw std::invalid_argument("experiment: drops must be >= 1");
    if (antenna_sweep.empty() && xi_sweep.empty())
        throw std::invalid_argument("experiment: nothing to sweep");
    for (int a : algorithms)
        if (a != 1 && a != 2)
            throw std::invalid_argument("experiment: algorithms must be 1 or 2");
}

CdfSeries CdfSeries::from_samples(std::vector<double> samples, std::string label)
{
    CdfSeries cdf;
    cdf.label = std::move(label);
    std::sort(samples.begin(), samples.end());
    cdf.values = arma::vec(samples);
    cdf.cum_fraction.set_size(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        cdf.cum_fraction(i) = double(i + 1) / double(samples.size());
    return cdf;
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

static std::uint64_t drop_seed_of(const ExperimentSpec &spec, std::size_t drop)
{
    return derive_seed(spec.master_seed, seed_salt::drop, drop);
}

// Wraps per-drop work so failures carry the drop index.
template <typename Fn> static void run_drop(std::size_t drop, Fn &&fn)
{
    try
    {
        fn();
    }
    catch (const std::exception &e)
    {
        throw std::runtime_error("drop " + std::to_string(drop) + ": " + e.what());
    }
}

static double percentile(std::vector<double> v, double q)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t k = std::size_t(std::ceil(q * double(v.size())));
    if (k == 0)
        k = 1;
    return v[std::min(k - 1, v.size() - 1)];
}

SeValidationResult run_se_validation(const ExperimentSpec &spec)
{
    spec.validate();
    if (spec.antenna_sweep.empty())
        throw std::invalid_argument("run_se_validation: antenna sweep is empty");
    if (spec.trials == 0)
        throw std::invalid_argument("run_se_validation: trials must be >= 1");

    auto t0 = std::chrono::steady_clock::now();

    std::size_t n_users = spec.config.total_users();
    // with a single drop, give the threads to the Monte-Carlo loop instead
    std::size_t outer_threads = spec.drops == 1 ? 1 : spec.threads;
    std::size_t inner_threads = spec.drops == 1 ? spec.threads : 1;

    SeValidationResult result;

    for (std::size_t m : spec.antenna_sweep)
    {
        NetworkConfig cfg = spec.config;
        cfg.antennas = m;
        cfg.validate();

        struct DropSlot
        {
            arma::vec sinr_cf, sinr_mc, se_cf, se_mc;
        };
        std::vector<DropSlot> slots(spec.drops);

        parallel_for(spec.drops, outer_threads, [&](std::size_t drop) {
            run_drop(drop, [&] {
                std::uint64_t seed = drop_seed_of(spec, drop);
                NetworkGeometry geo = drop_network(cfg, seed);
                LinkStatsGrid grid = build_link_statistics(cfg, geo, seed);
                PilotPlan plan = assign_pilots(cfg);
                EstimationContext ctx = build_estimation_context(grid, plan, cfg);
                SinrTermCache cache = build_sinr_cache(grid, ctx, cfg);

                arma::vec p = arma::vectorise(cfg.max_power_mw.t());
                DropSlot &slot = slots[drop];
                slot.sinr_cf = cache.sinr(p);
                slot.se_cf = spectral_efficiency(slot.sinr_cf, cfg);

                grid.prepare_sampling();
                UatfMoments moments = monte_carlo_uatf_moments(
                    grid, ctx, cfg, spec.trials, derive_seed(seed, seed_salt::trial_block, m),
                    inner_threads);
                std::vector<SinrTerms> mc = monte_carlo_sinr(moments, cfg, p);

                slot.sinr_mc.set_size(n_users);
                for (std::size_t u = 0; u < n_users; ++u)
                    slot.sinr_mc(u) = mc[u].sinr();
                slot.se_mc = spectral_efficiency(slot.sinr_mc, cfg);
            });
        });

        std::vector<double> cf_samples, mc_samples, sinr_rel, se_rel;
        cf_samples.reserve(spec.drops * n_users);
        mc_samples.reserve(spec.drops * n_users);

        for (std::size_t drop = 0; drop < spec.drops; ++drop)
        {
            const DropSlot &slot = slots[drop];
            for (std::size_t u = 0; u < n_users; ++u)
            {
                SeSampleRow row;
                row.antennas = m;
                row.drop = drop;
                row.drop_seed = drop_seed_of(spec, drop);
                row.cell = u / spec.config.users_per_cell;
                row.user = u % spec.config.users_per_cell;
                row.sinr_cf = slot.sinr_cf(u);
                row.sinr_mc = slot.sinr_mc(u);
                row.se_cf = slot.se_cf(u);
                row.se_mc = slot.se_mc(u);
                row.rel_err = std::abs(row.sinr_cf - row.sinr_mc) / row.sinr_mc;
                result.rows.push_back(row);

                cf_samples.push_back(row.se_cf);
                mc_samples.push_back(row.se_mc);
                sinr_rel.push_back(row.rel_err);
                se_rel.push_back(std::abs(row.se_cf - row.se_mc) / row.se_mc);
            }
        }

        std::string suffix = "M" + std::to_string(m);
        result.cdf_closed_form.push_back(CdfSeries::from_samples(cf_samples, "se_cf_" + suffix));
        result.cdf_monte_carlo.push_back(CdfSeries::from_samples(mc_samples, "se_mc_" + suffix));

        SeAgreement agr;
        agr.antennas = m;
        agr.mean_se_cf = result.cdf_closed_form.back().mean();
        agr.mean_se_mc = result.cdf_monte_carlo.back().mean();
        agr.mean_rel_err = arma::mean(arma::vec(sinr_rel));
        agr.max_rel_err = arma::vec(sinr_rel).max();
        agr.frac_within_3pct =
            double(std::count_if(sinr_rel.begin(), sinr_rel.end(), [](double e) { return e <= 0.03; })) /
            double(sinr_rel.size());
        agr.rel_err_p95 = percentile(se_rel, 0.95);
        result.agreement.push_back(agr);
    }

    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

PowerSweepResult run_power_sweep(const ExperimentSpec &spec)
{
    spec.validate();
    if (spec.xi_sweep.empty() || spec.algorithms.empty())
        throw std::invalid_argument("run_power_sweep: xi or algorithm sweep is empty");

    auto t0 = std::chrono::steady_clock::now();

    const NetworkConfig &cfg = spec.config;
    std::size_t n_users = cfg.total_users();
    std::size_t n_xi = spec.xi_sweep.size();

    bool run_alg1 = std::count(spec.algorithms.begin(), spec.algorithms.end(), 1) > 0;
    bool run_alg2 = std::count(spec.algorithms.begin(), spec.algorithms.end(), 2) > 0;

    struct DropSlot
    {
        // alg1 allocation doubles as the feasibility classifier, so it is
        // always solved
        std::vector<PowerAllocation> alg1, alg2;
        std::vector<bool> feasible;
    };
    std::vector<DropSlot> slots(spec.drops);

    parallel_for(spec.drops, spec.threads, [&](std::size_t drop) {
        run_drop(drop, [&] {
            std::uint64_t seed = drop_seed_of(spec, drop);
            NetworkGeometry geo = drop_network(cfg, seed);
            LinkStatsGrid grid = build_link_statistics(cfg, geo, seed);
            PilotPlan plan = assign_pilots(cfg);
            EstimationContext ctx = build_estimation_context(grid, plan, cfg);
            SinrTermCache cache = build_sinr_cache(grid, ctx, cfg);

            DropSlot &slot = slots[drop];
            slot.alg1.resize(n_xi);
            slot.alg2.resize(run_alg2 ? n_xi : 0);
            slot.feasible.resize(n_xi);
            for (std::size_t x = 0; x < n_xi; ++x)
            {
                QoSTargets targets = QoSTargets::uniform(cfg, spec.xi_sweep[x]);
                slot.alg1[x] = algorithm1_solve(cache, targets, cfg);
                slot.feasible[x] = slot.alg1[x].converged && slot.alg1[x].all_satisfied;
                if (run_alg2)
                    slot.alg2[x] = algorithm2_solve(cache, targets, cfg);
            }
        });
    });

    PowerSweepResult result;

    for (std::size_t x = 0; x < n_xi; ++x)
    {
        double xi = spec.xi_sweep[x];
        for (int alg : spec.algorithms)
        {
            PowerSweepCell cell;
            cell.xi = xi;
            cell.algorithm = alg;

            std::vector<double> feas_powers, cong_powers;
            std::vector<PowerAllocation> converged_allocs;
            double total_feas = 0.0;

            for (std::size_t drop = 0; drop < spec.drops; ++drop)
            {
                const DropSlot &slot = slots[drop];
                const PowerAllocation &alloc = alg == 1 ? slot.alg1[x] : slot.alg2[x];
                bool feasible = slot.feasible[x];

                for (std::size_t u = 0; u < n_users; ++u)
                {
                    PowerSampleRow row;
                    row.xi = xi;
                    row.algorithm = alg;
                    row.drop = drop;
                    row.drop_seed = drop_seed_of(spec, drop);
                    row.cell = u / cfg.users_per_cell;
                    row.user = u % cfg.users_per_cell;
                    row.power_mw = alloc.power_mw(u);
                    row.satisfied = alloc.satisfied(u) != 0;
                    row.feasible_drop = feasible;
                    row.converged = alloc.converged;
                    result.rows.push_back(row);
                }

                if (!alloc.converged)
                {
                    cell.nonconverged_drops += 1;
                    continue;
                }
                converged_allocs.push_back(alloc);
                if (feasible)
                {
                    cell.feasible_drops += 1;
                    total_feas += alloc.total_power_mw();
                    for (std::size_t u = 0; u < n_users; ++u)
                        feas_powers.push_back(alloc.power_mw(u));
                }
                else
                {
                    cell.congested_drops += 1;
                    for (std::size_t u = 0; u < n_users; ++u)
                        cong_powers.push_back(alloc.power_mw(u));
                }
            }

            std::string suffix = "alg" + std::to_string(alg) + "_xi" + format_double(xi);
            cell.feasible_power_cdf = CdfSeries::from_samples(feas_powers, "power_feasible_" + suffix);
            cell.congested_power_cdf =
                CdfSeries::from_samples(cong_powers, "power_congested_" + suffix);
            cell.stats = satisfied_probability(converged_allocs);
            cell.mean_total_power_feasible_mw =
                cell.feasible_drops ? total_feas / double(cell.feasible_drops) : 0.0;
            result.cells.push_back(cell);
        }

        if (run_alg1 && run_alg2)
        {
            AlgorithmComparison cmp;
            cmp.xi = xi;
            double ratio_sum = 0.0;
            std::size_t ge = 0;
            for (std::size_t drop = 0; drop < spec.drops; ++drop)
            {
                const DropSlot &slot = slots[drop];
                if (slot.feasible[x])
                    continue; // ordering claim concerns congested drops
                const PowerAllocation &a1 = slot.alg1[x];
                const PowerAllocation &a2 = slot.alg2[x];
                if (!a1.converged || !a2.converged)
                    continue;
                cmp.congested_drops_compared += 1;
                double t1 = a1.total_power_mw(), t2 = a2.total_power_mw();
                if (t1 >= t2)
                    ge += 1;
                ratio_sum += t1 / t2;
            }
            if (cmp.congested_drops_compared > 0)
            {
                cmp.frac_alg1_ge_alg2 = double(ge) / double(cmp.congested_drops_compared);
                cmp.mean_total_ratio = ratio_sum / double(cmp.congested_drops_compared);
            }
            result.comparisons.push_back(cmp);
        }
    }

    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// ------------------------------------------------------------------ output

void write_cdf_csv(const CdfSeries &cdf, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << "value,cum_fraction\n";
    for (std::size_t i = 0; i < cdf.values.n_elem; ++i)
        out << format_double(cdf.values(i)) << ',' << format_double(cdf.cum_fraction(i)) << '\n';
}

static nlohmann::json spec_to_json(const ExperimentSpec &spec)
{
    nlohmann::json j;
    j["config"] = config_to_json(spec.config);
    j["antenna_sweep"] = spec.antenna_sweep;
    j["xi_sweep"] = spec.xi_sweep;
    j["algorithms"] = spec.algorithms;
    j["drops"] = spec.drops;
    j["trials"] = spec.trials;
    j["master_seed"] = spec.master_seed;
    return j;
}

nlohmann::json write_se_validation(const SeValidationResult &result, const ExperimentSpec &spec,
                                   const std::string &out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);

    {
        std::ofstream out(dir / "se_samples.csv");
        if (!out)
            throw std::runtime_error("cannot write se_samples.csv");
        out << "antennas,drop,drop_seed,cell,user,sinr_cf,sinr_mc,se_cf,se_mc,rel_err\n";
        for (const auto &r : result.rows)
            out << r.antennas << ',' << r.drop << ',' << r.drop_seed << ',' << r.cell << ','
                << r.user << ',' << format_double(r.sinr_cf) << ',' << format_double(r.sinr_mc)
                << ',' << format_double(r.se_cf) << ',' << format_double(r.se_mc) << ','
                << format_double(r.rel_err) << '\n';
    }

    for (std::size_t i = 0; i < result.cdf_closed_form.size(); ++i)
    {
        std::string m = std::to_string(spec.antenna_sweep[i]);
        write_cdf_csv(result.cdf_closed_form[i], (dir / ("se_cdf_cf_M" + m + ".csv")).string());
        write_cdf_csv(result.cdf_monte_carlo[i], (dir / ("se_cdf_mc_M" + m + ".csv")).string());
    }

    nlohmann::json j;
    j["experiment"] = spec_to_json(spec);
    j["kind"] = "se_validation";
    j["runtime_seconds"] = result.runtime_seconds;
    nlohmann::json agr = nlohmann::json::array();
    for (const auto &a : result.agreement)
        agr.push_back({{"antennas", a.antennas},
                       {"mean_se_cf", a.mean_se_cf},
                       {"mean_se_mc", a.mean_se_mc},
                       {"mean_sinr_rel_err", a.mean_rel_err},
                       {"max_sinr_rel_err", a.max_rel_err},
                       {"frac_sinr_within_3pct", a.frac_within_3pct},
                       {"se_rel_err_p95", a.rel_err_p95}});
    j["agreement"] = agr;

    std::ofstream out(dir / "summary.json");
    out << j.dump(2) << '\n';
    return j;
}

nlohmann::json write_power_sweep(const PowerSweepResult &result, const ExperimentSpec &spec,
                                 const std::string &out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);

    {
        std::ofstream out(dir / "power_samples.csv");
        if (!out)
            throw std::runtime_error("cannot write power_samples.csv");
        out << "xi,algorithm,drop,drop_seed,cell,user,power_mw,satisfied,feasible_drop,converged\n";
        for (const auto &r : result.rows)
            out << format_double(r.xi) << ',' << r.algorithm << ',' << r.drop << ',' << r.drop_seed
                << ',' << r.cell << ',' << r.user << ',' << format_double(r.power_mw) << ','
                << (r.satisfied ? 1 : 0) << ',' << (r.feasible_drop ? 1 : 0) << ','
                << (r.converged ? 1 : 0) << '\n';
    }

    {
        std::ofstream out(dir / "satisfied.csv");
        if (!out)
            throw std::runtime_error("cannot write satisfied.csv");
        out << "xi,algorithm,user_fraction,drop_fraction,feasible_drops,congested_drops,"
               "nonconverged_drops,mean_total_power_feasible_mw\n";
        for (const auto &c : result.cells)
            out << format_double(c.xi) << ',' << c.algorithm << ','
                << format_double(c.stats.user_fraction()) << ','
                << format_double(c.stats.drop_fraction()) << ',' << c.feasible_drops << ','
                << c.congested_drops << ',' << c.nonconverged_drops << ','
                << format_double(c.mean_total_power_feasible_mw) << '\n';
    }

    for (const auto &c : result.cells)
    {
        std::string suffix = "alg" + std::to_string(c.algorithm) + "_xi" + format_double(c.xi);
        write_cdf_csv(c.feasible_power_cdf, (dir / ("power_cdf_feasible_" + suffix + ".csv")).string());
        write_cdf_csv(c.congested_power_cdf,
                      (dir / ("power_cdf_congested_" + suffix + ".csv")).string());
    }

    nlohmann::json j;
    j["experiment"] = spec_to_json(spec);
    j["kind"] = "power_sweep";
    j["runtime_seconds"] = result.runtime_seconds;
    j["notes"] = nlohmann::json::array(
        {"Absolute satisfaction percentages depend on the covariance construction and "
         "link-budget details and are not comparable across implementations; only ordering "
         "and trend claims are validated here.",
         "Validated claims: satisfaction probability is non-increasing in xi, and on "
         "congested drops the capped iteration never ends with less total power than the "
         "soft-capped one."});

    nlohmann::json cells = nlohmann::json::array();
    for (const auto &c : result.cells)
        cells.push_back({{"xi", c.xi},
                         {"algorithm", c.algorithm},
                         {"user_fraction", c.stats.user_fraction()},
                         {"drop_fraction", c.stats.drop_fraction()},
                         {"feasible_drops", c.feasible_drops},
                         {"congested_drops", c.congested_drops},
                         {"nonconverged_drops", c.nonconverged_drops},
                         {"mean_total_power_feasible_mw", c.mean_total_power_feasible_mw}});
    j["cells"] = cells;

    nlohmann::json cmps = nlohmann::json::array();
    for (const auto &c : result.comparisons)
        cmps.push_back({{"xi", c.xi},
                        {"congested_drops_compared", c.congested_drops_compared},
                        {"frac_alg1_total_ge_alg2", c.frac_alg1_ge_alg2},
                        {"mean_total_ratio", c.mean_total_ratio}});
    j["alg_comparisons"] = cmps;

    std::ofstream out(dir / "summary.json");
    out << j.dump(2) << '\n';
    return j;
}

} // namespace dscat
