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
// Command-line front end: validate-se (closed-form vs Monte-Carlo SE),
// sweep (power control over random drops), optimize (one drop, one target).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dscat/geometry.hpp"
#include "dscat/harness.hpp"
#include "dscat/pilots.hpp"
#include "dscat/rng.hpp"

namespace
{

dscat::NetworkConfig load_or_default(const std::string &path)
{
    return path.empty() ? dscat::default_config() : dscat::load_config(path);
}

int run_validate_se(const dscat::ExperimentSpec &spec, const std::string &out_dir)
{
    dscat::SeValidationResult result = dscat::run_se_validation(spec);
    dscat::write_se_validation(result, spec, out_dir);
    for (const auto &a : result.agreement)
        std::cout << "M=" << a.antennas << ": mean SE closed-form " << a.mean_se_cf
                  << " b/s/Hz, Monte-Carlo " << a.mean_se_mc << " b/s/Hz, SINR rel err within 3% for "
                  << 100.0 * a.frac_within_3pct << "% of users\n";
    std::cout << "wrote " << out_dir << " (" << result.rows.size() << " samples, "
              << result.runtime_seconds << " s)\n";
    return 0;
}

int run_sweep(const dscat::ExperimentSpec &spec, const std::string &out_dir)
{
    dscat::PowerSweepResult result = dscat::run_power_sweep(spec);
    dscat::write_power_sweep(result, spec, out_dir);
    for (const auto &c : result.cells)
        std::cout << "xi=" << c.xi << " alg" << c.algorithm << ": " << c.feasible_drops
                  << " feasible / " << c.congested_drops << " congested / " << c.nonconverged_drops
                  << " non-converged drops, satisfied users " << 100.0 * c.stats.user_fraction()
                  << "%\n";
    std::cout << "wrote " << out_dir << " (" << result.runtime_seconds << " s)\n";
    return 0;
}

int run_optimize(const dscat::NetworkConfig &cfg, std::uint64_t drop_seed, double xi, int algorithm,
                 double eps, const std::string &out_dir)
{
    dscat::NetworkGeometry geo = dscat::drop_network(cfg, drop_seed);
    dscat::LinkStatsGrid grid = dscat::build_link_statistics(cfg, geo, drop_seed);
    dscat::PilotPlan plan = dscat::assign_pilots(cfg);
    dscat::EstimationContext ctx = dscat::build_estimation_context(grid, plan, cfg);
    dscat::SinrTermCache cache = dscat::build_sinr_cache(grid, ctx, cfg);
    dscat::QoSTargets targets = dscat::QoSTargets::uniform(cfg, xi);

    dscat::NetworkConfig run_cfg = cfg;
    run_cfg.power_control.tolerance = eps;
    dscat::PowerAllocation alloc = algorithm == 1
                                       ? dscat::algorithm1_solve(cache, targets, run_cfg)
                                       : dscat::algorithm2_solve(cache, targets, run_cfg);

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);

    nlohmann::json j;
    j["xi"] = xi;
    j["algorithm"] = algorithm;
    j["eps"] = eps;
    j["drop_seed"] = drop_seed;
    j["user_index"] = "cell * users_per_cell + user";
    j["power_mw"] = std::vector<double>(alloc.power_mw.begin(), alloc.power_mw.end());
    j["sinr"] = std::vector<double>(alloc.sinr.begin(), alloc.sinr.end());
    j["se"] = std::vector<double>(alloc.se.begin(), alloc.se.end());
    j["satisfied"] = std::vector<int>(alloc.satisfied.begin(), alloc.satisfied.end());
    j["all_satisfied"] = alloc.all_satisfied;
    j["converged"] = alloc.converged;
    j["iterations"] = alloc.iterations;
    j["total_power_mw"] = alloc.total_power_mw();
    j["total_power_trace_mw"] =
        std::vector<double>(alloc.total_power_trace.begin(), alloc.total_power_trace.end());

    std::ofstream jf(dir / "allocation.json");
    if (!jf)
        throw std::runtime_error("cannot write allocation.json");
    jf << j.dump(2) << '\n';

    std::ofstream tf(dir / "trace.csv");
    if (!tf)
        throw std::runtime_error("cannot write trace.csv");
    tf << "iteration,total_power_mw\n";
    for (std::size_t i = 0; i < alloc.total_power_trace.size(); ++i)
        tf << i << ',' << dscat::format_double(alloc.total_power_trace[i]) << '\n';

    std::cout << "alg" << algorithm << " xi=" << xi << ": total power "
              << alloc.total_power_mw() << " mW after " << alloc.iterations << " iterations, "
              << (alloc.all_satisfied ? "all targets met" : "targets unmet (congested)")
              << (alloc.converged ? "" : ", NOT converged") << "\nwrote " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    // drop-level threading is handled explicitly; keep BLAS single-threaded
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"multi-cell massive MIMO uplink simulator for double-scattering channels"};
    app.require_subcommand(1);
    // lets --config appear either before or after the subcommand name
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "JSON network config (defaults used when omitted)");

    auto *validate = app.add_subcommand(
        "validate-se", "compare closed-form and Monte-Carlo spectral efficiency per user");
    std::string v_out = "out/validate-se";
    dscat::ExperimentSpec v_spec;
    std::size_t v_drops = 20;
    validate->add_option("--out", v_out, "output directory");
    validate->add_option("--seed", v_spec.master_seed, "master seed");
    validate->add_option("--threads", v_spec.threads, "worker threads (0 = all cores)");
    validate->add_option("--trials", v_spec.trials, "Monte-Carlo trials per drop");
    validate->add_option("--drops", v_drops, "random drops");
    validate->add_option("--antennas", v_spec.antenna_sweep, "antenna counts")->delimiter(',');

    auto *sweep = app.add_subcommand(
        "sweep", "run both power-control algorithms over random drops and targets");
    std::string s_out = "out/sweep";
    dscat::ExperimentSpec s_spec;
    sweep->add_option("--out", s_out, "output directory");
    sweep->add_option("--seed", s_spec.master_seed, "master seed");
    sweep->add_option("--threads", s_spec.threads, "worker threads (0 = all cores)");
    sweep->add_option("--trials", s_spec.trials, "Monte-Carlo trials (echoed to summary)");
    sweep->add_option("--drops", s_spec.drops, "random drops");
    sweep->add_option("--xi", s_spec.xi_sweep, "SE targets, b/s/Hz")->delimiter(',');
    sweep->add_option("--algorithms", s_spec.algorithms, "power-control variants (1 and/or 2)")
        ->delimiter(',');

    auto *optimize =
        app.add_subcommand("optimize", "solve minimum-power allocation for one drop and target");
    std::string o_out = "out/optimize";
    std::uint64_t o_seed = 1;
    std::size_t o_drop = 0;
    std::uint64_t o_drop_seed = 0;
    bool o_have_drop_seed = false;
    double o_xi = 0.0;
    int o_alg = 1;
    double o_eps = 1e-3;
    optimize->add_option("--out", o_out, "output directory");
    optimize->add_option("--seed", o_seed, "master seed");
    optimize->add_option("--drop", o_drop, "drop index under --seed");
    optimize
        ->add_option("--drop-seed", o_drop_seed,
                     "explicit drop seed (overrides --seed/--drop derivation)")
        ->each([&](const std::string &) { o_have_drop_seed = true; });
    optimize->add_option("--xi", o_xi, "SE target, b/s/Hz")->required();
    optimize->add_option("--algorithm", o_alg, "1 = capped update, 2 = soft-capped update")
        ->check(CLI::IsMember({1, 2}));
    optimize->add_option("--eps", o_eps, "relative total-power stopping tolerance");

    CLI11_PARSE(app, argc, argv);

    try
    {
        dscat::NetworkConfig cfg = load_or_default(config_path);
        if (app.got_subcommand(validate))
        {
            v_spec.config = cfg;
            v_spec.drops = v_drops;
            return run_validate_se(v_spec, v_out);
        }
        if (app.got_subcommand(sweep))
        {
            s_spec.config = cfg;
            return run_sweep(s_spec, s_out);
        }
        std::uint64_t seed = o_have_drop_seed
                                 ? o_drop_seed
                                 : dscat::derive_seed(o_seed, dscat::seed_salt::drop, o_drop);
        return run_optimize(cfg, seed, o_xi, o_alg, o_eps, o_out);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
