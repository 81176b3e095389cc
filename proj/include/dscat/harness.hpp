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

#ifndef DSCAT_HARNESS_HPP
#define DSCAT_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dscat/config.hpp"
#include "dscat/power.hpp"
#include "dscat/se.hpp"

namespace dscat
{

// A batch experiment: which sweeps to run over how many random drops. Every
// random quantity derives from master_seed and the drop index, so outputs are
// reproducible for any thread count.
struct ExperimentSpec
{
    NetworkConfig config = default_config();

    std::vector<std::size_t> antenna_sweep = {50, 100, 150}; // SE validation
    std::vector<double> xi_sweep = {1.5, 1.75, 2.0};          // power sweep
    std::vector<int> algorithms = {1, 2};

    std::size_t drops = 200;
    std::size_t trials = 10000; // Monte-Carlo trials per drop
    std::uint64_t master_seed = 1;
    std::size_t threads = 0; // 0 = hardware concurrency

    void validate() const; // throws std::invalid_argument
};

// Empirical distribution: sorted values with cumulative fractions
// 1/n, 2/n, ..., 1.
struct CdfSeries
{
    std::string label;
    arma::vec values;
    arma::vec cum_fraction;

    static CdfSeries from_samples(std::vector<double> samples, std::string label);
    double mean() const { return values.n_elem ? arma::mean(values) : 0.0; }
};

// ---------------------------------------------------------------- SE sweep

struct SeSampleRow
{
    std::size_t antennas = 0;
    std::size_t drop = 0;
    std::uint64_t drop_seed = 0;
    std::size_t cell = 0;
    std::size_t user = 0;
    double sinr_cf = 0.0, sinr_mc = 0.0;
    double se_cf = 0.0, se_mc = 0.0;
    double rel_err = 0.0; // |sinr_cf - sinr_mc| / sinr_mc
};

struct SeAgreement
{
    std::size_t antennas = 0;
    double mean_se_cf = 0.0, mean_se_mc = 0.0;
    double mean_rel_err = 0.0, max_rel_err = 0.0;
    double frac_within_3pct = 0.0;
    double rel_err_p95 = 0.0;
};

struct SeValidationResult
{
    std::vector<SeSampleRow> rows;         // drop-major within each antenna count
    std::vector<CdfSeries> cdf_closed_form; // one per antenna count
    std::vector<CdfSeries> cdf_monte_carlo;
    std::vector<SeAgreement> agreement;
    double runtime_seconds = 0.0;
};

// Full-power SE per user on every drop, by the closed form and the
// Monte-Carlo estimator, for each antenna count. Drop geometry and shadowing
// depend only on (master_seed, drop), so the same large-scale realizations
// are re-used across antenna counts.
SeValidationResult run_se_validation(const ExperimentSpec &spec);

// ------------------------------------------------------------- power sweep

struct PowerSampleRow
{
    double xi = 0.0;
    int algorithm = 0;
    std::size_t drop = 0;
    std::uint64_t drop_seed = 0;
    std::size_t cell = 0;
    std::size_t user = 0;
    double power_mw = 0.0;
    bool satisfied = false;
    bool feasible_drop = false;
    bool converged = false;
};

// Aggregates for one (xi, algorithm) pair.
struct PowerSweepCell
{
    double xi = 0.0;
    int algorithm = 0;
    CdfSeries feasible_power_cdf;  // per-user powers over feasible converged drops
    CdfSeries congested_power_cdf; // same over infeasible converged drops
    SatisfiedStats stats;          // over converged drops
    std::size_t feasible_drops = 0;
    std::size_t congested_drops = 0;
    std::size_t nonconverged_drops = 0;
    double mean_total_power_feasible_mw = 0.0;
};

// Total-power ordering between the two algorithms on congested drops.
struct AlgorithmComparison
{
    double xi = 0.0;
    std::size_t congested_drops_compared = 0;
    double frac_alg1_ge_alg2 = 0.0;
    double mean_total_ratio = 0.0; // mean of alg1 total / alg2 total
};

struct PowerSweepResult
{
    std::vector<PowerSampleRow> rows;
    std::vector<PowerSweepCell> cells; // xi-major, algorithm-minor
    std::vector<AlgorithmComparison> comparisons;
    double runtime_seconds = 0.0;
};

// Solves every drop at every xi with the requested algorithms. Drops are
// classified feasible/congested by whether the budget-capped iteration can
// satisfy all targets; non-converged runs are flagged, excluded from the
// CDFs, and counted.
PowerSweepResult run_power_sweep(const ExperimentSpec &spec);

// ------------------------------------------------------------------ output

// Shortest round-trip decimal representation (std::to_chars), so re-reading
// the CSV reproduces the exact double and identical runs produce identical
// bytes.
std::string format_double(double v);

void write_cdf_csv(const CdfSeries &cdf, const std::string &path);

// Writes se_samples.csv, per-antenna-count CDF files, and summary.json into
// out_dir (created if needed). Returns the summary JSON.
nlohmann::json write_se_validation(const SeValidationResult &result, const ExperimentSpec &spec,
                                   const std::string &out_dir);

// Writes power_samples.csv, per-(xi, algorithm) CDF files, satisfied.csv, and
// summary.json into out_dir. Returns the summary JSON.
nlohmann::json write_power_sweep(const PowerSweepResult &result, const ExperimentSpec &spec,
                                 const std::string &out_dir);

} // namespace dscat

#endif
