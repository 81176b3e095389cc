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

#include "dscat/pilots.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace dscat
{

void PilotPlan::validate() const
{
    if (cells == 0 || users_per_cell == 0 || pilot_count == 0)
        throw std::invalid_argument("pilot plan: dimensions must be positive");
    if (pilot_index.n_rows != cells || pilot_index.n_cols != users_per_cell)
        throw std::invalid_argument("pilot plan: index matrix has wrong shape");
    if (groups.size() != pilot_count)
        throw std::invalid_argument("pilot plan: group list has wrong length");

    for (std::size_t l = 0; l < cells; ++l)
    {
        std::set<std::size_t> seen;
        for (std::size_t k = 0; k < users_per_cell; ++k)
        {
            std::size_t t = pilot_index(l, k);
            if (t >= pilot_count)
                throw std::invalid_argument("pilot plan: pilot index out of range");
            if (!seen.insert(t).second)
                throw std::invalid_argument("pilot plan: duplicate pilot within one cell");
        }
    }
}

static std::vector<std::vector<std::size_t>> build_groups(std::size_t cells, std::size_t users_per_cell,
                                                          std::size_t pilot_count,
                                                          const arma::umat &indices)
{
    std::vector<std::vector<std::size_t>> groups(pilot_count);
    for (std::size_t l = 0; l < cells; ++l)
        for (std::size_t k = 0; k < users_per_cell; ++k)
            groups[indices(l, k)].push_back(l * users_per_cell + k);
    return groups;
}

PilotPlan PilotPlan::from_indices(std::size_t cells, std::size_t users_per_cell,
                                  std::size_t pilot_count, const arma::umat &indices)
{
    PilotPlan plan;
    plan.cells = cells;
    plan.users_per_cell = users_per_cell;
    plan.pilot_count = pilot_count;
    plan.pilot_index = indices;
    if (indices.n_rows != cells || indices.n_cols != users_per_cell)
        throw std::invalid_argument("pilot plan: index matrix has wrong shape");
    if (pilot_count > 0 && indices.n_elem > 0 && indices.max() >= pilot_count)
        throw std::invalid_argument("pilot plan: pilot index out of range");
    plan.groups = build_groups(cells, users_per_cell, pilot_count, indices);
    plan.validate();
    return plan;
}

PilotPlan assign_pilots(const NetworkConfig &cfg)
{
    cfg.validate();
    arma::umat idx(cfg.cells, cfg.users_per_cell);
    for (std::size_t l = 0; l < cfg.cells; ++l)
        for (std::size_t k = 0; k < cfg.users_per_cell; ++k)
            idx(l, k) = k;
    return PilotPlan::from_indices(cfg.cells, cfg.users_per_cell, cfg.pilot_symbols, idx);
}

arma::cx_vec processed_pilot_signal(const PilotPlan &plan, std::size_t pilot, const NetworkConfig &cfg,
                                    const arma::cx_mat &channels, const arma::cx_vec &noise)
{
    if (pilot >= plan.pilot_count)
        throw std::invalid_argument("processed_pilot_signal: pilot index out of range");
    if (channels.n_cols != plan.cells * plan.users_per_cell)
        throw std::invalid_argument("processed_pilot_signal: one channel column per user expected");
    if (noise.n_elem != channels.n_rows)
        throw std::invalid_argument("processed_pilot_signal: noise length mismatch");

    double tau_p = double(cfg.pilot_symbols);
    arma::cx_vec y = noise;
    for (std::size_t u : plan.groups[pilot])
    {
        std::size_t l = u / plan.users_per_cell, k = u % plan.users_per_cell;
        y += std::sqrt(cfg.pilot_power_mw(l, k)) * tau_p * channels.col(u);
    }
    return y;
}

arma::cx_vec processed_pilot_signal(const PilotPlan &plan, std::size_t pilot, const NetworkConfig &cfg,
                                    const arma::cx_mat &channels, Rng &engine)
{
    arma::cx_vec noise(channels.n_rows);
    fill_complex_standard_normal(engine, noise.memptr(), noise.n_elem);
    noise *= std::sqrt(cfg.noise_variance_mw() * double(cfg.pilot_symbols));
    return processed_pilot_signal(plan, pilot, cfg, channels, noise);
}

EstimationContext build_estimation_context(const LinkStatsGrid &grid, const PilotPlan &plan,
                                           const NetworkConfig &cfg)
{
    plan.validate();
    if (grid.cells != plan.cells || grid.users_per_cell != plan.users_per_cell)
        throw std::invalid_argument("build_estimation_context: grid does not match plan");

    EstimationContext ctx;
    ctx.cells = plan.cells;
    ctx.users_per_cell = plan.users_per_cell;
    ctx.pilot_count = plan.pilot_count;
    ctx.antennas = grid.antennas;
    ctx.sigma2 = cfg.noise_variance_mw();
    ctx.tau_p = double(cfg.pilot_symbols);
    ctx.plan = plan;

    std::size_t n_users = grid.total_users();
    ctx.pilot_gain.set_size(ctx.cells, n_users);
    for (std::size_t l = 0; l < ctx.cells; ++l)
        for (std::size_t u = 0; u < n_users; ++u)
        {
            const LinkStatistics &link = grid.at(l, u);
            double phat = cfg.pilot_power_mw(u / ctx.users_per_cell, u % ctx.users_per_cell);
            ctx.pilot_gain(l, u) = ctx.tau_p * phat * link.beta * link.d;
        }

    ctx.psi.resize(ctx.cells * ctx.pilot_count);
    ctx.chol_lower.resize(ctx.cells * ctx.pilot_count);
    arma::cx_mat eye_m(ctx.antennas, ctx.antennas, arma::fill::eye);
    for (std::size_t l = 0; l < ctx.cells; ++l)
        for (std::size_t t = 0; t < ctx.pilot_count; ++t)
        {
            arma::cx_mat b = ctx.sigma2 * eye_m;
            for (std::size_t u : plan.groups[t])
                b += ctx.pilot_gain(l, u) * grid.at(l, u).bs_corr;

            std::size_t idx = l * ctx.pilot_count + t;
            if (!arma::chol(ctx.chol_lower[idx], b, "lower"))
                throw std::runtime_error("build_estimation_context: covariance not positive definite");
            if (!arma::inv_sympd(ctx.psi[idx], b))
                throw std::runtime_error("build_estimation_context: covariance inversion failed");
        }

    return ctx;
}

arma::cx_mat EstimationContext::estimate_covariance(const LinkStatsGrid &grid, const NetworkConfig &cfg,
                                                    std::size_t bs, std::size_t user) const
{
    const LinkStatistics &link = grid.at(bs, user);
    double phat = cfg.pilot_power_mw(user / users_per_cell, user % users_per_cell);
    const arma::cx_mat &p = psi_at(bs, plan.pilot_index(user / users_per_cell, user % users_per_cell));
    double c = phat * link.beta * link.beta * link.d * link.d * tau_p;
    return c * (link.bs_corr * p * link.bs_corr);
}

nlohmann::json EstimationContext::to_json() const
{
    nlohmann::json j;
    j["cells"] = cells;
    j["users_per_cell"] = users_per_cell;
    j["pilot_count"] = pilot_count;
    j["antennas"] = antennas;
    j["sigma2_mw"] = sigma2;
    j["pilot_symbols"] = tau_p;

    nlohmann::json gain = nlohmann::json::array();
    for (std::size_t l = 0; l < pilot_gain.n_rows; ++l)
    {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t u = 0; u < pilot_gain.n_cols; ++u)
            row.push_back(pilot_gain(l, u));
        gain.push_back(row);
    }
    j["pilot_gain"] = gain;

    nlohmann::json mats = nlohmann::json::array();
    for (std::size_t l = 0; l < cells; ++l)
        for (std::size_t t = 0; t < pilot_count; ++t)
        {
            const arma::cx_mat &p = psi_at(l, t);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t i = 0; i < p.n_rows; ++i)
            {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t c = 0; c < p.n_cols; ++c)
                    row.push_back({p(i, c).real(), p(i, c).imag()});
                rows.push_back(row);
            }
            mats.push_back({{"bs", l}, {"pilot", t}, {"psi", rows}});
        }
    j["despread_inverse"] = mats;
    return j;
}

arma::cx_vec lmmse_estimate(const EstimationContext &ctx, const LinkStatsGrid &grid,
                            const NetworkConfig &cfg, std::size_t bs, std::size_t user,
                            const arma::cx_vec &y)
{
    const LinkStatistics &link = grid.at(bs, user);
    std::size_t l = user / ctx.users_per_cell, k = user % ctx.users_per_cell;
    const arma::cx_mat &lo = ctx.chol_at(bs, ctx.plan.pilot_index(l, k));

    // B^-1 y via the cached Cholesky factor
    arma::cx_vec z = arma::solve(arma::trimatl(lo), y);
    arma::cx_vec w = arma::solve(arma::trimatu(lo.t()), z);

    double scale = std::sqrt(cfg.pilot_power_mw(l, k)) * link.beta * link.d;
    return scale * (link.bs_corr * w);
}

} // namespace dscat
