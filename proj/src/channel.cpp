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

#include "dscat/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace dscat
{

void LinkStatistics::validate() const
{
    if (!(beta > 0.0))
        throw std::invalid_argument("link statistics: beta must be positive");
    if (scatterers == 0)
        throw std::invalid_argument("link statistics: scatterer count must be positive");
    if (bs_corr.n_rows == 0 || bs_corr.n_rows != bs_corr.n_cols)
        throw std::invalid_argument("link statistics: BS correlation must be square");
    if (scatter_corr.n_rows != scatterers || scatter_corr.n_cols != scatterers)
        throw std::invalid_argument("link statistics: scatterer correlation has wrong size");

    double m = double(bs_corr.n_rows);
    if (std::abs(arma::accu(arma::real(bs_corr.diag())) - m) > 1e-6 * m)
        throw std::invalid_argument("link statistics: BS correlation must have trace = antennas");
    double s = double(scatterers);
    double tr = arma::trace(scatter_corr);
    if (std::abs(tr - s * d) > 1e-6 * s * std::max(1.0, d))
        throw std::invalid_argument("link statistics: d must equal tr(scatter_corr)/S");
}

void LinkStatsGrid::prepare_sampling()
{
    for (auto &link : links)
    {
        if (link.bs_corr_sqrt.n_rows == 0)
            link.bs_corr_sqrt = hermitian_sqrt(link.bs_corr);
        if (link.scatter_corr_sqrt.n_rows == 0)
            link.scatter_corr_sqrt = symmetric_sqrt(link.scatter_corr);
    }
}

LinkStatsGrid build_link_statistics(const NetworkConfig &cfg, const NetworkGeometry &geometry,
                                    std::uint64_t seed)
{
    cfg.validate();
    if (geometry.cells != cfg.cells || geometry.users_per_cell != cfg.users_per_cell)
        throw std::invalid_argument("build_link_statistics: geometry does not match config");

    LinkStatsGrid grid;
    grid.cells = cfg.cells;
    grid.users_per_cell = cfg.users_per_cell;
    grid.antennas = cfg.antennas;
    grid.scatterers = cfg.scatterers;

    std::size_t n_users = cfg.total_users();
    grid.links.resize(cfg.cells * n_users);

    // One shadow draw per (user, BS) link, in flat link order. Drawing these
    // first keeps the large-scale realization independent of everything else.
    Rng engine = make_rng(seed, seed_salt::shadow, 0);
    arma::mat shadow_db(n_users, cfg.cells);
    for (std::size_t u = 0; u < n_users; ++u)
        for (std::size_t l = 0; l < cfg.cells; ++l)
            shadow_db(u, l) = cfg.shadow_std_db * standard_normal(engine);

    // Scatterer-side correlation is user/BS independent in this model.
    arma::mat scatter = scatterer_correlation_matrix(cfg.scatterers, cfg.correlation.scatterer_correlation);
    double d = arma::trace(scatter) / double(cfg.scatterers);
    double scatter_sq = arma::accu(scatter % scatter); // tr(Rs^2) for symmetric Rs

    double spread_rad = cfg.correlation.angular_spread_deg * arma::datum::pi / 180.0;

    for (std::size_t l = 0; l < cfg.cells; ++l)
        for (std::size_t u = 0; u < n_users; ++u)
        {
            LinkStatistics &link = grid.at(l, u);
            link.beta = large_scale_fading(geometry.distance(u, l), shadow_db(u, l), cfg.pathloss);
            link.d = d;
            link.scatterers = cfg.scatterers;
            link.scatter_corr = scatter;
            link.scatter_corr_sq_trace = scatter_sq;
            link.bs_corr = bs_correlation_matrix(cfg.antennas, geometry.angle(u, l), spread_rad,
                                                 cfg.correlation.antenna_spacing_wavelengths);
        }

    return grid;
}

void ChannelWorkspace::resize(std::size_t antennas, std::size_t scatterers)
{
    scatter_coef.set_size(scatterers);
    bs_fading.set_size(antennas, scatterers);
    mixed.set_size(antennas);
}

void sample_channel(const LinkStatistics &link, Rng &engine, ChannelWorkspace &ws, arma::cx_vec &h)
{
    if (link.bs_corr_sqrt.n_rows == 0 || link.scatter_corr_sqrt.n_rows == 0)
        throw std::logic_error("sample_channel: call prepare_sampling() first");

    std::size_t m = link.bs_corr.n_rows;
    std::size_t s = link.scatterers;

    fill_complex_standard_normal(engine, ws.scatter_coef.memptr(), s);
    fill_complex_standard_normal(engine, ws.bs_fading.memptr(), m * s);

    // h = sqrt(beta/S) * Rb^(1/2) * G * (Rs^(1/2) g)
    arma::cx_vec t = link.scatter_corr_sqrt * ws.scatter_coef;
    ws.mixed = ws.bs_fading * t;
    h = std::sqrt(link.beta / double(s)) * (link.bs_corr_sqrt * ws.mixed);
}

arma::cx_vec sample_channel(const LinkStatistics &link, Rng &engine)
{
    ChannelWorkspace ws;
    ws.resize(link.bs_corr.n_rows, link.scatterers);
    arma::cx_vec h;
    sample_channel(link, engine, ws, h);
    return h;
}

} // namespace dscat
