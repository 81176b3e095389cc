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

#include "dscat/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dscat
{

NetworkGeometry drop_network(const NetworkConfig &cfg, std::uint64_t seed)
{
    cfg.validate();

    NetworkGeometry g;
    g.cells = cfg.cells;
    g.users_per_cell = cfg.users_per_cell;

    std::size_t cols = cfg.grid_cols();
    double w = cfg.cell_width_m();
    double h = cfg.cell_height_m();

    g.bs_xy.set_size(cfg.cells, 2);
    for (std::size_t l = 0; l < cfg.cells; ++l)
    {
        std::size_t cx = l % cols;
        std::size_t cy = l / cols;
        g.bs_xy(l, 0) = (double(cx) + 0.5) * w;
        g.bs_xy(l, 1) = (double(cy) + 0.5) * h;
    }

    Rng engine = make_rng(seed, seed_salt::geometry, 0);
    double keepout = cfg.pathloss.min_distance_m;

    std::size_t n_users = cfg.total_users();
    g.user_xy.set_size(n_users, 2);
    for (std::size_t l = 0; l < cfg.cells; ++l)
    {
        std::size_t cx = l % cols;
        std::size_t cy = l / cols;
        double x0 = double(cx) * w;
        double y0 = double(cy) * h;
        for (std::size_t k = 0; k < cfg.users_per_cell; ++k)
        {
            // rejection-sample the keep-out disc around the serving BS
            double x, y;
            do
            {
                x = x0 + uniform_unit(engine) * w;
                y = y0 + uniform_unit(engine) * h;
            } while (std::hypot(x - g.bs_xy(l, 0), y - g.bs_xy(l, 1)) < keepout);
            std::size_t u = g.user_index(l, k);
            g.user_xy(u, 0) = x;
            g.user_xy(u, 1) = y;
        }
    }

    g.distance.set_size(n_users, cfg.cells);
    g.angle.set_size(n_users, cfg.cells);
    for (std::size_t u = 0; u < n_users; ++u)
        for (std::size_t l = 0; l < cfg.cells; ++l)
        {
            double dx = g.user_xy(u, 0) - g.bs_xy(l, 0);
            double dy = g.user_xy(u, 1) - g.bs_xy(l, 1);
            g.distance(u, l) = std::hypot(dx, dy);
            g.angle(u, l) = std::atan2(dy, dx);
        }

    return g;
}

double large_scale_fading_db(double distance_m, double shadow_db, const PathlossParams &p)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("large_scale_fading: distance must be positive");
    double d = std::max(distance_m, p.min_distance_m);
    return p.intercept_db + p.slope_db_per_decade * std::log10(d / 1000.0) + shadow_db;
}

double large_scale_fading(double distance_m, double shadow_db, const PathlossParams &p)
{
    return std::pow(10.0, large_scale_fading_db(distance_m, shadow_db, p) / 10.0);
}

} // namespace dscat
