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

#include "dscat/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dscat
{

std::size_t NetworkConfig::grid_cols() const
{
    std::size_t cols = std::size_t(std::ceil(std::sqrt(double(cells))));
    return cols > 0 ? cols : 1;
}

std::size_t NetworkConfig::grid_rows() const
{
    std::size_t cols = grid_cols();
    return (cells + cols - 1) / cols;
}

double NetworkConfig::noise_variance_mw() const
{
    if (noise_variance_dbm.has_value())
        return std::pow(10.0, *noise_variance_dbm / 10.0);
    // -174 dBm/Hz thermal density at 290 K
    double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, dbm / 10.0);
}

double NetworkConfig::payload_fraction() const
{
    return 1.0 - double(pilot_symbols) / double(coherence_block_symbols);
}

void NetworkConfig::validate() const
{
    if (cells == 0 || users_per_cell == 0)
        throw std::invalid_argument("config: cells and users_per_cell must be positive");
    if (antennas == 0)
        throw std::invalid_argument("config: antennas must be positive");
    if (scatterers == 0)
        throw std::invalid_argument("config: scatterers must be positive");
    if (pilot_symbols < users_per_cell)
        throw std::invalid_argument("config: pilot_symbols must be at least users_per_cell");
    if (coherence_block_symbols <= pilot_symbols)
        throw std::invalid_argument("config: coherence block must exceed the pilot overhead");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("config: bandwidth must be positive");
    if (!(area_side_m > 0.0))
        throw std::invalid_argument("config: area side must be positive");
    if (shadow_std_db < 0.0)
        throw std::invalid_argument("config: shadow standard deviation must be non-negative");
    if (!(noise_variance_mw() > 0.0))
        throw std::invalid_argument("config: noise variance must be positive");

    double r = correlation.scatterer_correlation;
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("config: scatterer_correlation must lie in [0,1)");
    if (!(correlation.antenna_spacing_wavelengths > 0.0))
        throw std::invalid_argument("config: antenna spacing must be positive");

    if (!(pathloss.min_distance_m >= 0.0))
        throw std::invalid_argument("config: minimum distance must be non-negative");
    double keepout_limit = 0.5 * std::min(cell_width_m(), cell_height_m());
    if (pathloss.min_distance_m >= keepout_limit)
        throw std::invalid_argument("config: minimum distance leaves no room inside a cell");

    if (pilot_power_mw.n_rows != cells || pilot_power_mw.n_cols != users_per_cell ||
        max_power_mw.n_rows != cells || max_power_mw.n_cols != users_per_cell)
        throw std::invalid_argument("config: power matrices must be cells x users_per_cell");
    if (pilot_power_mw.min() <= 0.0 || max_power_mw.min() <= 0.0)
        throw std::invalid_argument("config: powers must be positive");

    if (!(power_control.tolerance > 0.0))
        throw std::invalid_argument("config: power-control tolerance must be positive");
    if (power_control.max_iterations == 0)
        throw std::invalid_argument("config: max_iterations must be positive");
}

NetworkConfig default_config()
{
    NetworkConfig cfg;
    cfg.pilot_power_mw = arma::mat(cfg.cells, cfg.users_per_cell, arma::fill::value(200.0));
    cfg.max_power_mw = arma::mat(cfg.cells, cfg.users_per_cell, arma::fill::value(200.0));
    return cfg;
}

// Power fields accept either a scalar (applied to every user) or a full
// cells x users_per_cell matrix as nested arrays.
static arma::mat power_from_json(const nlohmann::json &j, std::size_t rows, std::size_t cols,
                                 const char *name)
{
    if (j.is_number())
        return arma::mat(rows, cols, arma::fill::value(j.get<double>()));
    if (!j.is_array())
        throw std::invalid_argument(std::string("config: ") + name + " must be a number or a matrix");
    arma::mat out(rows, cols);
    if (j.size() != rows)
        throw std::invalid_argument(std::string("config: ") + name + " has wrong row count");
    for (std::size_t r = 0; r < rows; ++r)
    {
        const auto &row = j.at(r);
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument(std::string("config: ") + name + " has wrong column count");
        for (std::size_t c = 0; c < cols; ++c)
            out(r, c) = row.at(c).get<double>();
    }
    return out;
}

static nlohmann::json power_to_json(const arma::mat &p)
{
    if (p.n_elem > 0 && p.max() == p.min())
        return p(0, 0);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < p.n_rows; ++r)
    {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < p.n_cols; ++c)
            row.push_back(p(r, c));
        rows.push_back(row);
    }
    return rows;
}

template <typename T> static void read_field(const nlohmann::json &j, const char *key, T &dst)
{
    if (j.contains(key))
        dst = j.at(key).get<T>();
}

NetworkConfig config_from_json(const nlohmann::json &j)
{
    NetworkConfig cfg = default_config();

    read_field(j, "cells", cfg.cells);
    read_field(j, "users_per_cell", cfg.users_per_cell);
    read_field(j, "antennas", cfg.antennas);
    read_field(j, "scatterers", cfg.scatterers);
    read_field(j, "coherence_block_symbols", cfg.coherence_block_symbols);
    read_field(j, "pilot_symbols", cfg.pilot_symbols);
    read_field(j, "bandwidth_hz", cfg.bandwidth_hz);
    read_field(j, "noise_figure_db", cfg.noise_figure_db);
    if (j.contains("noise_variance_dbm") && !j.at("noise_variance_dbm").is_null())
        cfg.noise_variance_dbm = j.at("noise_variance_dbm").get<double>();
    read_field(j, "area_side_m", cfg.area_side_m);
    read_field(j, "shadow_std_db", cfg.shadow_std_db);

    if (j.contains("pathloss"))
    {
        const auto &p = j.at("pathloss");
        read_field(p, "intercept_db", cfg.pathloss.intercept_db);
        read_field(p, "slope_db_per_decade", cfg.pathloss.slope_db_per_decade);
        read_field(p, "min_distance_m", cfg.pathloss.min_distance_m);
    }
    if (j.contains("correlation"))
    {
        const auto &c = j.at("correlation");
        if (c.contains("angular_spread_deg"))
        {
            const auto &v = c.at("angular_spread_deg");
            cfg.correlation.angular_spread_deg =
                v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
        }
        read_field(c, "antenna_spacing_wavelengths", cfg.correlation.antenna_spacing_wavelengths);
        read_field(c, "scatterer_correlation", cfg.correlation.scatterer_correlation);
    }
    if (j.contains("power_control"))
    {
        const auto &p = j.at("power_control");
        read_field(p, "tolerance", cfg.power_control.tolerance);
        read_field(p, "max_iterations", cfg.power_control.max_iterations);
        if (p.contains("target_convention"))
        {
            std::string s = p.at("target_convention").get<std::string>();
            if (s == "occupied")
                cfg.power_control.convention = TargetConvention::occupied;
            else if (s == "prelog")
                cfg.power_control.convention = TargetConvention::prelog;
            else
                throw std::invalid_argument("config: unknown target_convention '" + s + "'");
        }
    }

    // Resize defaulted power matrices if the layout changed, then apply overrides.
    cfg.pilot_power_mw = arma::mat(cfg.cells, cfg.users_per_cell, arma::fill::value(200.0));
    cfg.max_power_mw = arma::mat(cfg.cells, cfg.users_per_cell, arma::fill::value(200.0));
    if (j.contains("pilot_power_mw"))
        cfg.pilot_power_mw = power_from_json(j.at("pilot_power_mw"), cfg.cells, cfg.users_per_cell, "pilot_power_mw");
    if (j.contains("max_power_mw"))
        cfg.max_power_mw = power_from_json(j.at("max_power_mw"), cfg.cells, cfg.users_per_cell, "max_power_mw");

    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const NetworkConfig &cfg)
{
    nlohmann::json j;
    j["cells"] = cfg.cells;
    j["users_per_cell"] = cfg.users_per_cell;
    j["antennas"] = cfg.antennas;
    j["scatterers"] = cfg.scatterers;
    j["coherence_block_symbols"] = cfg.coherence_block_symbols;
    j["pilot_symbols"] = cfg.pilot_symbols;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["noise_figure_db"] = cfg.noise_figure_db;
    j["noise_variance_dbm"] = cfg.noise_variance_dbm.has_value() ? nlohmann::json(*cfg.noise_variance_dbm)
                                                                 : nlohmann::json(nullptr);
    j["area_side_m"] = cfg.area_side_m;
    j["shadow_std_db"] = cfg.shadow_std_db;
    j["pathloss"] = {{"intercept_db", cfg.pathloss.intercept_db},
                     {"slope_db_per_decade", cfg.pathloss.slope_db_per_decade},
                     {"min_distance_m", cfg.pathloss.min_distance_m}};
    j["correlation"] = {{"angular_spread_deg", std::isfinite(cfg.correlation.angular_spread_deg)
                                                   ? nlohmann::json(cfg.correlation.angular_spread_deg)
                                                   : nlohmann::json(nullptr)},
                        {"antenna_spacing_wavelengths", cfg.correlation.antenna_spacing_wavelengths},
                        {"scatterer_correlation", cfg.correlation.scatterer_correlation}};
    j["power_control"] = {{"tolerance", cfg.power_control.tolerance},
                          {"max_iterations", cfg.power_control.max_iterations},
                          {"target_convention", cfg.power_control.convention == TargetConvention::occupied
                                                    ? "occupied"
                                                    : "prelog"}};
    j["pilot_power_mw"] = power_to_json(cfg.pilot_power_mw);
    j["max_power_mw"] = power_to_json(cfg.max_power_mw);
    return j;
}

NetworkConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

} // namespace dscat
