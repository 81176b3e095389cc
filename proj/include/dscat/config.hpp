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

#ifndef DSCAT_CONFIG_HPP
#define DSCAT_CONFIG_HPP

#include <armadillo>
#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

namespace dscat
{

// Distance-based path loss in dB: intercept + slope * log10(d / 1 km),
// evaluated at d >= min_distance_m (users are dropped no closer than that).
struct PathlossParams
{
    double intercept_db = -148.1;
    double slope_db_per_decade = -37.6; // gain slope; more negative = faster decay
    double min_distance_m = 35.0;
};

// Spatial correlation knobs. The BS-side correlation follows a uniform linear
// array response averaged over a Gaussian angle distribution around the
// line-of-sight direction; the scatterer-side correlation is exponential in
// the index distance.
struct CorrelationParams
{
    double angular_spread_deg = 10.0;           // <=0 or non-finite -> uncorrelated array
    double antenna_spacing_wavelengths = 0.5;
    double scatterer_correlation = 0.5;          // in [0,1); 0 -> uncorrelated scatterers
};

// Mapping from a per-user spectral-efficiency target xi (bit/s/Hz) to an SINR
// target. `occupied` spreads the pre-log loss over the payload symbols only
// (target = 2^(xi * tau_c / (tau_c - tau_p)) - 1); `prelog` divides xi by the
// pre-log factor before inverting the rate expression. The two coincide
// algebraically; the switch exists so either printed form can be matched
// digit-for-digit.
enum class TargetConvention
{
    occupied,
    prelog
};

struct PowerControlParams
{
    double tolerance = 1e-3;          // relative total-power change at which iteration stops
    std::size_t max_iterations = 10000;
    TargetConvention convention = TargetConvention::occupied;
};

// Static description of the network: cell layout, array and pilot dimensions,
// scattering rank, noise, power budgets. A NetworkConfig is immutable input;
// everything random (positions, shadowing, small-scale fading) is derived
// from it plus a seed.
struct NetworkConfig
{
    std::size_t cells = 4;
    std::size_t users_per_cell = 5;
    std::size_t antennas = 100;
    std::size_t scatterers = 21;

    std::size_t coherence_block_symbols = 200;
    std::size_t pilot_symbols = 5;

    double bandwidth_hz = 20e6;
    double noise_figure_db = 5.0;
    std::optional<double> noise_variance_dbm; // overrides the thermal-noise derivation

    double area_side_m = 1000.0;
    double shadow_std_db = 7.0;

    PathlossParams pathloss;
    CorrelationParams correlation;
    PowerControlParams power_control;

    // Per-user budgets in mW, cells x users_per_cell. Defaults to 200 mW each.
    arma::mat pilot_power_mw;
    arma::mat max_power_mw;

    std::size_t total_users() const { return cells * users_per_cell; }
    std::size_t user_index(std::size_t cell, std::size_t user) const { return cell * users_per_cell + user; }

    // Cells tile the square area in a near-square grid.
    std::size_t grid_cols() const;
    std::size_t grid_rows() const;
    double cell_width_m() const { return area_side_m / double(grid_cols()); }
    double cell_height_m() const { return area_side_m / double(grid_rows()); }

    // Receiver noise power in mW over the configured bandwidth (thermal floor
    // at 290 K plus noise figure), unless overridden explicitly.
    double noise_variance_mw() const;

    // Fraction of the coherence block left for payload.
    double payload_fraction() const;

    // Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

// Config with every field at its documented default (the 4-cell reference
// scenario) and power matrices filled in.
NetworkConfig default_config();

NetworkConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const NetworkConfig &cfg);

// Reads a JSON file; missing fields keep their defaults.
NetworkConfig load_config(const std::string &path);

} // namespace dscat

#endif
