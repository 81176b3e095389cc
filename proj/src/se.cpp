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

#include "dscat/se.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dscat/parallel.hpp"
#include "dscat/rng.hpp"

namespace dscat
{

// tr(a * b) for Hermitian b without forming the product.
static std::complex<double> trace_product_herm(const arma::cx_mat &a, const arma::cx_mat &b)
{
    return arma::accu(a % arma::conj(b));
}

// Traces that are nonnegative by construction can round slightly below zero;
// clamp those, but refuse anything beyond the rounding scale.
static double nonnegative(double v, double scale, const char *what)
{
    if (v >= 0.0)
        return v;
    if (v >= -1e-9 * scale)
        return 0.0;
    throw std::logic_error(std::string(what) + ": negative beyond rounding tolerance");
}

SinrTermCache build_sinr_cache(const LinkStatsGrid &grid, const EstimationContext &ctx,
                               const NetworkConfig &cfg)
{
    if (grid.cells != ctx.cells || grid.users_per_cell != ctx.users_per_cell)
        throw std::invalid_argument("build_sinr_cache: grid does not match estimation context");

    std::size_t n = grid.total_users();
    std::size_t k_per = grid.users_per_cell;

    SinrTermCache cache;
    cache.cells = grid.cells;
    cache.users_per_cell = k_per;
    cache.sigma2 = cfg.noise_variance_mw();
    cache.plan = ctx.plan;
    cache.signal_coef.zeros(n);
    cache.noise_term.zeros(n);
    cache.non_coherent_coef.zeros(n, n);
    for (auto &m : cache.coherent_coef)
        m.zeros(n, n);

    for (std::size_t i = 0; i < n; ++i)
    {
        std::size_t l = i / k_per, k = i % k_per;
        const LinkStatistics &own_link = grid.at(l, i);
        const arma::cx_mat &r_own = own_link.bs_corr;
        const arma::cx_mat &psi = ctx.psi_at(l, ctx.plan.pilot_index(l, k));

        arma::cx_mat x = psi * r_own;
        arma::cx_mat xh = x.t();
        arma::cx_mat c = r_own * x; // R psi R, Hermitian PSD
        double c_norm = arma::norm(c, "fro");
        double tr_c = nonnegative(arma::trace(c).real(), c_norm * std::sqrt(double(c.n_rows)),
                                  "sinr cache: estimate trace");

        // tau_p * pilot power * beta^2 * d^2, the recurring self-link factor
        double own = ctx.pilot_gain(l, i) * own_link.beta * own_link.d;

        cache.signal_coef(i) = own * own * tr_c * tr_c;
        cache.noise_term(i) = cache.sigma2 * own * tr_c;

        for (std::size_t u = 0; u < n; ++u)
        {
            const LinkStatistics &lu = grid.at(l, u);
            double t = nonnegative(trace_product_herm(c, lu.bs_corr).real(),
                                   c_norm * arma::norm(lu.bs_corr, "fro"),
                                   "sinr cache: non-coherent trace");
            cache.non_coherent_coef(i, u) = own * lu.beta * lu.d * t;
        }

        for (std::size_t u : ctx.plan.reuse_set(l, k))
        {
            const LinkStatistics &lu = grid.at(l, u);
            double other = ctx.pilot_gain(l, u) * lu.beta * lu.d;

            arma::cx_mat a = lu.bs_corr * x;
            arma::cx_mat b = lu.bs_corr * xh;
            double align_sq = std::norm(arma::trace(a));
            double mix = nonnegative(arma::accu(a % b.st()).real(),
                                     arma::norm(a, "fro") * arma::norm(b, "fro"),
                                     "sinr cache: scatter mixing trace");

            double s = double(lu.scatterers);
            double excess = lu.scatter_corr_sq_trace;
            if (u != i)
                cache.coherent_coef[0](i, u) = own * other * align_sq;
            cache.coherent_coef[1](i, u) = own * other * excess / (lu.d * s * lu.d * s) * align_sq;
            cache.coherent_coef[2](i, u) = own * other * excess / (s * s) * mix;
        }
    }

    cache.interference_coef = cache.non_coherent_coef + cache.coherent_coef[0] +
                              cache.coherent_coef[1] + cache.coherent_coef[2];
    return cache;
}

arma::vec SinrTermCache::sinr(const arma::vec &p_mw) const
{
    if (p_mw.n_elem != total_users())
        throw std::invalid_argument("sinr: power vector has wrong length");
    arma::vec den = interference_coef * p_mw + noise_term;
    return (signal_coef % p_mw) / den;
}

SinrTerms SinrTermCache::terms(std::size_t user, const arma::vec &p_mw) const
{
    if (user >= total_users() || p_mw.n_elem != total_users())
        throw std::invalid_argument("terms: index or power vector out of range");

    SinrTerms t;
    t.signal = signal_coef(user) * p_mw(user);
    t.noise = noise_term(user);
    t.non_coherent = arma::dot(non_coherent_coef.row(user), p_mw);
    for (int g = 0; g < 3; ++g)
        t.coherent_parts[g] = arma::dot(coherent_coef[g].row(user), p_mw);
    t.coherent = t.coherent_parts[0] + t.coherent_parts[1] + t.coherent_parts[2];
    return t;
}

std::vector<SinrTerms> closed_form_sinr(const SinrTermCache &cache, const arma::vec &p_mw)
{
    std::vector<SinrTerms> out(cache.total_users());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = cache.terms(i, p_mw);
    return out;
}

UatfMoments monte_carlo_uatf_moments(const LinkStatsGrid &grid, const EstimationContext &ctx,
                                     const NetworkConfig &cfg, std::size_t trials,
                                     std::uint64_t seed, std::size_t threads)
{
    if (trials == 0)
        throw std::invalid_argument("monte_carlo_uatf_moments: trials must be positive");
    if (grid.links.empty() || grid.links.front().bs_corr_sqrt.n_rows == 0)
        throw std::logic_error("monte_carlo_uatf_moments: grid.prepare_sampling() must run first");
    if (grid.cells != ctx.cells || grid.users_per_cell != ctx.users_per_cell)
        throw std::invalid_argument("monte_carlo_uatf_moments: grid does not match estimation context");

    std::size_t n = grid.total_users();
    std::size_t m = grid.antennas;
    std::size_t n_cells = grid.cells;
    std::size_t k_per = grid.users_per_cell;
    double noise_scale = std::sqrt(cfg.noise_variance_mw() * double(cfg.pilot_symbols));

    std::size_t n_blocks = (trials + mc_block_trials - 1) / mc_block_trials;
    std::vector<arma::cx_vec> mean_acc(n_blocks);
    std::vector<arma::mat> cross_acc(n_blocks);
    std::vector<arma::vec> norm_acc(n_blocks);

    parallel_blocks(trials, mc_block_trials, threads,
                    [&](std::size_t blk, std::size_t begin, std::size_t end) {
                        arma::cx_vec mean(n, arma::fill::zeros);
                        arma::mat cross(n, n, arma::fill::zeros);
                        arma::vec nrm(n, arma::fill::zeros);

                        std::vector<arma::cx_mat> h(n_cells, arma::cx_mat(m, n));
                        arma::cx_mat v(m, k_per);
                        arma::cx_vec noise(m);
                        ChannelWorkspace ws;
                        ws.resize(m, grid.scatterers);
                        Rng engine = make_rng(seed, seed_salt::trial_block, blk);

                        for (std::size_t trial = begin; trial < end; ++trial)
                        {
                            // fixed draw order per trial: all channels BS-major,
                            // then per BS the pilot noise of its served users
                            for (std::size_t l = 0; l < n_cells; ++l)
                                for (std::size_t u = 0; u < n; ++u)
                                {
                                    arma::cx_vec target(h[l].colptr(u), m, false, true);
                                    sample_channel(grid.at(l, u), engine, ws, target);
                                }

                            for (std::size_t l = 0; l < n_cells; ++l)
                            {
                                for (std::size_t k = 0; k < k_per; ++k)
                                {
                                    fill_complex_standard_normal(engine, noise.memptr(), m);
                                    noise *= noise_scale;
                                    arma::cx_vec y = processed_pilot_signal(
                                        ctx.plan, ctx.plan.pilot_index(l, k), cfg, h[l], noise);
                                    v.col(k) = lmmse_estimate(ctx, grid, cfg, l, l * k_per + k, y);
                                }

                                arma::cx_mat resp = v.t() * h[l]; // combiner responses, k_per x n
                                for (std::size_t k = 0; k < k_per; ++k)
                                {
                                    std::size_t i = l * k_per + k;
                                    mean(i) += resp(k, i);
                                    nrm(i) += std::real(arma::cdot(v.col(k), v.col(k)));
                                }
                                cross.rows(l * k_per, l * k_per + k_per - 1) +=
                                    arma::square(arma::abs(resp));
                            }
                        }

                        mean_acc[blk] = std::move(mean);
                        cross_acc[blk] = std::move(cross);
                        norm_acc[blk] = std::move(nrm);
                    });

    UatfMoments out;
    out.cells = n_cells;
    out.users_per_cell = k_per;
    out.trials = trials;
    out.plan = ctx.plan;

    arma::cx_vec mean(n, arma::fill::zeros);
    arma::mat cross(n, n, arma::fill::zeros);
    arma::vec nrm(n, arma::fill::zeros);
    for (std::size_t b = 0; b < n_blocks; ++b) // ascending merge order, always
    {
        mean += mean_acc[b];
        cross += cross_acc[b];
        nrm += norm_acc[b];
    }
    out.served_gain = mean / double(trials);
    out.cross_gain_sq = cross / double(trials);
    out.combiner_norm_sq = nrm / double(trials);
    return out;
}

std::vector<SinrTerms> monte_carlo_sinr(const UatfMoments &moments, const NetworkConfig &cfg,
                                        const arma::vec &p_mw)
{
    std::size_t n = moments.cells * moments.users_per_cell;
    if (p_mw.n_elem != n)
        throw std::invalid_argument("monte_carlo_sinr: power vector has wrong length");

    double sigma2 = cfg.noise_variance_mw();
    std::vector<SinrTerms> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        std::size_t l = i / moments.users_per_cell, k = i % moments.users_per_cell;
        SinrTerms t;
        t.signal = p_mw(i) * std::norm(moments.served_gain(i));
        t.noise = sigma2 * moments.combiner_norm_sq(i);

        double total = arma::dot(moments.cross_gain_sq.row(i), p_mw);
        double in_set = 0.0;
        for (std::size_t u : moments.plan.reuse_set(l, k))
            in_set += p_mw(u) * moments.cross_gain_sq(i, u);

        // sample second moments dominate squared sample means, so these are
        // nonnegative up to rounding
        t.coherent = std::max(0.0, in_set - t.signal);
        t.non_coherent = std::max(0.0, total - in_set);
        out[i] = t;
    }
    return out;
}

double spectral_efficiency(double sinr, const NetworkConfig &cfg)
{
    return cfg.payload_fraction() * std::log2(1.0 + sinr);
}

arma::vec spectral_efficiency(const arma::vec &sinr, const NetworkConfig &cfg)
{
    arma::vec out(sinr.n_elem);
    for (std::size_t i = 0; i < sinr.n_elem; ++i)
        out(i) = spectral_efficiency(sinr(i), cfg);
    return out;
}

} // namespace dscat
