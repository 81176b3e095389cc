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

#include "dscat/rng.hpp"

#include <cmath>

namespace dscat
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt, std::uint64_t index)
{
    return splitmix64(splitmix64(master + splitmix64(salt)) + index);
}

Rng make_rng(std::uint64_t master, std::uint64_t salt, std::uint64_t index)
{
    return Rng(derive_seed(master, salt, index));
}

static inline double to_unit(std::uint64_t x)
{
    // ((x >> 11) + 0.5) * 2^-53, strictly inside (0,1)
    return (double(x >> 11) + 0.5) * 0x1.0p-53;
}

double uniform_unit(Rng &engine)
{
    return to_unit(engine());
}

double standard_normal(Rng &engine)
{
    double u1 = to_unit(engine());
    double u2 = to_unit(engine());
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Block size for the buffered polar transforms below. Per block: one pass
// consuming raw engine words (inherently serial), then separate elementwise
// passes for log, cos, and sin on plain arrays. Keeping each transcendental
// in its own loop lets the compiler replace it with its SIMD variant;
// a fused loop would collapse cos+sin into a scalar sincos call instead.
constexpr std::size_t block_len = 256;

void fill_standard_normal(Rng &engine, double *dst, std::size_t n)
{
    constexpr double two_pi = 6.283185307179586476925287;
    double u1[block_len], u2[block_len], r[block_len], c[block_len], s[block_len];

    std::size_t done = 0;
    while (done < n)
    {
        std::size_t pairs = (n - done + 1) / 2;
        if (pairs > block_len)
            pairs = block_len;

        for (std::size_t i = 0; i < pairs; ++i)
            u1[i] = to_unit(engine()), u2[i] = to_unit(engine());

        for (std::size_t i = 0; i < pairs; ++i)
            r[i] = std::sqrt(-2.0 * std::log(u1[i]));
        for (std::size_t i = 0; i < pairs; ++i)
            c[i] = std::cos(two_pi * u2[i]);
        for (std::size_t i = 0; i < pairs; ++i)
            s[i] = std::sin(two_pi * u2[i]);

        std::size_t full = (done + 2 * pairs <= n) ? pairs : pairs - 1;
        for (std::size_t i = 0; i < full; ++i)
        {
            dst[done + 2 * i] = r[i] * c[i];
            dst[done + 2 * i + 1] = r[i] * s[i];
        }
        if (full < pairs) // odd tail: keep the cosine leg only
            dst[done + 2 * full] = r[full] * c[full];
        done += 2 * full + (full < pairs ? 1 : 0);
    }
}

void fill_complex_standard_normal(Rng &engine, std::complex<double> *dst, std::size_t n)
{
    constexpr double two_pi = 6.283185307179586476925287;
    double u1[block_len], u2[block_len], r[block_len], c[block_len], s[block_len];

    std::size_t done = 0;
    while (done < n)
    {
        std::size_t cnt = n - done;
        if (cnt > block_len)
            cnt = block_len;

        for (std::size_t i = 0; i < cnt; ++i)
            u1[i] = to_unit(engine()), u2[i] = to_unit(engine());

        // radius^2 ~ Exp(1), phase uniform: E|z|^2 = 1
        for (std::size_t i = 0; i < cnt; ++i)
            r[i] = std::sqrt(-std::log(u1[i]));
        for (std::size_t i = 0; i < cnt; ++i)
            c[i] = std::cos(two_pi * u2[i]);
        for (std::size_t i = 0; i < cnt; ++i)
            s[i] = std::sin(two_pi * u2[i]);
        for (std::size_t i = 0; i < cnt; ++i)
            dst[done + i] = std::complex<double>(r[i] * c[i], r[i] * s[i]);
        done += cnt;
    }
}

std::complex<double> complex_standard_normal(Rng &engine)
{
    double u1 = to_unit(engine());
    double u2 = to_unit(engine());
    double r = std::sqrt(-std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    return std::complex<double>(r * std::cos(a), r * std::sin(a));
}

} // namespace dscat
