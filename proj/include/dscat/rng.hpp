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

#ifndef DSCAT_RNG_HPP
#define DSCAT_RNG_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace dscat
{

// All randomness in the library flows through named substreams derived from a
// single master seed. Every unit of work (drop, trial block, pilot noise, ...)
// gets its own freshly seeded engine, so results do not depend on scheduling
// or thread count.

typedef std::mt19937_64 Rng;

// Substream labels. The numeric values are part of the reproducibility
// contract: changing them changes every seeded result.
namespace seed_salt
{
constexpr std::uint64_t drop = 0x01;        // one network drop
constexpr std::uint64_t geometry = 0x02;    // BS / user positions
constexpr std::uint64_t shadow = 0x03;      // shadow fading
constexpr std::uint64_t trial_block = 0x04; // Monte-Carlo trial blocks
constexpr std::uint64_t generic = 0x05;     // tests / ad-hoc draws
}

// SplitMix64 mixing step. Bijective on 64-bit words; used to turn
// (master, salt, index) triples into well-separated engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of substream `salt` with counter `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt, std::uint64_t index);

Rng make_rng(std::uint64_t master, std::uint64_t salt, std::uint64_t index);

// Uniform draw on the open interval (0,1). Uses the top 53 bits of the
// engine word, offset by half a ulp so 0 and 1 are never returned.
double uniform_unit(Rng &engine);

// One N(0,1) draw (Box-Muller, cosine branch).
double standard_normal(Rng &engine);

// Fills dst[0..n) with independent N(0,1) draws.
void fill_standard_normal(Rng &engine, double *dst, std::size_t n);

// Fills dst[0..n) with independent CN(0,1) draws, i.e. real and imaginary
// parts are independent N(0,1/2). Implemented in blocks so the transcendental
// transform vectorizes; the output sequence is fixed by the engine state
// alone.
void fill_complex_standard_normal(Rng &engine, std::complex<double> *dst, std::size_t n);

std::complex<double> complex_standard_normal(Rng &engine);

} // namespace dscat

#endif
