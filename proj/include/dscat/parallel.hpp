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

#ifndef DSCAT_PARALLEL_HPP
#define DSCAT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace dscat
{

// Fixed block size used for Monte-Carlo trial partitioning. Part of the
// reproducibility contract: per-block accumulators are merged in ascending
// block order regardless of which thread produced them, so results are
// bitwise identical for any thread count.
constexpr std::size_t mc_block_trials = 256;

// 0 -> std::thread::hardware_concurrency() (at least 1), otherwise `requested`.
std::size_t resolve_threads(std::size_t requested);

// Runs fn(block_index, begin, end) for the partition of [0, n) into blocks of
// `block` items. Blocks are claimed from a shared counter; each invocation
// sees a contiguous range and must write only to state owned by its
// block_index. Runs inline when a single worker suffices. The first exception
// thrown by any block is rethrown after all workers have joined.
void parallel_blocks(std::size_t n, std::size_t block, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)> &fn);

// Convenience wrapper with one item per block: fn(i) for i in [0, n).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)> &fn);

} // namespace dscat

#endif
