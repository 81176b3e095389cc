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

#include "dscat/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dscat
{

std::size_t resolve_threads(std::size_t requested)
{
    if (requested > 0)
        return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_blocks(std::size_t n, std::size_t block, std::size_t threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)> &fn)
{
    if (n == 0)
        return;
    if (block == 0)
        throw std::invalid_argument("parallel_blocks: block size must be positive");

    std::size_t n_blocks = (n + block - 1) / block;
    std::size_t n_workers = resolve_threads(threads);
    if (n_workers > n_blocks)
        n_workers = n_blocks;

    if (n_workers <= 1)
    {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b, b * block, std::min(n, (b + 1) * block));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;)
        {
            std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks)
                return;
            try
            {
                fn(b, b * block, std::min(n, (b + 1) * block));
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();

    if (first_error)
        std::rethrow_exception(first_error);
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)> &fn)
{
    parallel_blocks(n, 1, threads, [&](std::size_t, std::size_t begin, std::size_t) { fn(begin); });
}

} // namespace dscat
