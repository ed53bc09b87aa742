// SPDX-License-Identifier: Apache-2.0
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
// ------------------------------------------------------------------------

#ifndef MUSE_PARALLEL_HPP
#define MUSE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace muse
{
    /// Worker count: MUSE_THREADS when set to a positive integer, else hardware concurrency.
    inline std::size_t thread_budget()
    {
        if (const char *env = std::getenv("MUSE_THREADS"))
        {
            try
            {
                const long n = std::stol(env);
                if (n > 0)
                    return static_cast<std::size_t>(n);
            }
            catch (const std::exception &)
            {
            }
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    /// Runs fn(i) for every i in [0, count). Items are independent; results must be
    /// written to per-item storage so the outcome does not depend on scheduling.
    template <typename Fn>
    void parallel_for(std::size_t count, Fn &&fn)
    {
        const std::size_t workers = std::min(thread_budget(), count);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&]
                {
                    for (std::size_t i = next++; i < count; i = next++)
                    {
                        try
                        {
                            fn(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(failure_mutex);
                            if (!failure)
                                failure = std::current_exception();
                        }
                    }
                });
        }
        if (failure)
            std::rethrow_exception(failure);
    }

} // namespace muse

#endif
