// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakval/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace weakval {

unsigned thread_budget() {
    unsigned budget = 0;
    if (const char* env = std::getenv("WEAKVAL_THREADS")) {
        try {
            budget = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            budget = 0;
        }
    }
    if (budget == 0) {
        budget = std::thread::hardware_concurrency();
    }
    return budget == 0 ? 1 : budget;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned budget = thread_budget();
    if (n <= 1 || budget <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(budget, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace weakval
