// Copyright 2026 The toric-memory Authors
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

#ifndef TORIC_PARALLEL_H
#define TORIC_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace toric {

/// Worker count after applying the TORIC_WORKERS environment override. Values < 1 mean
/// "all hardware threads".
inline int resolve_workers(int requested) {
    if (const char *env = std::getenv("TORIC_WORKERS")) {
        requested = std::atoi(env);
    }
    if (requested < 1) {
        requested = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return requested;
}

/// Runs body(i) for i in [0, n) on up to `workers` threads. Tasks are claimed dynamically, so
/// callers must key results by index. The first exception thrown by any task is rethrown.
inline void parallel_for(size_t n, int workers, const std::function<void(size_t)> &body) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; i++) {
            body(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(n);
            }
        }
    };
    std::vector<std::thread> threads;
    size_t count = std::min<size_t>(static_cast<size_t>(workers), n);
    for (size_t t = 0; t < count; t++) {
        threads.emplace_back(worker);
    }
    for (auto &t : threads) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace toric

#endif
