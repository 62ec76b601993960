#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace divchain {

// Worker count from DIVCHAIN_THREADS, else 1.
inline int default_threads()
{
    if (const char* env = std::getenv("DIVCHAIN_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Splits [0, total) into fixed chunks of chunk_size and runs f(chunk_index, begin, end) on up to
// `threads` workers. The chunk layout depends only on total and chunk_size, so callers that reduce
// per-chunk results in chunk order get output independent of the thread count.
template <class F>
void parallel_chunks(std::uint64_t total, std::uint64_t chunk_size, int threads, F&& f)
{
    const std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                f(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = chunks;
            }
        }
    };
    const int n = static_cast<int>(std::clamp<std::uint64_t>(std::uint64_t(std::max(threads, 1)), 1, std::max<std::uint64_t>(chunks, 1)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace divchain
