#include "mgraphon/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mgraphon {

namespace {
std::atomic<int> g_max_threads{0};

int hardware_default() {
    const unsigned hc = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp<unsigned>(hc == 0 ? 1 : hc, 1, 8));
}
}  // namespace

int max_threads() {
    const int v = g_max_threads.load();
    return v > 0 ? v : hardware_default();
}

void set_max_threads(int threads) { g_max_threads.store(threads); }

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body,
                  int threads) {
    if (count <= 0) return;
    int t = threads > 0 ? threads : max_threads();
    t = static_cast<int>(std::min<std::int64_t>(t, count));
    if (t <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t) - 1);
    for (int k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace mgraphon
