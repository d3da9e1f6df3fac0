#include "trifree/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trifree {

namespace {
std::atomic<int> g_requested{0};
}

int thread_count()
{
    if (const char* env = std::getenv("TRIFREE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    int r = g_requested.load();
    if (r > 0)
        return r;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void set_thread_count(int n)
{
    g_requested.store(n);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    int workers = std::min<std::size_t>(std::size_t(thread_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace trifree
