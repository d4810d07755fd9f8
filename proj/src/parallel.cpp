#include "scoredecomp/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace scoredecomp {

int thread_budget() {
    if (const char* env = std::getenv("SCOREDECOMP_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(hw == 0 ? 1 : (hw > 8 ? 8 : hw));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int budget = thread_budget();
    if (budget <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const auto n_threads = static_cast<std::size_t>(budget) < count
                               ? static_cast<std::size_t>(budget)
                               : count;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace scoredecomp
