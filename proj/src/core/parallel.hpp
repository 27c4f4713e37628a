#ifndef GTM_CORE_PARALLEL_HPP
#define GTM_CORE_PARALLEL_HPP

// Chunked parallel loop over an index range.  The working precision is
// process-global, so callers must set it *before* fanning out; worker
// bodies may read it but never change it.  Exceptions from workers are
// captured and rethrown on the calling thread (first one wins).

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace gtm {

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    unsigned workers = hw < 8 ? hw : 8;
    if (static_cast<std::size_t>(workers) > count) workers = static_cast<unsigned>(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err = nullptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace gtm

#endif // GTM_CORE_PARALLEL_HPP
