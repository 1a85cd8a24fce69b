#ifndef WQED_DETAIL_PARALLEL_HPP
#define WQED_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace wqed::detail {

// Runs fn(i) for i in [0, n) over a small thread pool.  Callers must write
// results into preallocated, index-keyed slots so the schedule cannot leak
// into the output; with that discipline serial and parallel runs are
// bit-identical.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned want = threads ? threads : std::thread::hardware_concurrency();
    want = std::max(1u, std::min<unsigned>(want, static_cast<unsigned>(std::min<std::size_t>(n, 64))));
    if (want <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned w = 0; w < want; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace wqed::detail

#endif // WQED_DETAIL_PARALLEL_HPP
