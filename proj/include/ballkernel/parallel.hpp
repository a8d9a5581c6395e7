#ifndef BALLKERNEL_PARALLEL_HPP
#define BALLKERNEL_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ballkernel
{

inline unsigned worker_count()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Splits [begin, end) into contiguous shards, runs fn(shard_begin, shard_end) -> T on worker
/// threads and folds the shard results left to right with combine. Results depend only on the
/// shard contents, so callers with per-path keyed streams get the same answer for any worker count
/// provided combine is associative (e.g. integer counters).
template < typename T, typename Fn, typename Combine >
T parallel_reduce(std::uint64_t begin, std::uint64_t end, T init, Fn fn, Combine combine)
{
    if (end <= begin)
        return init;
    const std::uint64_t n       = end - begin;
    const std::uint64_t workers = std::min< std::uint64_t >(worker_count(), n);
    if (workers <= 1)
        return combine(std::move(init), fn(begin, end));

    std::vector< T >                  partial(workers, init);
    std::vector< std::exception_ptr > errors(workers);
    {
        std::vector< std::jthread > pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w)
        {
            const std::uint64_t lo = begin + n * w / workers;
            const std::uint64_t hi = begin + n * (w + 1) / workers;
            pool.emplace_back([&, w, lo, hi] {
                try
                {
                    partial[w] = fn(lo, hi);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    T acc = std::move(init);
    for (auto& p : partial)
        acc = combine(std::move(acc), std::move(p));
    return acc;
}

} // namespace ballkernel

#endif // BALLKERNEL_PARALLEL_HPP
