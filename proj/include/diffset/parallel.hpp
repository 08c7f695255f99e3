#pragma once

// Minimal chunked parallelism. Work over [0,total) is split into contiguous
// chunks processed on plain threads; callers keep one result slot per chunk
// and merge in chunk order, so outputs never depend on the thread count.

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

namespace diffset {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

inline unsigned chunk_count(std::size_t total, unsigned threads) {
    if (total == 0) return 0;
    std::size_t t = threads == 0 ? 1 : threads;
    if (t > total) t = total;
    return static_cast<unsigned>(t);
}

// fn(chunk_index, begin, end); chunk_index < chunk_count(total, threads).
// The first exception (in chunk order) is rethrown after all chunks join.
template <class Fn>
void for_chunks(std::size_t total, unsigned threads, Fn&& fn) {
    unsigned t = chunk_count(total, threads);
    if (t == 0) return;
    if (t == 1) {
        fn(0u, std::size_t{0}, total);
        return;
    }
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::size_t base = total / t, rem = total % t, begin = 0;
    for (unsigned i = 0; i < t; ++i) {
        std::size_t end = begin + base + (i < rem ? 1 : 0);
        pool.emplace_back([&fn, &errors, i, begin, end] {
            try {
                fn(i, begin, end);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace diffset
