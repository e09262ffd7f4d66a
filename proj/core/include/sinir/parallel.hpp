#ifndef SINIR_PARALLEL_HPP
#define SINIR_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace sinir {

/// Width of the internal data-parallel pool. The SINIR_THREADS environment
/// variable caps it (read once, at first use); otherwise the hardware
/// concurrency is used.
int thread_width();

/// Run fn(begin, end) over a partition of [0, n) into contiguous chunks.
/// Each index lands in exactly one chunk, so any computation whose per-index
/// work is independent produces bit-identical results at every thread count.
void parallel_chunks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
    parallel_chunks(n, [&fn](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace sinir

#endif
