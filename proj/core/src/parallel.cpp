#include "sinir/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sinir {
namespace {

thread_local bool inside_parallel_region = false;

int resolve_width() {
    int width = static_cast<int>(std::thread::hardware_concurrency());
    if (width < 1) width = 1;
    if (const char* env = std::getenv("SINIR_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1) width = static_cast<int>(parsed);
    }
    return width;
}

}  // namespace

int thread_width() {
    static const int width = resolve_width();
    return width;
}

void parallel_chunks(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    const int width = thread_width();
    // Nested regions run inline; the outer region already owns the workers.
    if (width == 1 || inside_parallel_region || n == 1) {
        fn(0, n);
        return;
    }

    const std::int64_t chunk = (n + width - 1) / width;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run_chunk = [&](std::int64_t begin) {
        inside_parallel_region = true;
        try {
            fn(begin, std::min(begin + chunk, n));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
        inside_parallel_region = false;
    };

    std::vector<std::thread> helpers;
    helpers.reserve(width - 1);
    for (std::int64_t begin = chunk; begin < n; begin += chunk)
        helpers.emplace_back(run_chunk, begin);
    run_chunk(0);
    for (auto& t : helpers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace sinir
