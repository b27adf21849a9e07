#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace sedf {

/// Worker count: the explicit request if nonzero, else SEDF_THREADS, else the
/// hardware concurrency.
inline unsigned worker_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SEDF_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace sedf
