#pragma once

// FFTW plan creation is not thread-safe; every planner call in this library
// grabs this mutex. Plan execution through the new-array interface is safe.

#include <mutex>

namespace wgnls::detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace wgnls::detail
