#pragma once

#include <chrono>
#include <cstdint>

namespace edgebatch {

// All engine time is simulated; there is no wall clock anywhere in the core.
using Millis = std::chrono::milliseconds;

constexpr double to_seconds(Millis t) noexcept {
    return static_cast<double>(t.count()) / 1000.0;
}

}  // namespace edgebatch
