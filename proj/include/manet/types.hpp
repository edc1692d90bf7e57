#pragma once

#include <cstdint>

namespace manet {

// Node address. One simulated node per address; runs use the node index.
using Address = std::uint32_t;

// Simulation time in integer microseconds since run start. Integer time is
// what makes event ordering reproducible across platforms.
using SimTime = std::int64_t;

// Accumulated Euclidean path cost in millimeters. Wire fields are 32-bit;
// arithmetic saturates there (see saturating_add_cost).
using CostMm = std::uint64_t;

inline constexpr SimTime kMicrosPerSecond = 1'000'000;

inline constexpr SimTime kMicrosPerMilli = 1'000;

} // namespace manet
