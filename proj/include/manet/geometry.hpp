#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "manet/types.hpp"

namespace manet::geometry {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Point in n-dimensional space, coordinates in meters. Arena runs use
// dimension 2; the distance routine works for any matching dimension.
struct Position {
    std::vector<double> coords;

    bool operator==(const Position&) const = default;
};

inline Position make_xy(double x, double y) { return Position{{x, y}}; }

// sqrt(sum_i (p_i - q_i)^2). Throws DimensionMismatch when the dimensions
// differ.
double euclidean_distance(const Position& p, const Position& q);

// Converts meters to the millimeter fixed-point cost unit, rounding half-up
// and saturating at the 32-bit wire ceiling.
CostMm cost_mm_from_meters(double meters);

// Cost addition saturating at the 32-bit wire ceiling, so accumulated path
// costs always fit the trailing wire word.
CostMm saturating_add_cost(CostMm a, CostMm b);

// Weights of the transfer-cost model. A transfer's cost charges the nodes it
// occupies, the radio energy it burns and the packets it loses.
struct CostWeights {
    double w_node = 10.0;       // cost-units per participating node
    double w_energy = 1000.0;   // cost-units per joule
    double w_loss = 50.0;       // cost-units per dropped packet
    double e_tx = 2e-6;         // joules per byte transmitted
    double e_rx = 1e-6;         // joules per byte received

    bool operator==(const CostWeights&) const = default;
};

// w_node*(hops_used+1) + w_energy*(e_tx*bytes_tx + e_rx*bytes_rx) + w_loss*drops
double transfer_cost(std::uint64_t hops_used, std::uint64_t bytes_tx,
                     std::uint64_t bytes_rx, std::uint64_t drops,
                     const CostWeights& w);

} // namespace manet::geometry
