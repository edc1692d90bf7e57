#include "manet/geometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace manet::geometry {

double euclidean_distance(const Position& p, const Position& q) {
    if (p.coords.size() != q.coords.size()) {
        throw DimensionMismatch("euclidean_distance: dimension " +
                                std::to_string(p.coords.size()) + " vs " +
                                std::to_string(q.coords.size()));
    }
    double sum = std::transform_reduce(
        p.coords.begin(), p.coords.end(), q.coords.begin(), 0.0, std::plus<>{},
        [](double a, double b) {
            double d = a - b;
            return d * d;
        });
    return std::sqrt(sum);
}

CostMm cost_mm_from_meters(double meters) {
    if (meters <= 0.0) {
        return 0;
    }
    double mm = meters * 1000.0 + 0.5; // half-up
    constexpr double kCeiling = static_cast<double>(std::numeric_limits<std::uint32_t>::max());
    if (mm >= kCeiling) {
        return std::numeric_limits<std::uint32_t>::max();
    }
    return static_cast<CostMm>(mm);
}

CostMm saturating_add_cost(CostMm a, CostMm b) {
    constexpr CostMm kCeiling = std::numeric_limits<std::uint32_t>::max();
    CostMm sum = a + b;
    if (sum < a || sum > kCeiling) {
        return kCeiling;
    }
    return sum;
}

double transfer_cost(std::uint64_t hops_used, std::uint64_t bytes_tx,
                     std::uint64_t bytes_rx, std::uint64_t drops,
                     const CostWeights& w) {
    double joules = w.e_tx * static_cast<double>(bytes_tx) +
                    w.e_rx * static_cast<double>(bytes_rx);
    return w.w_node * static_cast<double>(hops_used + 1) +
           w.w_energy * joules + w.w_loss * static_cast<double>(drops);
}

} // namespace manet::geometry
