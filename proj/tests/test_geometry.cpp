#include <doctest.h>

#include <cmath>
#include <limits>

#include "manet/geometry.hpp"
#include "manet/rng.hpp"
#include "oracles.hpp"

using namespace manet;
using geometry::Position;

TEST_SUITE("geometry") {

TEST_CASE("distance examples") {
    CHECK(geometry::euclidean_distance(geometry::make_xy(0, 0),
                                       geometry::make_xy(3, 4)) == doctest::Approx(5.0));
    Position p{{2.5, -1.0, 7.0}};
    CHECK(geometry::euclidean_distance(p, p) == 0.0);
    CHECK(geometry::euclidean_distance(Position{{1, 2, 3}}, Position{{4, 6, 3}}) ==
          doctest::Approx(5.0));
}

TEST_CASE("dimension mismatch throws") {
    CHECK_THROWS_AS(geometry::euclidean_distance(Position{{1, 2}}, Position{{1, 2, 3}}),
                    geometry::DimensionMismatch);
}

TEST_CASE("distance properties against the naive oracle") {
    Rng rng(0xd157);
    for (int i = 0; i < 1000; ++i) {
        std::size_t dim = 1 + rng.below(4);
        auto draw = [&] {
            Position p;
            for (std::size_t d = 0; d < dim; ++d) {
                p.coords.push_back(rng.uniform(-1e4, 1e4));
            }
            return p;
        };
        Position p = draw(), q = draw(), r = draw();
        double pq = geometry::euclidean_distance(p, q);
        CHECK(pq >= 0.0);
        CHECK(geometry::euclidean_distance(q, p) == doctest::Approx(pq).epsilon(1e-12));
        CHECK(geometry::euclidean_distance(p, p) == 0.0);
        double pr = geometry::euclidean_distance(p, r);
        double qr = geometry::euclidean_distance(q, r);
        CHECK(pr <= pq + qr + 1e-9);
        double naive = oracle::naive_distance(p, q);
        if (naive > 0) {
            CHECK(std::abs(pq - naive) / naive <= 1e-9);
        } else {
            CHECK(pq == 0.0);
        }
    }
}

TEST_CASE("transfer cost examples") {
    geometry::CostWeights defaults;
    CHECK(geometry::transfer_cost(0, 0, 0, 0, geometry::CostWeights{0, 0, 0, 0, 0}) == 0.0);

    geometry::CostWeights node_only{1.0, 0.0, 0.0, 0.0, 0.0};
    CHECK(geometry::transfer_cost(2, 0, 0, 0, node_only) == doctest::Approx(3.0));

    // hops=3, 2048 bytes each way, 1 drop at the default weights.
    CHECK(geometry::transfer_cost(3, 2048, 2048, 1, defaults) ==
          doctest::Approx(96.144));
}

TEST_CASE("transfer cost is monotone and linear per argument") {
    geometry::CostWeights w;
    Rng rng(0xc057);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t hops = rng.below(20);
        std::uint64_t tx = rng.below(1 << 20);
        std::uint64_t rx = rng.below(1 << 20);
        std::uint64_t drops = rng.below(100);
        double base = geometry::transfer_cost(hops, tx, rx, drops, w);
        CHECK(geometry::transfer_cost(hops + 1, tx, rx, drops, w) > base);
        CHECK(geometry::transfer_cost(hops, tx + 512, rx, drops, w) > base);
        CHECK(geometry::transfer_cost(hops, tx, rx + 512, drops, w) > base);
        CHECK(geometry::transfer_cost(hops, tx, rx, drops + 1, w) > base);
        // Linearity in drops with everything else fixed.
        double d1 = geometry::transfer_cost(hops, tx, rx, drops + 1, w) - base;
        double d2 = geometry::transfer_cost(hops, tx, rx, drops + 2, w) -
                    geometry::transfer_cost(hops, tx, rx, drops + 1, w);
        CHECK(d1 == doctest::Approx(d2));
    }
}

TEST_CASE("millimeter conversion rounds half-up and saturates") {
    CHECK(geometry::cost_mm_from_meters(0.0) == 0);
    CHECK(geometry::cost_mm_from_meters(2.3) == 2300);
    CHECK(geometry::cost_mm_from_meters(0.0005) == 1);
    CHECK(geometry::cost_mm_from_meters(0.00049) == 0);
    CHECK(geometry::cost_mm_from_meters(5e6) ==
          std::numeric_limits<std::uint32_t>::max());
}

TEST_CASE("cost addition saturates at the wire ceiling") {
    constexpr CostMm kMax = std::numeric_limits<std::uint32_t>::max();
    CHECK(geometry::saturating_add_cost(100, 200) == 300);
    CHECK(geometry::saturating_add_cost(kMax - 1, 5) == kMax);
    CHECK(geometry::saturating_add_cost(kMax, kMax) == kMax);
}

} // TEST_SUITE
