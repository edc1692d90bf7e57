#include <doctest.h>

#include <sstream>

#include "manet/experiment.hpp"

using namespace manet;
using config::ScenarioConfig;

namespace {

// Small scenario that still routes: 8 nodes in a 400 m square.
ScenarioConfig small_scenario() {
    ScenarioConfig cfg = config::parse_config(
        "nodes = 8\n"
        "arena = 400x400\n"
        "duration_s = 6\n"
        "seed = 11\n"
        "mobility.speed_max_mps = 10\n"
        "traffic.flows = 2\n");
    return cfg;
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("auto flows come from the seed, independent of protocol") {
    ScenarioConfig cfg = small_scenario();
    auto baseline_world = experiment::to_world_config(cfg);
    cfg.protocol = config::Protocol::DistanceVariant;
    auto variant_world = experiment::to_world_config(cfg);
    REQUIRE(baseline_world.flows.size() == 2);
    REQUIRE(variant_world.flows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(baseline_world.flows[i].src == variant_world.flows[i].src);
        CHECK(baseline_world.flows[i].dst == variant_world.flows[i].dst);
        CHECK(baseline_world.flows[i].src != baseline_world.flows[i].dst);
    }

    ScenarioConfig other = small_scenario();
    other.seed = 12;
    auto other_world = experiment::to_world_config(other);
    bool same = true;
    for (std::size_t i = 0; i < 2; ++i) {
        same = same && other_world.flows[i].src == baseline_world.flows[i].src &&
               other_world.flows[i].dst == baseline_world.flows[i].dst;
    }
    CHECK_FALSE(same); // different seed, different pairs
}

TEST_CASE("explicit flows override the auto draw") {
    ScenarioConfig cfg = small_scenario();
    cfg.explicit_flows = {{0, 7, std::nullopt, std::nullopt}, {2, 5, 2.0, 5.0}};
    auto world = experiment::to_world_config(cfg);
    REQUIRE(world.flows.size() == 2);
    CHECK(world.flows[0].src == 0);
    CHECK(world.flows[0].dst == 7);
    CHECK(world.flows[0].start == kMicrosPerSecond); // traffic.start_s default
    CHECK(world.flows[1].start == 2 * kMicrosPerSecond);
    CHECK(world.flows[1].stop == 5 * kMicrosPerSecond);
}

TEST_CASE("identical invocations produce byte-identical csv") {
    ScenarioConfig cfg = small_scenario();
    auto first = experiment::run_experiment(cfg);
    auto second = experiment::run_experiment(cfg);
    CHECK(first.csv == second.csv);
    CHECK(first.report.aggregate.packets_sent ==
          second.report.aggregate.packets_sent);

    // A different seed changes the run.
    cfg.seed = 12;
    auto third = experiment::run_experiment(cfg);
    CHECK(first.csv != third.csv);
}

TEST_CASE("run emits one row per transfer plus the aggregate") {
    ScenarioConfig cfg = small_scenario();
    auto result = experiment::run_experiment(cfg);
    REQUIRE(result.report.transfers.size() == 2);
    std::size_t rows = 0;
    for (char ch : result.csv) {
        if (ch == '\n') ++rows;
    }
    CHECK(rows == 1 + 2 + 1); // header, two transfers, aggregate
    std::uint64_t drop_sum = 0;
    for (std::uint64_t d : result.report.aggregate.drops_by_reason) drop_sum += d;
    CHECK(result.report.aggregate.packets_sent ==
          result.report.aggregate.packets_received + drop_sum);
}

TEST_CASE("the trace logs one line per dispatched event") {
    ScenarioConfig cfg = small_scenario();
    cfg.duration_s = 2;
    std::ostringstream trace;
    experiment::run_experiment(cfg, &trace);
    std::string text = trace.str();
    CHECK(text.find("hello_tick") != std::string::npos);
    CHECK(text.find("cbr_send") != std::string::npos);
    CHECK(text.find("mobility_step") != std::string::npos);
    // Tab-separated: time, kind, from, to, detail.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        CHECK(std::count(line.begin(), line.end(), '\t') == 4);
    }
}

TEST_CASE("compare pairs protocols on the same seeds") {
    ScenarioConfig cfg = small_scenario();
    auto result = experiment::compare(cfg, 2);
    CHECK(result.seeds == std::vector<std::uint64_t>{11, 12});
    REQUIRE(result.baseline_runs.size() == 2);
    REQUIRE(result.variant_runs.size() == 2);

    // Summary covers the four headline metrics and two extras.
    CHECK(result.summary_csv.find("cost,") != std::string::npos);
    CHECK(result.summary_csv.find("avg_delay_ms,") != std::string::npos);
    CHECK(result.summary_csv.find("packets_dropped,") != std::string::npos);
    CHECK(result.summary_csv.find("network_load_bps,") != std::string::npos);

    // Runs CSV is ordered by (protocol, seed, transfer).
    std::size_t b1 = result.runs_csv.find("baseline,11,");
    std::size_t b2 = result.runs_csv.find("baseline,12,");
    std::size_t v1 = result.runs_csv.find("distance_variant,11,");
    std::size_t v2 = result.runs_csv.find("distance_variant,12,");
    REQUIRE(b1 != std::string::npos);
    REQUIRE(v2 != std::string::npos);
    CHECK(b1 < b2);
    CHECK(b2 < v1);
    CHECK(v1 < v2);

    // Per-metric series: one curve per protocol, one point per transfer.
    const auto& cost_series = result.series.at("cost");
    CHECK(cost_series.at("baseline").size() == 2);
    CHECK(cost_series.at("distance_variant").size() == 2);
}

TEST_CASE("single-seed compare reports zero stddev") {
    ScenarioConfig cfg = small_scenario();
    auto result = experiment::compare(cfg, 1);
    std::istringstream lines(result.summary_csv);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream cols(line);
        std::string cell;
        while (std::getline(cols, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 6);
        CHECK(cells[2] == "0.000000"); // baseline stddev
        CHECK(cells[4] == "0.000000"); // variant stddev
    }
}

} // TEST_SUITE
