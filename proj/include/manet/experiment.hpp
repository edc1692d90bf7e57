#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "manet/config.hpp"
#include "manet/metrics.hpp"
#include "manet/sim.hpp"

namespace manet::experiment {

// Materializes a scenario into a runnable world description. Auto traffic
// (no flow.N keys) draws endpoint pairs from a seed sub-stream, so the same
// seed produces the same flows for either protocol.
sim::WorldConfig to_world_config(const config::ScenarioConfig& cfg);

struct RunResult {
    metrics::MetricsReport report;
    std::string csv; // header, per-transfer rows, aggregate row
};

// One seeded run; deterministic per (config, seed).
RunResult run_experiment(const config::ScenarioConfig& cfg,
                         std::ostream* trace = nullptr);

struct CompareResult {
    std::vector<std::uint64_t> seeds;
    std::vector<metrics::MetricsReport> baseline_runs; // index parallel to seeds
    std::vector<metrics::MetricsReport> variant_runs;
    std::string summary_csv; // metric, means, stddevs, variant/baseline ratio
    std::string runs_csv;    // standard schema, ordered (protocol, seed, transfer)
    // metric name -> protocol name -> per-transfer mean across seeds
    std::map<std::string, std::map<std::string, std::vector<double>>> series;
};

// Runs baseline and variant over `seed_count` consecutive seeds starting at
// cfg.seed, pairing protocols on identical seeds so mobility and traffic
// match within each pair.
CompareResult compare(const config::ScenarioConfig& cfg, std::size_t seed_count);

} // namespace manet::experiment
