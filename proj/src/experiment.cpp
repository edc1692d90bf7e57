#include "manet/experiment.hpp"

#include <cmath>
#include <cstdio>

#include "manet/rng.hpp"

namespace manet::experiment {

namespace {

SimTime to_us(double seconds) {
    return static_cast<SimTime>(std::llround(seconds * 1e6));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<sim::CbrFlow> resolve_flows(const config::ScenarioConfig& cfg) {
    std::vector<sim::CbrFlow> flows;
    auto base_flow = [&]() {
        sim::CbrFlow f;
        f.packet_size_b = cfg.traffic_packet_size_b;
        f.interval = to_us(cfg.traffic_interval_s);
        f.start = to_us(cfg.traffic_start_s);
        f.stop = to_us(cfg.duration_s);
        return f;
    };
    if (!cfg.explicit_flows.empty()) {
        for (const config::FlowSpec& spec : cfg.explicit_flows) {
            sim::CbrFlow f = base_flow();
            f.src = spec.src;
            f.dst = spec.dst;
            if (spec.start_s) f.start = to_us(*spec.start_s);
            if (spec.stop_s) f.stop = to_us(*spec.stop_s);
            flows.push_back(f);
        }
        return flows;
    }
    Rng rng(derive_stream_seed(cfg.seed, 2));
    for (std::uint32_t i = 0; i < cfg.traffic_flows; ++i) {
        sim::CbrFlow f = base_flow();
        f.src = static_cast<Address>(rng.below(cfg.nodes));
        do {
            f.dst = static_cast<Address>(rng.below(cfg.nodes));
        } while (f.dst == f.src);
        flows.push_back(f);
    }
    return flows;
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

} // namespace

sim::WorldConfig to_world_config(const config::ScenarioConfig& cfg) {
    sim::WorldConfig wc;
    wc.node_count = cfg.nodes;
    wc.arena_w = cfg.arena_w;
    wc.arena_h = cfg.arena_h;
    wc.radio.range_m = cfg.radio_range_m;
    wc.radio.base_latency_us = cfg.radio_base_latency_us;
    wc.radio.jitter_us = cfg.radio_jitter_us;
    wc.radio.loss_prob = cfg.radio_loss_prob;
    wc.mobility.kind = cfg.mobility_random_waypoint
                           ? sim::MobilityModel::Kind::RandomWaypoint
                           : sim::MobilityModel::Kind::Static;
    wc.mobility.speed_min_mps = cfg.mobility_speed_min_mps;
    wc.mobility.speed_max_mps = cfg.mobility_speed_max_mps;
    wc.mobility.pause_s = cfg.mobility_pause_s;
    wc.mobility.step_s = cfg.mobility_step_s;
    wc.flows = resolve_flows(cfg);
    wc.params.policy.kind = cfg.protocol == config::Protocol::DistanceVariant
                                ? routing::Policy::Kind::DistanceVariant
                                : routing::Policy::Kind::Baseline;
    wc.params.policy.lambda_hop_mm = cfg.routing_lambda_hop_mm;
    wc.params.hello_interval = to_us(cfg.routing_hello_interval_s);
    wc.params.allowed_hello_loss = cfg.routing_allowed_hello_loss;
    wc.params.route_lifetime = to_us(cfg.routing_route_lifetime_s);
    wc.params.discovery_wait = to_us(cfg.routing_discovery_wait_s);
    wc.params.max_retries = cfg.routing_max_retries;
    wc.params.ttl_hops = cfg.routing_ttl_hops;
    wc.params.queue_capacity = cfg.routing_queue_capacity;
    wc.params.intermediate_replies = cfg.routing_intermediate_replies;
    wc.cost_weights = cfg.cost_weights;
    wc.duration = to_us(cfg.duration_s);
    wc.seed = cfg.seed;
    return wc;
}

RunResult run_experiment(const config::ScenarioConfig& cfg, std::ostream* trace) {
    sim::World world(to_world_config(cfg));
    if (trace) {
        world.set_trace(trace);
    }
    world.run();
    RunResult result;
    result.report = world.finalize();
    result.csv = metrics::csv_header();
    metrics::append_csv_rows(result.csv, config::protocol_name(cfg.protocol), cfg.seed,
                             result.report);
    return result;
}

CompareResult compare(const config::ScenarioConfig& cfg, std::size_t seed_count) {
    CompareResult result;
    for (std::size_t i = 0; i < seed_count; ++i) {
        result.seeds.push_back(cfg.seed + i);
    }

    result.runs_csv = metrics::csv_header();
    for (config::Protocol protocol :
         {config::Protocol::Baseline, config::Protocol::DistanceVariant}) {
        for (std::uint64_t seed : result.seeds) {
            config::ScenarioConfig run_cfg = cfg;
            run_cfg.protocol = protocol;
            run_cfg.seed = seed;
            RunResult run = run_experiment(run_cfg);
            metrics::append_csv_rows(result.runs_csv, config::protocol_name(protocol),
                                     seed, run.report);
            if (protocol == config::Protocol::Baseline) {
                result.baseline_runs.push_back(std::move(run.report));
            } else {
                result.variant_runs.push_back(std::move(run.report));
            }
        }
    }

    struct MetricDef {
        const char* name;
        double (*get)(const metrics::TransferReport&);
    };
    const MetricDef defs[] = {
        {"cost", [](const metrics::TransferReport& t) { return t.cost; }},
        {"avg_delay_ms", [](const metrics::TransferReport& t) { return t.avg_delay_ms; }},
        {"packets_dropped",
         [](const metrics::TransferReport& t) {
             return static_cast<double>(t.packets_dropped);
         }},
        {"network_load_bps",
         [](const metrics::TransferReport& t) { return t.network_load_bps; }},
        {"delivery_ratio",
         [](const metrics::TransferReport& t) { return t.delivery_ratio; }},
        {"control_overhead",
         [](const metrics::TransferReport& t) {
             return static_cast<double>(t.control_overhead);
         }},
    };

    result.summary_csv =
        "metric,baseline_mean,baseline_stddev,variant_mean,variant_stddev,"
        "variant_over_baseline\n";
    for (const MetricDef& def : defs) {
        std::vector<double> baseline, variant;
        for (const auto& report : result.baseline_runs) {
            baseline.push_back(def.get(report.aggregate));
        }
        for (const auto& report : result.variant_runs) {
            variant.push_back(def.get(report.aggregate));
        }
        double bm = mean_of(baseline);
        double vm = mean_of(variant);
        double ratio = bm != 0.0 ? vm / bm : (vm == 0.0 ? 1.0 : 0.0);
        result.summary_csv += std::string(def.name) + "," + format_double(bm) + "," +
                              format_double(stddev_of(baseline)) + "," +
                              format_double(vm) + "," +
                              format_double(stddev_of(variant)) + "," +
                              format_double(ratio) + "\n";

        // Per-transfer series across seeds for the figure-style curves.
        std::size_t transfers = result.baseline_runs.empty()
                                    ? 0
                                    : result.baseline_runs.front().transfers.size();
        for (const char* proto : {"baseline", "distance_variant"}) {
            const auto& runs = std::string(proto) == "baseline" ? result.baseline_runs
                                                                : result.variant_runs;
            std::vector<double> means;
            for (std::size_t t = 0; t < transfers; ++t) {
                std::vector<double> values;
                for (const auto& report : runs) {
                    if (t < report.transfers.size()) {
                        values.push_back(def.get(report.transfers[t]));
                    }
                }
                means.push_back(mean_of(values));
            }
            result.series[def.name][proto] = std::move(means);
        }
    }
    return result;
}

} // namespace manet::experiment
