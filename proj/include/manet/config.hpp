#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/types.hpp"

namespace manet::config {

enum class ConfigFault { UnknownKey, TypeMismatch, ConstraintViolation };

struct ConfigError : std::runtime_error {
    ConfigError(ConfigFault f, std::string k, int l, const std::string& what)
        : std::runtime_error(what), fault(f), key(std::move(k)), line(l) {}
    ConfigFault fault;
    std::string key;
    int line; // 0 when the failing key did not come from a file line
};

enum class Protocol { Baseline, DistanceVariant };

struct FlowSpec {
    Address src = 0;
    Address dst = 0;
    std::optional<double> start_s; // defaults to traffic.start_s
    std::optional<double> stop_s;  // defaults to run duration

    bool operator==(const FlowSpec&) const = default;
};

// Full scenario description. Every field has a documented default; a config
// file only names what it changes. Defaults follow the 40-node,
// 1000 m x 1000 m CBR arena.
struct ScenarioConfig {
    std::uint32_t nodes = 40;
    double arena_w = 1000.0;
    double arena_h = 1000.0;
    Protocol protocol = Protocol::Baseline;
    std::uint64_t seed = 1;
    double duration_s = 100.0;

    // radio.*
    double radio_range_m = 250.0;
    std::int64_t radio_base_latency_us = 100;
    std::int64_t radio_jitter_us = 2000;
    double radio_loss_prob = 0.0;

    // mobility.*
    bool mobility_random_waypoint = true;
    double mobility_speed_min_mps = 0.0;
    double mobility_speed_max_mps = 20.0;
    double mobility_pause_s = 0.0;
    double mobility_step_s = 0.1;

    // routing.*
    double routing_hello_interval_s = 1.0;
    std::uint32_t routing_allowed_hello_loss = 2;
    double routing_route_lifetime_s = 3.0;
    double routing_discovery_wait_s = 1.0;
    std::uint32_t routing_max_retries = 2;
    std::uint32_t routing_ttl_hops = 35;
    std::uint32_t routing_queue_capacity = 64;
    std::uint64_t routing_lambda_hop_mm = 0;
    bool routing_intermediate_replies = true;

    // cost.*
    geometry::CostWeights cost_weights;

    // traffic.*
    std::uint32_t traffic_flows = 3; // auto-drawn pairs when no flow.N given
    std::uint32_t traffic_packet_size_b = 512;
    double traffic_interval_s = 0.25;
    double traffic_start_s = 1.0;
    std::vector<FlowSpec> explicit_flows;

    bool operator==(const ScenarioConfig&) const = default;
};

// Parses the flat `key = value` format: one assignment per line, `#` starts
// a comment, dotted keys select sections. Unknown keys, malformed values and
// constraint violations are hard errors carrying the key and line.
ScenarioConfig parse_config(std::string_view text);

// Applies `key=value` overrides (the CLI --set flag) on top of a parsed
// config, then re-validates.
void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& overrides);

// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& cfg);

void validate(const ScenarioConfig& cfg);

const char* protocol_name(Protocol p);

} // namespace manet::config
