#include "manet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace manet::config {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(ConfigFault fault, const std::string& key, int line,
                       const std::string& message) {
    std::string what = message + " (key '" + key + "'";
    if (line > 0) {
        what += ", line " + std::to_string(line);
    }
    what += ")";
    throw ConfigError(fault, key, line, what);
}

double parse_double(std::string_view v, const std::string& key, int line) {
    std::string buf(v);
    char* end = nullptr;
    double out = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty() || std::isnan(out)) {
        fail(ConfigFault::TypeMismatch, key, line, "expected a number, got '" + buf + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view v, const std::string& key, int line) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        fail(ConfigFault::TypeMismatch, key, line,
             "expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return out;
}

bool parse_bool(std::string_view v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(ConfigFault::TypeMismatch, key, line,
         "expected true/false, got '" + std::string(v) + "'");
}

// `WxH`, e.g. 1000x1000.
void parse_arena(std::string_view v, const std::string& key, int line,
                 ScenarioConfig& cfg) {
    std::size_t x = v.find('x');
    if (x == std::string_view::npos) {
        fail(ConfigFault::TypeMismatch, key, line,
             "expected WIDTHxHEIGHT, got '" + std::string(v) + "'");
    }
    cfg.arena_w = parse_double(trim(v.substr(0, x)), key, line);
    cfg.arena_h = parse_double(trim(v.substr(x + 1)), key, line);
}

// `SRC->DST` with optional `@START:STOP` (seconds).
FlowSpec parse_flow(std::string_view v, const std::string& key, int line) {
    FlowSpec flow;
    std::string_view spec = v;
    std::size_t at = spec.find('@');
    if (at != std::string_view::npos) {
        std::string_view window = trim(spec.substr(at + 1));
        spec = trim(spec.substr(0, at));
        std::size_t colon = window.find(':');
        if (colon == std::string_view::npos) {
            fail(ConfigFault::TypeMismatch, key, line,
                 "expected @START:STOP after flow endpoints");
        }
        flow.start_s = parse_double(trim(window.substr(0, colon)), key, line);
        flow.stop_s = parse_double(trim(window.substr(colon + 1)), key, line);
    }
    std::size_t arrow = spec.find("->");
    if (arrow == std::string_view::npos) {
        fail(ConfigFault::TypeMismatch, key, line,
             "expected SRC->DST, got '" + std::string(v) + "'");
    }
    flow.src = static_cast<Address>(parse_u64(trim(spec.substr(0, arrow)), key, line));
    flow.dst = static_cast<Address>(parse_u64(trim(spec.substr(arrow + 2)), key, line));
    return flow;
}

void apply_key(ScenarioConfig& cfg, std::map<int, FlowSpec>& flows,
               const std::string& key, std::string_view value, int line) {
    if (key == "nodes") {
        cfg.nodes = static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "arena") {
        parse_arena(value, key, line, cfg);
    } else if (key == "protocol") {
        if (value == "baseline") {
            cfg.protocol = Protocol::Baseline;
        } else if (value == "distance_variant") {
            cfg.protocol = Protocol::DistanceVariant;
        } else {
            fail(ConfigFault::TypeMismatch, key, line,
                 "expected baseline or distance_variant, got '" + std::string(value) + "'");
        }
    } else if (key == "seed") {
        cfg.seed = parse_u64(value, key, line);
    } else if (key == "duration_s") {
        cfg.duration_s = parse_double(value, key, line);
    } else if (key == "radio.range_m") {
        cfg.radio_range_m = parse_double(value, key, line);
    } else if (key == "radio.base_latency_us") {
        cfg.radio_base_latency_us = static_cast<std::int64_t>(parse_u64(value, key, line));
    } else if (key == "radio.jitter_us") {
        cfg.radio_jitter_us = static_cast<std::int64_t>(parse_u64(value, key, line));
    } else if (key == "radio.loss_prob") {
        cfg.radio_loss_prob = parse_double(value, key, line);
    } else if (key == "mobility.model") {
        if (value == "random_waypoint") {
            cfg.mobility_random_waypoint = true;
        } else if (value == "static") {
            cfg.mobility_random_waypoint = false;
        } else {
            fail(ConfigFault::TypeMismatch, key, line,
                 "expected random_waypoint or static, got '" + std::string(value) + "'");
        }
    } else if (key == "mobility.speed_min_mps") {
        cfg.mobility_speed_min_mps = parse_double(value, key, line);
    } else if (key == "mobility.speed_max_mps") {
        cfg.mobility_speed_max_mps = parse_double(value, key, line);
    } else if (key == "mobility.pause_s") {
        cfg.mobility_pause_s = parse_double(value, key, line);
    } else if (key == "mobility.step_s") {
        cfg.mobility_step_s = parse_double(value, key, line);
    } else if (key == "routing.hello_interval_s") {
        cfg.routing_hello_interval_s = parse_double(value, key, line);
    } else if (key == "routing.allowed_hello_loss") {
        cfg.routing_allowed_hello_loss =
            static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "routing.route_lifetime_s") {
        cfg.routing_route_lifetime_s = parse_double(value, key, line);
    } else if (key == "routing.discovery_wait_s") {
        cfg.routing_discovery_wait_s = parse_double(value, key, line);
    } else if (key == "routing.max_retries") {
        cfg.routing_max_retries = static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "routing.ttl_hops") {
        cfg.routing_ttl_hops = static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "routing.queue_capacity") {
        cfg.routing_queue_capacity =
            static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "routing.lambda_hop_mm") {
        cfg.routing_lambda_hop_mm = parse_u64(value, key, line);
    } else if (key == "routing.intermediate_replies") {
        cfg.routing_intermediate_replies = parse_bool(value, key, line);
    } else if (key == "cost.w_node") {
        cfg.cost_weights.w_node = parse_double(value, key, line);
    } else if (key == "cost.w_energy") {
        cfg.cost_weights.w_energy = parse_double(value, key, line);
    } else if (key == "cost.w_loss") {
        cfg.cost_weights.w_loss = parse_double(value, key, line);
    } else if (key == "cost.e_tx_j_per_byte") {
        cfg.cost_weights.e_tx = parse_double(value, key, line);
    } else if (key == "cost.e_rx_j_per_byte") {
        cfg.cost_weights.e_rx = parse_double(value, key, line);
    } else if (key == "traffic.flows") {
        cfg.traffic_flows = static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "traffic.packet_size_b") {
        cfg.traffic_packet_size_b = static_cast<std::uint32_t>(parse_u64(value, key, line));
    } else if (key == "traffic.interval_s") {
        cfg.traffic_interval_s = parse_double(value, key, line);
    } else if (key == "traffic.start_s") {
        cfg.traffic_start_s = parse_double(value, key, line);
    } else if (key.starts_with("flow.")) {
        std::string_view index_part(key);
        index_part.remove_prefix(5);
        std::uint64_t index = parse_u64(index_part, key, line);
        if (index == 0) {
            fail(ConfigFault::ConstraintViolation, key, line, "flow indices start at 1");
        }
        flows[static_cast<int>(index)] = parse_flow(value, key, line);
    } else {
        fail(ConfigFault::UnknownKey, key, line, "unknown key");
    }
}

void parse_into(ScenarioConfig& cfg, std::map<int, FlowSpec>& flows,
                std::string_view text, int first_line) {
    int line_no = first_line;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            std::size_t eq = line.find('=');
            if (eq == std::string_view::npos) {
                fail(ConfigFault::TypeMismatch, std::string(line), line_no,
                     "expected key = value");
            }
            std::string key(trim(line.substr(0, eq)));
            std::string_view value = trim(line.substr(eq + 1));
            apply_key(cfg, flows, key, value, line_no);
        }
        ++line_no;
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::map<int, FlowSpec> flows;
    parse_into(cfg, flows, text, 1);
    for (const auto& [index, flow] : flows) {
        cfg.explicit_flows.push_back(flow);
    }
    validate(cfg);
    return cfg;
}

void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& overrides) {
    std::map<int, FlowSpec> flows;
    for (std::size_t i = 0; i < cfg.explicit_flows.size(); ++i) {
        flows[static_cast<int>(i) + 1] = cfg.explicit_flows[i];
    }
    for (const std::string& assignment : overrides) {
        parse_into(cfg, flows, assignment, 0);
    }
    cfg.explicit_flows.clear();
    for (const auto& [index, flow] : flows) {
        cfg.explicit_flows.push_back(flow);
    }
    validate(cfg);
}

void validate(const ScenarioConfig& cfg) {
    auto violated = [](const std::string& key, const std::string& message) {
        fail(ConfigFault::ConstraintViolation, key, 0, message);
    };
    if (cfg.nodes < 2) violated("nodes", "need at least 2 nodes");
    if (cfg.arena_w <= 0 || cfg.arena_h <= 0) violated("arena", "arena sides must be > 0");
    if (cfg.duration_s <= 0) violated("duration_s", "duration must be > 0");
    if (cfg.radio_range_m <= 0) violated("radio.range_m", "radio range must be > 0");
    if (cfg.radio_loss_prob < 0 || cfg.radio_loss_prob > 1) {
        violated("radio.loss_prob", "loss probability must be in [0, 1]");
    }
    if (cfg.mobility_speed_min_mps < 0 ||
        cfg.mobility_speed_max_mps < cfg.mobility_speed_min_mps) {
        violated("mobility.speed_max_mps", "need 0 <= speed_min <= speed_max");
    }
    if (cfg.mobility_pause_s < 0) violated("mobility.pause_s", "pause must be >= 0");
    if (cfg.mobility_step_s <= 0) violated("mobility.step_s", "step must be > 0");
    if (cfg.routing_hello_interval_s <= 0) {
        violated("routing.hello_interval_s", "hello interval must be > 0");
    }
    if (cfg.routing_route_lifetime_s <= 0) {
        violated("routing.route_lifetime_s", "route lifetime must be > 0");
    }
    if (cfg.routing_discovery_wait_s <= 0) {
        violated("routing.discovery_wait_s", "discovery wait must be > 0");
    }
    if (cfg.routing_queue_capacity == 0) {
        violated("routing.queue_capacity", "queue capacity must be >= 1");
    }
    if (cfg.routing_ttl_hops == 0) violated("routing.ttl_hops", "ttl must be >= 1");
    if (cfg.cost_weights.w_node < 0 || cfg.cost_weights.w_energy < 0 ||
        cfg.cost_weights.w_loss < 0 || cfg.cost_weights.e_tx < 0 ||
        cfg.cost_weights.e_rx < 0) {
        violated("cost.w_node", "cost weights must be >= 0");
    }
    if (cfg.traffic_interval_s <= 0) {
        violated("traffic.interval_s", "packet interval must be > 0");
    }
    if (cfg.traffic_packet_size_b == 0) {
        violated("traffic.packet_size_b", "packet size must be >= 1 byte");
    }
    if (cfg.traffic_start_s < 0) violated("traffic.start_s", "start must be >= 0");
    if (cfg.explicit_flows.empty() && cfg.traffic_flows == 0) {
        violated("traffic.flows", "need at least one flow");
    }
    for (std::size_t i = 0; i < cfg.explicit_flows.size(); ++i) {
        const FlowSpec& flow = cfg.explicit_flows[i];
        std::string key = "flow." + std::to_string(i + 1);
        if (flow.src >= cfg.nodes || flow.dst >= cfg.nodes) {
            violated(key, "flow endpoints must be valid node indices");
        }
        if (flow.src == flow.dst) violated(key, "flow src and dst must differ");
        double start = flow.start_s.value_or(cfg.traffic_start_s);
        double stop = flow.stop_s.value_or(cfg.duration_s);
        if (start >= stop) violated(key, "flow start must precede stop");
    }
}

std::string render_config(const ScenarioConfig& cfg) {
    std::string out;
    auto kv = [&](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("nodes", std::to_string(cfg.nodes));
    kv("arena", format_double(cfg.arena_w) + "x" + format_double(cfg.arena_h));
    kv("protocol", protocol_name(cfg.protocol));
    kv("seed", std::to_string(cfg.seed));
    kv("duration_s", format_double(cfg.duration_s));
    kv("radio.range_m", format_double(cfg.radio_range_m));
    kv("radio.base_latency_us", std::to_string(cfg.radio_base_latency_us));
    kv("radio.jitter_us", std::to_string(cfg.radio_jitter_us));
    kv("radio.loss_prob", format_double(cfg.radio_loss_prob));
    kv("mobility.model", cfg.mobility_random_waypoint ? "random_waypoint" : "static");
    kv("mobility.speed_min_mps", format_double(cfg.mobility_speed_min_mps));
    kv("mobility.speed_max_mps", format_double(cfg.mobility_speed_max_mps));
    kv("mobility.pause_s", format_double(cfg.mobility_pause_s));
    kv("mobility.step_s", format_double(cfg.mobility_step_s));
    kv("routing.hello_interval_s", format_double(cfg.routing_hello_interval_s));
    kv("routing.allowed_hello_loss", std::to_string(cfg.routing_allowed_hello_loss));
    kv("routing.route_lifetime_s", format_double(cfg.routing_route_lifetime_s));
    kv("routing.discovery_wait_s", format_double(cfg.routing_discovery_wait_s));
    kv("routing.max_retries", std::to_string(cfg.routing_max_retries));
    kv("routing.ttl_hops", std::to_string(cfg.routing_ttl_hops));
    kv("routing.queue_capacity", std::to_string(cfg.routing_queue_capacity));
    kv("routing.lambda_hop_mm", std::to_string(cfg.routing_lambda_hop_mm));
    kv("routing.intermediate_replies",
       cfg.routing_intermediate_replies ? "true" : "false");
    kv("cost.w_node", format_double(cfg.cost_weights.w_node));
    kv("cost.w_energy", format_double(cfg.cost_weights.w_energy));
    kv("cost.w_loss", format_double(cfg.cost_weights.w_loss));
    kv("cost.e_tx_j_per_byte", format_double(cfg.cost_weights.e_tx));
    kv("cost.e_rx_j_per_byte", format_double(cfg.cost_weights.e_rx));
    kv("traffic.flows", std::to_string(cfg.traffic_flows));
    kv("traffic.packet_size_b", std::to_string(cfg.traffic_packet_size_b));
    kv("traffic.interval_s", format_double(cfg.traffic_interval_s));
    kv("traffic.start_s", format_double(cfg.traffic_start_s));
    for (std::size_t i = 0; i < cfg.explicit_flows.size(); ++i) {
        const FlowSpec& flow = cfg.explicit_flows[i];
        std::string value =
            std::to_string(flow.src) + "->" + std::to_string(flow.dst);
        if (flow.start_s || flow.stop_s) {
            value += "@" + format_double(flow.start_s.value_or(cfg.traffic_start_s)) +
                     ":" + format_double(flow.stop_s.value_or(cfg.duration_s));
        }
        kv(("flow." + std::to_string(i + 1)).c_str(), value);
    }
    return out;
}

const char* protocol_name(Protocol p) {
    return p == Protocol::Baseline ? "baseline" : "distance_variant";
}

} // namespace manet::config
