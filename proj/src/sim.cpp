#include "manet/sim.hpp"

#include <algorithm>
#include <cmath>

namespace manet::sim {

namespace {

metrics::ControlKind control_kind_of(const wire::Message& msg) {
    switch (msg.index()) {
        case 0: return metrics::ControlKind::Rreq;
        case 1: return metrics::ControlKind::Rrep;
        case 2: return metrics::ControlKind::Rerr;
        default: return metrics::ControlKind::Hello;
    }
}

const char* control_kind_name(metrics::ControlKind kind) {
    switch (kind) {
        case metrics::ControlKind::Rreq: return "rreq";
        case metrics::ControlKind::Rrep: return "rrep";
        case metrics::ControlKind::Rerr: return "rerr";
        default: return "hello";
    }
}

} // namespace

bool advance_toward(geometry::Position& pos, const geometry::Position& target,
                    double speed_mps, double dt_s) {
    double dx = target.coords[0] - pos.coords[0];
    double dy = target.coords[1] - pos.coords[1];
    double remaining = std::sqrt(dx * dx + dy * dy);
    double step_dist = speed_mps * dt_s;
    if (step_dist >= remaining) {
        pos = target;
        return true;
    }
    pos.coords[0] += dx * (step_dist / remaining);
    pos.coords[1] += dy * (step_dist / remaining);
    return false;
}

void EventQueue::schedule(SimTime now, SimTime fire_time, EventKind kind) {
    if (fire_time < now) {
        throw SchedulingInPast("event at " + std::to_string(fire_time) +
                               "us scheduled from " + std::to_string(now) + "us");
    }
    heap_.push(Event{fire_time, next_seq_++, std::move(kind)});
}

std::optional<Event> EventQueue::pop() {
    if (heap_.empty()) {
        return std::nullopt;
    }
    Event ev = heap_.top();
    heap_.pop();
    return ev;
}

World::World(WorldConfig config)
    : config_(std::move(config)),
      setup_rng_(derive_stream_seed(config_.seed, 0)),
      radio_rng_(derive_stream_seed(config_.seed, 1)) {
    std::size_t n = config_.node_count;
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes_[i].addr = static_cast<Address>(i);
    }

    if (config_.fixed_positions) {
        positions_ = *config_.fixed_positions;
    } else {
        positions_.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            positions_.push_back(geometry::make_xy(
                setup_rng_.uniform(0.0, config_.arena_w),
                setup_rng_.uniform(0.0, config_.arena_h)));
        }
    }

    bool moving = config_.mobility.kind == MobilityModel::Kind::RandomWaypoint;
    if (moving) {
        waypoints_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            draw_waypoint(i);
        }
    }

    flows_ = config_.flows;
    flow_next_seq_.assign(flows_.size(), 0);
    for (std::size_t i = 0; i < flows_.size(); ++i) {
        collector_.register_flow(static_cast<std::uint32_t>(i));
    }

    for (std::size_t i = 0; i < n; ++i) {
        queue_.schedule(0, 0, HelloTick{static_cast<Address>(i)});
    }
    if (moving) {
        queue_.schedule(0, static_cast<SimTime>(config_.mobility.step_s * kMicrosPerSecond),
                        MobilityStep{});
    }
    for (std::size_t i = 0; i < flows_.size(); ++i) {
        queue_.schedule(0, flows_[i].start, CbrSend{i});
    }
}

void World::run(SimTime until) {
    while (!queue_.empty() && queue_.next_time() <= until) {
        Event ev = *queue_.pop();
        if (ev.fire_time < now_) {
            throw std::logic_error("causality violation in event queue");
        }
        now_ = ev.fire_time;
        if (trace_) {
            trace_event(ev);
        }
        dispatch(ev);
    }
    now_ = std::max(now_, until);
}

void World::dispatch(const Event& ev) {
    std::visit(
        [&](const auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, Deliver>) {
                deliver(kind);
            } else if constexpr (std::is_same_v<T, HelloTick>) {
                routing::NodeState& node = nodes_[kind.node];
                apply_effects(kind.node,
                              routing::hello_tick(node, now_, config_.params));
                queue_.schedule(now_, now_ + config_.params.hello_interval,
                                HelloTick{kind.node});
            } else if constexpr (std::is_same_v<T, CbrSend>) {
                const CbrFlow& flow = flows_[kind.flow];
                if (now_ < flow.stop) {
                    routing::DataPacket packet;
                    packet.flow_id = static_cast<std::uint32_t>(kind.flow);
                    packet.flow_seq = flow_next_seq_[kind.flow]++;
                    packet.size_bytes = flow.packet_size_b;
                    packet.src = flow.src;
                    packet.dst = flow.dst;
                    collector_.record_sent(packet.flow_id, packet.flow_seq, now_);
                    apply_effects(flow.src, routing::send_data(nodes_[flow.src], packet,
                                                               now_, config_.params));
                    if (now_ + flow.interval < flow.stop) {
                        queue_.schedule(now_, now_ + flow.interval, CbrSend{kind.flow});
                    }
                }
            } else if constexpr (std::is_same_v<T, MobilityStep>) {
                step_mobility();
                queue_.schedule(
                    now_,
                    now_ + static_cast<SimTime>(config_.mobility.step_s * kMicrosPerSecond),
                    MobilityStep{});
            } else {
                static_assert(std::is_same_v<T, TimerExpiry>);
                apply_effects(kind.node,
                              routing::handle_discovery_timeout(
                                  nodes_[kind.node], kind.dest, now_, config_.params));
            }
        },
        ev.kind);
}

void World::deliver(const Deliver& d) {
    routing::NodeState& node = nodes_[d.to];
    // Hearing any frame from a node is liveness evidence, same as a hello.
    node.neighbors[d.from] = now_;

    if (const auto* control = std::get_if<ControlFrame>(&d.frame)) {
        wire::Message msg = wire::decode(control->bytes);
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, wire::Rreq>) {
                    auto res = routing::handle_rreq(node, m, d.from, d.link_dist_mm,
                                                    now_, config_.params);
                    apply_effects(d.to, std::move(res.fx));
                } else if constexpr (std::is_same_v<T, wire::Rrep>) {
                    auto res = routing::handle_rrep(node, m, d.from, d.link_dist_mm,
                                                    now_, config_.params);
                    if (res.outcome == routing::RrepOutcome::NoReverseRoute) {
                        collector_.record_rrep_no_reverse();
                    }
                    apply_effects(d.to, std::move(res.fx));
                } else if constexpr (std::is_same_v<T, wire::Rerr>) {
                    apply_effects(d.to, routing::handle_rerr(node, m, d.from, now_,
                                                             config_.params));
                } else {
                    apply_effects(d.to, routing::handle_hello(node, m, d.from,
                                                              d.link_dist_mm, now_,
                                                              config_.params));
                }
            },
            msg);
        return;
    }

    const auto& data = std::get<DataFrame>(d.frame);
    collector_.record_data_rx(data.packet.flow_id, data.packet.size_bytes * 8ull);
    if (data.packet.dst == d.to) {
        collector_.record_received(data.packet.flow_id, data.packet.flow_seq, now_,
                                   data.hops_done);
        return;
    }
    apply_effects(d.to,
                  routing::forward_data(node, data.packet, d.from, now_, config_.params),
                  data.hops_done);
}

void World::apply_effects(Address from, routing::Effects&& fx,
                          std::uint32_t data_hops_base) {
    for (const wire::Message& msg : fx.broadcasts) {
        broadcast(from, ControlFrame{wire::encode(msg), control_kind_of(msg)}, now_);
    }
    for (const auto& [to, msg] : fx.unicasts) {
        unicast(from, to, ControlFrame{wire::encode(msg), control_kind_of(msg)}, now_);
    }
    for (const auto& [next_hop, packet] : fx.data_sends) {
        unicast(from, next_hop, DataFrame{packet, data_hops_base + 1}, now_);
    }
    for (const auto& [packet, reason] : fx.drops) {
        collector_.record_drop(packet.flow_id, packet.flow_seq, reason);
    }
    for (const auto& [dest, deadline] : fx.discovery_timers) {
        queue_.schedule(now_, deadline, TimerExpiry{from, dest});
    }
}

void World::broadcast(Address from, const Frame& frame, SimTime now) {
    if (const auto* control = std::get_if<ControlFrame>(&frame)) {
        collector_.record_control_tx(control->kind, control->bytes.size() * 8ull, now);
    } else {
        const auto& data = std::get<DataFrame>(frame);
        collector_.record_data_tx(data.packet.flow_id, from,
                                  data.packet.size_bytes * 8ull, now);
    }
    double range = config_.radio.range_m;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (v == from) {
            continue;
        }
        double dist = distance_m(from, static_cast<Address>(v));
        if (dist > range) {
            continue;
        }
        if (config_.radio.loss_prob > 0 && radio_rng_.bernoulli(config_.radio.loss_prob)) {
            continue;
        }
        SimTime jitter = config_.radio.jitter_us > 0
                             ? static_cast<SimTime>(radio_rng_.uniform(
                                   0.0, static_cast<double>(config_.radio.jitter_us)))
                             : 0;
        queue_.schedule(now, now + config_.radio.base_latency_us + jitter,
                        Deliver{static_cast<Address>(v), from, frame,
                                geometry::cost_mm_from_meters(dist)});
    }
}

void World::unicast(Address from, Address to, const Frame& frame, SimTime now) {
    bool is_data = std::holds_alternative<DataFrame>(frame);
    if (is_data) {
        const auto& data = std::get<DataFrame>(frame);
        collector_.record_data_tx(data.packet.flow_id, from,
                                  data.packet.size_bytes * 8ull, now);
    } else {
        const auto& control = std::get<ControlFrame>(frame);
        collector_.record_control_tx(control.kind, control.bytes.size() * 8ull, now);
    }

    double dist = distance_m(from, to);
    bool delivered = dist <= config_.radio.range_m;
    if (delivered && config_.radio.loss_prob > 0) {
        delivered = !radio_rng_.bernoulli(config_.radio.loss_prob);
    }
    if (!delivered) {
        // Link-level drop; the sender does not learn about it here, link
        // breakage surfaces through hello timeouts only.
        if (is_data) {
            const auto& data = std::get<DataFrame>(frame);
            collector_.record_drop(data.packet.flow_id, data.packet.flow_seq,
                                   routing::DropReason::LinkLoss);
        } else {
            collector_.record_control_drop();
        }
        return;
    }
    SimTime jitter = config_.radio.jitter_us > 0
                         ? static_cast<SimTime>(radio_rng_.uniform(
                               0.0, static_cast<double>(config_.radio.jitter_us)))
                         : 0;
    queue_.schedule(now, now + config_.radio.base_latency_us + jitter,
                    Deliver{to, from, frame, geometry::cost_mm_from_meters(dist)});
}

void World::draw_waypoint(std::size_t i) {
    WaypointState& w = waypoints_[i];
    w.target = geometry::make_xy(setup_rng_.uniform(0.0, config_.arena_w),
                                 setup_rng_.uniform(0.0, config_.arena_h));
    w.speed_mps = setup_rng_.uniform(config_.mobility.speed_min_mps,
                                     config_.mobility.speed_max_mps);
    w.needs_target = false;
}

void World::step_mobility() {
    double dt = config_.mobility.step_s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        WaypointState& w = waypoints_[i];
        if (now_ < w.pause_until) {
            continue;
        }
        if (w.needs_target) {
            draw_waypoint(i);
        }
        if (w.speed_mps <= 0.0) {
            continue; // zero speed degenerates to a static node
        }
        geometry::Position& pos = positions_[i];
        if (advance_toward(pos, w.target, w.speed_mps, dt)) {
            w.pause_until =
                now_ + static_cast<SimTime>(config_.mobility.pause_s * kMicrosPerSecond);
            w.needs_target = true;
        }
        pos.coords[0] = std::clamp(pos.coords[0], 0.0, config_.arena_w);
        pos.coords[1] = std::clamp(pos.coords[1], 0.0, config_.arena_h);
    }
}

void World::trace_event(const Event& ev) {
    std::ostream& out = *trace_;
    out << ev.fire_time << '\t';
    std::visit(
        [&](const auto& kind) {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, Deliver>) {
                if (const auto* control = std::get_if<ControlFrame>(&kind.frame)) {
                    out << "deliver\t" << kind.from << '\t' << kind.to << '\t'
                        << control_kind_name(control->kind);
                } else {
                    const auto& data = std::get<DataFrame>(kind.frame);
                    out << "deliver\t" << kind.from << '\t' << kind.to << "\tdata flow="
                        << data.packet.flow_id << " seq=" << data.packet.flow_seq
                        << " hops=" << data.hops_done;
                }
            } else if constexpr (std::is_same_v<T, HelloTick>) {
                out << "hello_tick\t" << kind.node << "\t-\t";
            } else if constexpr (std::is_same_v<T, CbrSend>) {
                const CbrFlow& flow = flows_[kind.flow];
                out << "cbr_send\t" << flow.src << '\t' << flow.dst
                    << "\tflow=" << kind.flow;
            } else if constexpr (std::is_same_v<T, MobilityStep>) {
                out << "mobility_step\t-\t-\t";
            } else {
                out << "timer\t" << kind.node << "\t-\tdiscovery dest=" << kind.dest;
            }
        },
        ev.kind);
    out << '\n';
}

} // namespace manet::sim
