#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <variant>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/metrics.hpp"
#include "manet/rng.hpp"
#include "manet/routing.hpp"
#include "manet/types.hpp"
#include "manet/wire.hpp"

namespace manet::sim {

struct SchedulingInPast : std::logic_error {
    using std::logic_error::logic_error;
};

// Unit-disk radio: frames reach exactly the nodes within range, after the
// base latency plus a uniform jitter draw, unless the per-delivery loss draw
// fails. No collisions or backoff; jitter and loss are the fidelity knobs.
struct RadioModel {
    double range_m = 250.0;
    SimTime base_latency_us = 100;
    SimTime jitter_us = 2000;
    double loss_prob = 0.0;
};

struct MobilityModel {
    enum class Kind { Static, RandomWaypoint };

    Kind kind = Kind::RandomWaypoint;
    double speed_min_mps = 0.0;
    double speed_max_mps = 20.0;
    double pause_s = 0.0;
    double step_s = 0.1;
};

struct CbrFlow {
    Address src = 0;
    Address dst = 0;
    std::uint32_t packet_size_b = 512;
    SimTime interval = 250'000;
    SimTime start = 0;
    SimTime stop = 0;
};

// Frames in flight. Control frames travel as encoded wire bytes so every
// exchange exercises the codec; data frames carry their descriptor plus the
// number of links crossed so far.
struct ControlFrame {
    std::vector<std::uint8_t> bytes;
    metrics::ControlKind kind = metrics::ControlKind::Rreq;
};

struct DataFrame {
    routing::DataPacket packet;
    std::uint32_t hops_done = 0;
};

using Frame = std::variant<ControlFrame, DataFrame>;

struct Deliver {
    Address to = 0;
    Address from = 0;
    Frame frame;
    CostMm link_dist_mm = 0; // sender-receiver distance at send time
};
struct HelloTick {
    Address node = 0;
};
struct CbrSend {
    std::size_t flow = 0;
};
struct MobilityStep {};
struct TimerExpiry {
    Address node = 0;
    Address dest = 0;
};

using EventKind = std::variant<Deliver, HelloTick, CbrSend, MobilityStep, TimerExpiry>;

struct Event {
    SimTime fire_time = 0;
    std::uint64_t seq_no = 0; // scheduling order breaks fire-time ties
    EventKind kind;
};

// Moves straight toward the target at the given speed for dt seconds,
// stopping on arrival. Returns true when the target was reached.
bool advance_toward(geometry::Position& pos, const geometry::Position& target,
                    double speed_mps, double dt_s);

// Min-heap on (fire_time, seq_no). Rejects events scheduled before now.
class EventQueue {
public:
    void schedule(SimTime now, SimTime fire_time, EventKind kind);
    std::optional<Event> pop();
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    SimTime next_time() const { return heap_.top().fire_time; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
            return a.seq_no > b.seq_no;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

struct WorldConfig {
    std::size_t node_count = 40;
    double arena_w = 1000.0;
    double arena_h = 1000.0;
    RadioModel radio;
    MobilityModel mobility;
    std::vector<CbrFlow> flows;
    routing::ProtocolParams params;
    geometry::CostWeights cost_weights;
    SimTime duration = 100 * kMicrosPerSecond;
    std::uint64_t seed = 1;
    // Tests pin exact topologies; normal runs draw uniform positions.
    std::optional<std::vector<geometry::Position>> fixed_positions;
};

// One simulation run. Strictly single-threaded; every stochastic draw comes
// from two sub-streams of the run seed (topology/mobility and radio), so a
// protocol switch cannot disturb the mobility trace or traffic schedule.
class World {
public:
    explicit World(WorldConfig config);

    // Drains events through `until` sim-time. May be called repeatedly with
    // increasing horizons.
    void run(SimTime until);
    void run() { run(config_.duration); }

    metrics::MetricsReport finalize() {
        return collector_.finalize(config_.cost_weights, now_);
    }

    // Radio primitives; exposed for direct tests.
    void broadcast(Address from, const Frame& frame, SimTime now);
    void unicast(Address from, Address to, const Frame& frame, SimTime now);

    void set_trace(std::ostream* sink) { trace_ = sink; }

    SimTime now() const { return now_; }
    const WorldConfig& config() const { return config_; }
    const routing::NodeState& node(Address a) const { return nodes_[a]; }
    const geometry::Position& position(Address a) const { return positions_[a]; }
    const std::vector<CbrFlow>& flows() const { return flows_; }
    metrics::Collector& collector() { return collector_; }
    std::size_t queue_size() const { return queue_.size(); }

private:
    struct WaypointState {
        geometry::Position target;
        double speed_mps = 0.0;
        SimTime pause_until = 0;
        bool needs_target = true;
    };

    void dispatch(const Event& ev);
    void deliver(const Deliver& d);
    void apply_effects(Address from, routing::Effects&& fx,
                       std::uint32_t data_hops_base = 0);
    void step_mobility();
    void draw_waypoint(std::size_t i);
    double distance_m(Address a, Address b) const {
        return geometry::euclidean_distance(positions_[a], positions_[b]);
    }
    void submit_control(const wire::Message& msg, std::size_t encoded_bytes);
    void trace_event(const Event& ev);

    WorldConfig config_;
    Rng setup_rng_;  // positions, flow endpoints, waypoints, speeds
    Rng radio_rng_;  // jitter and loss draws
    std::vector<routing::NodeState> nodes_;
    std::vector<geometry::Position> positions_;
    std::vector<WaypointState> waypoints_;
    std::vector<CbrFlow> flows_;
    std::vector<std::uint32_t> flow_next_seq_;
    EventQueue queue_;
    metrics::Collector collector_;
    SimTime now_ = 0;
    std::ostream* trace_ = nullptr;
};

} // namespace manet::sim
