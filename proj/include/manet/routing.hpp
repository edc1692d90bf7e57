#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "manet/types.hpp"
#include "manet/wire.hpp"

namespace manet::routing {

// Destination sequence number; nullopt means the number is unknown. An
// unknown stored number is always superseded by a known candidate, and an
// unknown candidate never displaces a known entry (see update_route).
using SeqNum = std::optional<std::uint32_t>;

// Route preference policy. Baseline compares hop counts; the distance
// variant compares accumulated Euclidean cost plus a configurable per-hop
// penalty (zero by default, i.e. pure distance).
struct Policy {
    enum class Kind { Baseline, DistanceVariant };

    Kind kind = Kind::Baseline;
    CostMm lambda_hop_mm = 0;

    bool is_variant() const { return kind == Kind::DistanceVariant; }

    CostMm metric(CostMm cost_mm, std::uint32_t hop_count) const {
        return cost_mm + lambda_hop_mm * hop_count;
    }
};

struct RouteEntry {
    Address dest_addr = 0;
    Address next_hop = 0;
    SeqNum dest_seq;
    std::uint32_t hop_count = 0; // 0 only for self, >= 1 for remote
    CostMm path_cost_mm = 0;
    SimTime lifetime_expiry = 0;
    std::set<Address> precursors; // upstream nodes routing through us to dest
    bool valid = false;
};

using RouteTable = std::map<Address, RouteEntry>;

struct RouteCandidate {
    Address dest = 0;
    Address next_hop = 0;
    SeqNum seq;
    std::uint32_t hop_count = 0; // already includes +1 for the arriving link
    CostMm cost_mm = 0;
    SimTime lifetime_expiry = 0;
};

// Protocol timing and budgets. Values are the run defaults; everything is
// configurable from the scenario file.
struct ProtocolParams {
    Policy policy;
    SimTime hello_interval = 1 * kMicrosPerSecond;
    std::uint32_t allowed_hello_loss = 2;
    SimTime route_lifetime = 3 * kMicrosPerSecond;
    SimTime discovery_wait = 1 * kMicrosPerSecond;
    std::uint32_t max_retries = 2;
    std::uint32_t ttl_hops = 35; // fixed per-flood hop budget
    std::size_t queue_capacity = 64;
    bool intermediate_replies = true; // false sets the D flag on originated RREQs

    SimTime neighbor_timeout() const { return allowed_hello_loss * hello_interval; }
    std::uint32_t hello_lifetime_ms() const {
        return static_cast<std::uint32_t>(neighbor_timeout() / kMicrosPerMilli);
    }
};

// One data payload moving through the network. Size is accounted, content is
// not simulated.
struct DataPacket {
    std::uint32_t flow_id = 0;
    std::uint32_t flow_seq = 0;
    std::uint32_t size_bytes = 0;
    Address src = 0;
    Address dst = 0;

    bool operator==(const DataPacket&) const = default;
};

enum class DropReason { NoRoute, QueueOverflow, LinkLoss, InFlightAtEnd };

const char* drop_reason_name(DropReason r);

struct PendingDiscovery {
    std::uint32_t retries_left = 0;
    SimTime deadline = 0;
    std::vector<DataPacket> queued;
};

struct NodeState {
    Address addr = 0;
    std::uint32_t own_seq = 0;      // monotonically non-decreasing
    std::uint32_t next_rreq_id = 1; // strictly increasing per originated flood
    RouteTable table;
    // Best accumulated cost seen per flood; presence alone drives baseline
    // duplicate suppression.
    std::map<std::pair<Address, std::uint32_t>, CostMm> rreq_seen;
    std::map<Address, SimTime> neighbors; // last time each neighbor was heard
    std::map<Address, PendingDiscovery> pending;
};

// Outputs of one state transition, handed to the simulator to put on the
// air. Routing never touches the radio or the clock directly.
struct Effects {
    std::vector<wire::Message> broadcasts;
    std::vector<std::pair<Address, wire::Message>> unicasts; // (to, msg)
    std::vector<std::pair<Address, DataPacket>> data_sends;  // (next hop, packet)
    std::vector<std::pair<DataPacket, DropReason>> drops;
    std::vector<std::pair<Address, SimTime>> discovery_timers; // (dest, deadline)

    void append(Effects&& other);
};

enum class RreqAction { Drop, Reply, Forward };
enum class RrepOutcome { Origin, Forwarded, NoReverseRoute };

struct RreqResult {
    RreqAction action = RreqAction::Drop;
    Effects fx;
};

struct RrepResult {
    RrepOutcome outcome = RrepOutcome::Origin;
    Effects fx;
};

// Four-clause table update rule. Accepts iff no valid entry exists, the
// stored sequence number is unknown, the candidate's is strictly newer, or
// the numbers are equal and the policy metric strictly improves. Accepted
// candidates overwrite the entry (keeping its precursor set) and refresh the
// lifetime; rejected ones leave the table untouched.
bool update_route(RouteTable& table, const RouteCandidate& cand,
                  const Policy& policy, SimTime now);

const RouteEntry* valid_route(const NodeState& node, Address dest, SimTime now);

// Starts a fresh discovery flood for dest: bumps own_seq, consumes a RREQ id,
// broadcasts the request and arms the retry timer. A no-op while a discovery
// for dest is already pending.
Effects originate_discovery(NodeState& node, Address dest, SimTime now,
                            const ProtocolParams& params);

// Retry-deadline expiry for a pending discovery. Re-floods with a fresh RREQ
// id while retries remain, otherwise fails the discovery and drops whatever
// was queued behind it.
Effects handle_discovery_timeout(NodeState& node, Address dest, SimTime now,
                                 const ProtocolParams& params);

RreqResult handle_rreq(NodeState& node, const wire::Rreq& rreq, Address sender,
                       CostMm sender_dist_mm, SimTime now,
                       const ProtocolParams& params);

RrepResult handle_rrep(NodeState& node, const wire::Rrep& rrep, Address sender,
                       CostMm sender_dist_mm, SimTime now,
                       const ProtocolParams& params);

Effects handle_rerr(NodeState& node, const wire::Rerr& rerr, Address sender,
                    SimTime now, const ProtocolParams& params);

// Neighbor beacon: refreshes liveness and the one-hop route to the sender.
Effects handle_hello(NodeState& node, const wire::Hello& hello, Address sender,
                     CostMm sender_dist_mm, SimTime now,
                     const ProtocolParams& params);

// Periodic beacon tick: emits this node's hello and prunes neighbors that
// have been silent past the allowance, invalidating routes through them and
// notifying precursors.
Effects hello_tick(NodeState& node, SimTime now, const ProtocolParams& params);

// Data-plane entry at the source: forwards over a valid route, otherwise
// queues the payload behind a discovery.
Effects send_data(NodeState& node, const DataPacket& packet, SimTime now,
                  const ProtocolParams& params);

// Data-plane relay at an intermediate node.
Effects forward_data(NodeState& node, const DataPacket& packet, Address sender,
                     SimTime now, const ProtocolParams& params);

} // namespace manet::routing
