#include "manet/routing.hpp"

#include <algorithm>

#include "manet/geometry.hpp"

namespace manet::routing {

namespace {

constexpr std::uint32_t kSeqOrZero(const SeqNum& s) { return s.value_or(0); }

std::uint32_t remaining_lifetime_ms(const RouteEntry& e, SimTime now) {
    SimTime left = e.lifetime_expiry - now;
    return left > 0 ? static_cast<std::uint32_t>(left / kMicrosPerMilli) : 0;
}

void touch_route(NodeState& node, Address dest, SimTime now,
                 const ProtocolParams& params) {
    auto it = node.table.find(dest);
    if (it != node.table.end() && it->second.valid) {
        it->second.lifetime_expiry =
            std::max(it->second.lifetime_expiry, now + params.route_lifetime);
    }
}

wire::Rreq build_rreq(NodeState& node, Address dest, const ProtocolParams& params) {
    wire::Rreq rreq;
    rreq.rreq_id = node.next_rreq_id++;
    rreq.orig_addr = node.addr;
    rreq.orig_seq = node.own_seq;
    rreq.dest_addr = dest;
    auto it = node.table.find(dest);
    if (it != node.table.end() && it->second.dest_seq.has_value()) {
        rreq.dest_seq = *it->second.dest_seq;
    } else {
        rreq.flags.unknown_seq = true;
    }
    rreq.flags.dest_only = !params.intermediate_replies;
    rreq.hop_count = 0;
    if (params.policy.is_variant()) {
        rreq.acc_cost_mm = 0;
    }
    return rreq;
}

// Invalidates every valid entry routed through one of the lost next hops,
// bumping known sequence numbers so stale copies cannot win later, and
// builds one RERR for the union of the affected precursor sets.
Effects invalidate_routes_via(NodeState& node, const std::set<Address>& lost_hops) {
    Effects fx;
    wire::Rerr rerr;
    std::set<Address> recipients;
    for (auto& [dest, entry] : node.table) {
        if (!entry.valid || !lost_hops.contains(entry.next_hop)) {
            continue;
        }
        entry.valid = false;
        if (entry.dest_seq.has_value()) {
            entry.dest_seq = *entry.dest_seq + 1;
        }
        rerr.destinations.push_back(wire::RerrDest{dest, kSeqOrZero(entry.dest_seq)});
        recipients.insert(entry.precursors.begin(), entry.precursors.end());
    }
    if (!rerr.destinations.empty() && !recipients.empty()) {
        for (Address to : recipients) {
            fx.unicasts.emplace_back(to, rerr);
        }
    }
    return fx;
}

} // namespace

const char* drop_reason_name(DropReason r) {
    switch (r) {
        case DropReason::NoRoute: return "no_route";
        case DropReason::QueueOverflow: return "queue_overflow";
        case DropReason::LinkLoss: return "link_loss";
        default: return "in_flight_at_end";
    }
}

void Effects::append(Effects&& other) {
    auto move_into = [](auto& dst, auto& src) {
        dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                   std::make_move_iterator(src.end()));
    };
    move_into(broadcasts, other.broadcasts);
    move_into(unicasts, other.unicasts);
    move_into(data_sends, other.data_sends);
    move_into(drops, other.drops);
    move_into(discovery_timers, other.discovery_timers);
}

bool update_route(RouteTable& table, const RouteCandidate& cand,
                  const Policy& policy, SimTime now) {
    auto it = table.find(cand.dest);
    bool accept = false;
    if (it == table.end() || !it->second.valid || it->second.lifetime_expiry <= now) {
        accept = true; // (a) no live entry
    } else {
        const RouteEntry& cur = it->second;
        if (!cur.dest_seq.has_value()) {
            accept = true; // (b) stored number unknown
        } else if (cand.seq.has_value()) {
            if (*cand.seq > *cur.dest_seq) {
                accept = true; // (c) strictly newer
            } else if (*cand.seq == *cur.dest_seq) {
                // (d) equal freshness, strictly better metric
                if (policy.is_variant()) {
                    accept = policy.metric(cand.cost_mm, cand.hop_count) <
                             policy.metric(cur.path_cost_mm, cur.hop_count);
                } else {
                    accept = cand.hop_count < cur.hop_count;
                }
            }
        }
    }
    if (!accept) {
        return false;
    }
    RouteEntry& entry = table[cand.dest];
    entry.dest_addr = cand.dest;
    entry.next_hop = cand.next_hop;
    entry.dest_seq = cand.seq;
    entry.hop_count = cand.hop_count;
    entry.path_cost_mm = cand.cost_mm;
    entry.lifetime_expiry = cand.lifetime_expiry;
    entry.valid = true;
    return true;
}

const RouteEntry* valid_route(const NodeState& node, Address dest, SimTime now) {
    auto it = node.table.find(dest);
    if (it == node.table.end() || !it->second.valid || it->second.lifetime_expiry <= now) {
        return nullptr;
    }
    return &it->second;
}

Effects originate_discovery(NodeState& node, Address dest, SimTime now,
                            const ProtocolParams& params) {
    Effects fx;
    if (node.pending.contains(dest)) {
        return fx; // one flood per wait window
    }
    node.own_seq += 1;
    wire::Rreq rreq = build_rreq(node, dest, params);
    // Remember our own flood so echoes coming back are dropped.
    node.rreq_seen[{node.addr, rreq.rreq_id}] = 0;
    PendingDiscovery& pending = node.pending[dest];
    pending.retries_left = params.max_retries;
    pending.deadline = now + params.discovery_wait;
    fx.broadcasts.emplace_back(rreq);
    fx.discovery_timers.emplace_back(dest, pending.deadline);
    return fx;
}

Effects handle_discovery_timeout(NodeState& node, Address dest, SimTime now,
                                 const ProtocolParams& params) {
    Effects fx;
    auto it = node.pending.find(dest);
    if (it == node.pending.end() || it->second.deadline > now) {
        return fx; // already completed, or an earlier timer superseded by a retry
    }
    PendingDiscovery& pending = it->second;
    if (pending.retries_left == 0) {
        for (DataPacket& packet : pending.queued) {
            fx.drops.emplace_back(std::move(packet), DropReason::NoRoute);
        }
        node.pending.erase(it);
        return fx;
    }
    pending.retries_left -= 1;
    pending.deadline = now + params.discovery_wait;
    node.own_seq += 1;
    wire::Rreq rreq = build_rreq(node, dest, params);
    node.rreq_seen[{node.addr, rreq.rreq_id}] = 0;
    fx.broadcasts.emplace_back(rreq);
    fx.discovery_timers.emplace_back(dest, pending.deadline);
    return fx;
}

RreqResult handle_rreq(NodeState& node, const wire::Rreq& rreq, Address sender,
                       CostMm sender_dist_mm, SimTime now,
                       const ProtocolParams& params) {
    RreqResult res;
    if (rreq.orig_addr == node.addr) {
        res.action = RreqAction::Drop; // own flood echoed back
        return res;
    }
    CostMm incoming_cost =
        geometry::saturating_add_cost(rreq.acc_cost_mm.value_or(0), sender_dist_mm);
    auto key = std::make_pair(rreq.orig_addr, rreq.rreq_id);
    auto seen = node.rreq_seen.find(key);
    if (seen != node.rreq_seen.end()) {
        // Baseline discards every repeat; the variant lets strictly cheaper
        // copies through so the flood converges on the least-cost path.
        if (!params.policy.is_variant() || incoming_cost >= seen->second) {
            res.action = RreqAction::Drop;
            return res;
        }
    }
    std::uint32_t forwarded_hops = rreq.hop_count + 1;
    node.rreq_seen[key] = incoming_cost;

    // Reverse route back to the originator via whoever handed us this copy.
    update_route(node.table,
                 RouteCandidate{rreq.orig_addr, sender, rreq.orig_seq,
                                forwarded_hops, incoming_cost,
                                now + params.route_lifetime},
                 params.policy, now);

    if (rreq.dest_addr == node.addr) {
        // We are the destination; answer with a fresh sequence number no
        // older than the one being asked about.
        std::uint32_t floor = rreq.flags.unknown_seq ? 0 : rreq.dest_seq;
        node.own_seq = std::max(node.own_seq + 1, floor);
        wire::Rrep rrep;
        rrep.dest_addr = node.addr;
        rrep.dest_seq = node.own_seq;
        rrep.orig_addr = rreq.orig_addr;
        rrep.hop_count = 0;
        rrep.lifetime_ms =
            static_cast<std::uint32_t>(params.route_lifetime / kMicrosPerMilli);
        if (params.policy.is_variant()) {
            rrep.acc_cost_mm = 0;
        }
        res.action = RreqAction::Reply;
        res.fx.unicasts.emplace_back(sender, rrep);
        return res;
    }

    const RouteEntry* stored = valid_route(node, rreq.dest_addr, now);
    bool can_answer = !rreq.flags.dest_only && stored != nullptr &&
                      stored->dest_seq.has_value() &&
                      (rreq.flags.unknown_seq || *stored->dest_seq >= rreq.dest_seq);
    if (can_answer) {
        wire::Rrep rrep;
        rrep.dest_addr = rreq.dest_addr;
        rrep.dest_seq = *stored->dest_seq;
        rrep.orig_addr = rreq.orig_addr;
        rrep.hop_count = stored->hop_count;
        rrep.lifetime_ms = remaining_lifetime_ms(*stored, now);
        if (params.policy.is_variant()) {
            rrep.acc_cost_mm = static_cast<std::uint32_t>(stored->path_cost_mm);
        }
        res.action = RreqAction::Reply;
        res.fx.unicasts.emplace_back(sender, rrep);
        return res;
    }

    if (forwarded_hops >= params.ttl_hops) {
        res.action = RreqAction::Drop; // hop budget spent, no re-broadcast
        return res;
    }
    wire::Rreq forwarded = rreq;
    forwarded.hop_count = forwarded_hops;
    if (params.policy.is_variant()) {
        forwarded.acc_cost_mm = static_cast<std::uint32_t>(incoming_cost);
    }
    res.action = RreqAction::Forward;
    res.fx.broadcasts.emplace_back(forwarded);
    return res;
}

RrepResult handle_rrep(NodeState& node, const wire::Rrep& rrep, Address sender,
                       CostMm sender_dist_mm, SimTime now,
                       const ProtocolParams& params) {
    RrepResult res;
    CostMm path_cost = params.policy.is_variant()
                           ? geometry::saturating_add_cost(rrep.acc_cost_mm.value_or(0),
                                                           sender_dist_mm)
                           : 0;
    update_route(node.table,
                 RouteCandidate{rrep.dest_addr, sender, rrep.dest_seq,
                                rrep.hop_count + 1, path_cost,
                                now + rrep.lifetime_ms * kMicrosPerMilli},
                 params.policy, now);

    if (rrep.orig_addr == node.addr) {
        res.outcome = RrepOutcome::Origin;
        auto pending = node.pending.find(rrep.dest_addr);
        if (pending != node.pending.end() &&
            valid_route(node, rrep.dest_addr, now) != nullptr) {
            std::vector<DataPacket> queued = std::move(pending->second.queued);
            node.pending.erase(pending);
            for (const DataPacket& packet : queued) {
                res.fx.append(send_data(node, packet, now, params));
            }
        }
        return res;
    }

    const RouteEntry* reverse = valid_route(node, rrep.orig_addr, now);
    if (reverse == nullptr) {
        res.outcome = RrepOutcome::NoReverseRoute;
        return res;
    }
    Address relay_to = reverse->next_hop;
    wire::Rrep forwarded = rrep;
    forwarded.hop_count = rrep.hop_count + 1;
    if (params.policy.is_variant()) {
        forwarded.acc_cost_mm = static_cast<std::uint32_t>(path_cost);
    }
    // The downstream relay will route data for this destination through us.
    auto fwd = node.table.find(rrep.dest_addr);
    if (fwd != node.table.end() && fwd->second.valid) {
        fwd->second.precursors.insert(relay_to);
    }
    res.outcome = RrepOutcome::Forwarded;
    res.fx.unicasts.emplace_back(relay_to, forwarded);
    return res;
}

Effects handle_rerr(NodeState& node, const wire::Rerr& rerr, Address sender,
                    SimTime now, const ProtocolParams& params) {
    (void)params;
    (void)now;
    Effects fx;
    wire::Rerr propagated;
    std::set<Address> recipients;
    for (const wire::RerrDest& unreachable : rerr.destinations) {
        auto it = node.table.find(unreachable.addr);
        if (it == node.table.end() || !it->second.valid ||
            it->second.next_hop != sender) {
            continue;
        }
        RouteEntry& entry = it->second;
        entry.valid = false;
        entry.dest_seq = unreachable.seq;
        propagated.destinations.push_back(
            wire::RerrDest{unreachable.addr, unreachable.seq});
        recipients.insert(entry.precursors.begin(), entry.precursors.end());
    }
    if (!propagated.destinations.empty() && !recipients.empty()) {
        for (Address to : recipients) {
            fx.unicasts.emplace_back(to, propagated);
        }
    }
    return fx;
}

Effects handle_hello(NodeState& node, const wire::Hello& hello, Address sender,
                     CostMm sender_dist_mm, SimTime now,
                     const ProtocolParams& params) {
    Effects fx;
    node.neighbors[sender] = now;
    update_route(node.table,
                 RouteCandidate{hello.origin_addr, hello.origin_addr,
                                hello.origin_seq, 1, sender_dist_mm,
                                now + hello.lifetime_ms * kMicrosPerMilli},
                 params.policy, now);
    return fx;
}

Effects hello_tick(NodeState& node, SimTime now, const ProtocolParams& params) {
    Effects fx;
    std::set<Address> lost;
    for (auto it = node.neighbors.begin(); it != node.neighbors.end();) {
        if (now - it->second > params.neighbor_timeout()) {
            lost.insert(it->first);
            it = node.neighbors.erase(it);
        } else {
            ++it;
        }
    }
    if (!lost.empty()) {
        fx.append(invalidate_routes_via(node, lost));
    }
    fx.broadcasts.emplace_back(
        wire::Hello{node.addr, node.own_seq, params.hello_lifetime_ms()});
    return fx;
}

Effects send_data(NodeState& node, const DataPacket& packet, SimTime now,
                  const ProtocolParams& params) {
    Effects fx;
    if (const RouteEntry* route = valid_route(node, packet.dst, now)) {
        Address next_hop = route->next_hop;
        touch_route(node, packet.dst, now, params);
        touch_route(node, next_hop, now, params);
        fx.data_sends.emplace_back(next_hop, packet);
        return fx;
    }
    fx.append(originate_discovery(node, packet.dst, now, params));
    PendingDiscovery& pending = node.pending[packet.dst];
    if (pending.queued.size() >= params.queue_capacity) {
        fx.drops.emplace_back(packet, DropReason::QueueOverflow);
        return fx;
    }
    pending.queued.push_back(packet);
    return fx;
}

Effects forward_data(NodeState& node, const DataPacket& packet, Address sender,
                     SimTime now, const ProtocolParams& params) {
    Effects fx;
    if (const RouteEntry* route = valid_route(node, packet.dst, now)) {
        Address next_hop = route->next_hop;
        touch_route(node, packet.dst, now, params);
        touch_route(node, next_hop, now, params);
        fx.data_sends.emplace_back(next_hop, packet);
        return fx;
    }
    // Relay without a live route: the packet is lost here, and the upstream
    // hop is told so it stops feeding us.
    fx.drops.emplace_back(packet, DropReason::NoRoute);
    wire::Rerr rerr;
    std::uint32_t seq = 0;
    std::set<Address> recipients{sender};
    auto it = node.table.find(packet.dst);
    if (it != node.table.end()) {
        if (it->second.dest_seq.has_value()) {
            seq = *it->second.dest_seq + 1;
            it->second.dest_seq = seq;
        }
        it->second.valid = false;
        recipients.insert(it->second.precursors.begin(), it->second.precursors.end());
    }
    rerr.destinations.push_back(wire::RerrDest{packet.dst, seq});
    for (Address to : recipients) {
        fx.unicasts.emplace_back(to, rerr);
    }
    return fx;
}

} // namespace manet::routing
