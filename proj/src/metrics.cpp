#include "manet/metrics.hpp"

#include <cstdio>

namespace manet::metrics {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

void Collector::record_sent(std::uint32_t flow, std::uint32_t seq, SimTime now) {
    PacketRecord& rec = records_[{flow, seq}];
    rec.sent_at = now;
    flows_[flow]; // a transfer exists once it sends
}

void Collector::record_received(std::uint32_t flow, std::uint32_t seq, SimTime now,
                                std::uint32_t hops) {
    auto it = records_.find({flow, seq});
    if (it == records_.end() || it->second.received_at || it->second.drop_reason) {
        return;
    }
    it->second.received_at = now;
    it->second.hops_traversed = hops;
}

void Collector::record_drop(std::uint32_t flow, std::uint32_t seq,
                            routing::DropReason reason) {
    auto it = records_.find({flow, seq});
    if (it == records_.end() || it->second.received_at || it->second.drop_reason) {
        return;
    }
    it->second.drop_reason = reason;
}

void Collector::record_mac_submission(std::uint64_t bits, SimTime now) {
    (void)now;
    total_bits_ += bits;
}

void Collector::record_control_tx(ControlKind kind, std::uint64_t bits, SimTime now) {
    control_tx_[static_cast<std::size_t>(kind)] += 1;
    control_bits_ += bits;
    record_mac_submission(bits, now);
}

void Collector::record_data_tx(std::uint32_t flow, Address transmitter,
                               std::uint64_t bits, SimTime now) {
    FlowAcc& acc = flows_[flow];
    acc.bits_tx += bits;
    acc.transmitters.insert(transmitter);
    record_mac_submission(bits, now);
}

void Collector::record_data_rx(std::uint32_t flow, std::uint64_t bits) {
    flows_[flow].bits_rx += bits;
}

void Collector::record_control_drop() { control_drops_ += 1; }

MetricsReport Collector::finalize(const geometry::CostWeights& weights,
                                  SimTime end_time) {
    for (auto& [key, rec] : records_) {
        if (!rec.received_at && !rec.drop_reason) {
            rec.drop_reason = routing::DropReason::InFlightAtEnd;
        }
    }

    MetricsReport report;
    report.end_time = end_time;
    report.rreq_tx = control_tx_[static_cast<std::size_t>(ControlKind::Rreq)];
    report.rrep_tx = control_tx_[static_cast<std::size_t>(ControlKind::Rrep)];
    report.rerr_tx = control_tx_[static_cast<std::size_t>(ControlKind::Rerr)];
    report.hello_tx = control_tx_[static_cast<std::size_t>(ControlKind::Hello)];
    report.control_drops = control_drops_;
    report.rrep_no_reverse = rrep_no_reverse_;
    report.control_bits = control_bits_;
    report.data_bits = total_bits_ - control_bits_;

    double duration_s = end_time > 0 ? static_cast<double>(end_time) / kMicrosPerSecond : 0.0;
    std::uint64_t control_count =
        report.rreq_tx + report.rrep_tx + report.rerr_tx + report.hello_tx;

    struct Tally {
        std::uint64_t sent = 0, received = 0;
        std::array<std::uint64_t, 4> drops{};
        SimTime delay_sum = 0;
    };
    std::map<std::uint32_t, Tally> tallies;
    for (const auto& [key, rec] : records_) {
        Tally& t = tallies[key.first];
        t.sent += 1;
        if (rec.received_at) {
            t.received += 1;
            t.delay_sum += *rec.received_at - rec.sent_at;
        } else {
            t.drops[static_cast<std::size_t>(*rec.drop_reason)] += 1;
        }
    }

    Tally total;
    for (const auto& [flow_id, acc] : flows_) {
        Tally t = tallies.count(flow_id) ? tallies[flow_id] : Tally{};
        TransferReport tr;
        tr.flow_id = flow_id;
        tr.packets_sent = t.sent;
        tr.packets_received = t.received;
        tr.packets_dropped = t.sent - t.received;
        tr.drops_by_reason = t.drops;
        tr.avg_delay_ms = t.received > 0
                              ? static_cast<double>(t.delay_sum) / kMicrosPerMilli /
                                    static_cast<double>(t.received)
                              : 0.0;
        tr.delivery_ratio =
            t.sent > 0 ? static_cast<double>(t.received) / static_cast<double>(t.sent)
                       : 0.0;
        tr.network_load_bps =
            duration_s > 0 ? static_cast<double>(acc.bits_tx) / duration_s : 0.0;
        tr.cost = geometry::transfer_cost(acc.transmitters.size(), acc.bits_tx / 8,
                                          acc.bits_rx / 8, tr.packets_dropped, weights);
        tr.control_overhead = 0; // control traffic is network-wide, see aggregate
        report.transfers.push_back(tr);

        total.sent += t.sent;
        total.received += t.received;
        total.delay_sum += t.delay_sum;
        for (std::size_t i = 0; i < t.drops.size(); ++i) {
            total.drops[i] += t.drops[i];
        }
        report.aggregate.cost += tr.cost;
    }

    report.aggregate.packets_sent = total.sent;
    report.aggregate.packets_received = total.received;
    report.aggregate.packets_dropped = total.sent - total.received;
    report.aggregate.drops_by_reason = total.drops;
    report.aggregate.avg_delay_ms =
        total.received > 0 ? static_cast<double>(total.delay_sum) / kMicrosPerMilli /
                                 static_cast<double>(total.received)
                           : 0.0;
    report.aggregate.delivery_ratio =
        total.sent > 0
            ? static_cast<double>(total.received) / static_cast<double>(total.sent)
            : 0.0;
    report.aggregate.network_load_bps =
        duration_s > 0 ? static_cast<double>(total_bits_) / duration_s : 0.0;
    report.aggregate.control_overhead = control_count;
    return report;
}

std::string csv_header() {
    return "protocol,seed,transfer,cost,avg_delay_ms,packets_sent,packets_dropped,"
           "delivery_ratio,network_load_bps,control_overhead\n";
}

void append_csv_rows(std::string& out, const std::string& protocol,
                     std::uint64_t seed, const MetricsReport& report) {
    auto row = [&](const std::string& transfer, const TransferReport& tr) {
        out += protocol;
        out += ',';
        out += std::to_string(seed);
        out += ',';
        out += transfer;
        out += ',';
        out += format_double(tr.cost);
        out += ',';
        out += format_double(tr.avg_delay_ms);
        out += ',';
        out += std::to_string(tr.packets_sent);
        out += ',';
        out += std::to_string(tr.packets_dropped);
        out += ',';
        out += format_double(tr.delivery_ratio);
        out += ',';
        out += format_double(tr.network_load_bps);
        out += ',';
        out += std::to_string(tr.control_overhead);
        out += '\n';
    };
    for (const TransferReport& tr : report.transfers) {
        row(std::to_string(tr.flow_id + 1), tr);
    }
    row("aggregate", report.aggregate);
}

} // namespace manet::metrics
