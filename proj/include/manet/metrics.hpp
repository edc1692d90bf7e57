#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/routing.hpp"
#include "manet/types.hpp"

namespace manet::metrics {

enum class ControlKind { Rreq, Rrep, Rerr, Hello };

// Fate of one data packet: either a delivery time or a drop reason, never
// both, fixed by the time the report is built.
struct PacketRecord {
    SimTime sent_at = 0;
    std::optional<SimTime> received_at;
    std::uint32_t hops_traversed = 0;
    std::optional<routing::DropReason> drop_reason;
};

struct TransferReport {
    std::uint32_t flow_id = 0;
    std::uint64_t packets_sent = 0;
    std::uint64_t packets_received = 0;
    std::uint64_t packets_dropped = 0;
    std::array<std::uint64_t, 4> drops_by_reason{}; // indexed by DropReason
    double cost = 0.0;
    double avg_delay_ms = 0.0;
    double delivery_ratio = 0.0;
    double network_load_bps = 0.0;
    std::uint64_t control_overhead = 0;
};

struct MetricsReport {
    std::vector<TransferReport> transfers;
    TransferReport aggregate;
    std::uint64_t rreq_tx = 0;
    std::uint64_t rrep_tx = 0;
    std::uint64_t rerr_tx = 0;
    std::uint64_t hello_tx = 0;
    std::uint64_t control_drops = 0;    // control frames lost at link level
    std::uint64_t rrep_no_reverse = 0;  // replies dropped for want of a reverse path
    std::uint64_t data_bits = 0;
    std::uint64_t control_bits = 0;
    SimTime end_time = 0;
};

// Per-run accumulator, fed from the event loop. One transfer = one CBR flow
// episode; the aggregate row folds the whole run together, and network load
// in the aggregate is every MAC submission, data and control alike. The
// per-transfer load column covers the flow's own data submissions; control
// traffic is network-wide and appears only in the aggregate row.
class Collector {
public:
    // Ensures a transfer row exists even if the flow never sends.
    void register_flow(std::uint32_t flow) { flows_[flow]; }

    void record_sent(std::uint32_t flow, std::uint32_t seq, SimTime now);
    void record_received(std::uint32_t flow, std::uint32_t seq, SimTime now,
                         std::uint32_t hops);
    void record_drop(std::uint32_t flow, std::uint32_t seq, routing::DropReason reason);

    // Raw bits handed to the simulated MAC for transmission.
    void record_mac_submission(std::uint64_t bits, SimTime now);

    void record_control_tx(ControlKind kind, std::uint64_t bits, SimTime now);
    void record_data_tx(std::uint32_t flow, Address transmitter, std::uint64_t bits,
                        SimTime now);
    void record_data_rx(std::uint32_t flow, std::uint64_t bits);
    void record_control_drop();
    void record_rrep_no_reverse() { rrep_no_reverse_ += 1; }

    // Closes unresolved packets as in-flight drops and builds the report.
    MetricsReport finalize(const geometry::CostWeights& weights, SimTime end_time);

    const std::map<std::pair<std::uint32_t, std::uint32_t>, PacketRecord>& records() const {
        return records_;
    }
    std::uint64_t control_tx_count(ControlKind kind) const {
        return control_tx_[static_cast<std::size_t>(kind)];
    }
    std::uint64_t total_bits() const { return total_bits_; }

private:
    struct FlowAcc {
        std::uint64_t bits_tx = 0;
        std::uint64_t bits_rx = 0;
        std::set<Address> transmitters;
    };

    std::map<std::pair<std::uint32_t, std::uint32_t>, PacketRecord> records_;
    std::map<std::uint32_t, FlowAcc> flows_;
    std::array<std::uint64_t, 4> control_tx_{};
    std::uint64_t control_bits_ = 0;
    std::uint64_t total_bits_ = 0;
    std::uint64_t control_drops_ = 0;
    std::uint64_t rrep_no_reverse_ = 0;
};

// CSV schema shared by the CLI tools: one row per transfer plus one
// aggregate row per run. '.' decimal separator, LF line endings.
std::string csv_header();
void append_csv_rows(std::string& out, const std::string& protocol,
                     std::uint64_t seed, const MetricsReport& report);

} // namespace manet::metrics
