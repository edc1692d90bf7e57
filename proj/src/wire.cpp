#include "manet/wire.hpp"

namespace manet::wire {

namespace {

// RREQ flag bits, byte 1, most significant first: J R G D U.
constexpr std::uint8_t kRreqJoin = 0x80;
constexpr std::uint8_t kRreqRepair = 0x40;
constexpr std::uint8_t kRreqGratuitous = 0x20;
constexpr std::uint8_t kRreqDestOnly = 0x10;
constexpr std::uint8_t kRreqUnknownSeq = 0x08;

// RREP flag bits, byte 1: R A. Prefix size sits in the low five bits of
// byte 2, after the reserved run.
constexpr std::uint8_t kRrepRepair = 0x80;
constexpr std::uint8_t kRrepAck = 0x40;
constexpr std::uint8_t kRrepPrefixMask = 0x1f;

// RERR flag bits, byte 1: N.
constexpr std::uint8_t kRerrNoDelete = 0x80;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
    return (static_cast<std::uint32_t>(b[off]) << 24) |
           (static_cast<std::uint32_t>(b[off + 1]) << 16) |
           (static_cast<std::uint32_t>(b[off + 2]) << 8) |
           static_cast<std::uint32_t>(b[off + 3]);
}

[[noreturn]] void overflow(const std::string& what) {
    throw CodecError(CodecFault::FieldOverflow, what);
}

// Hello travels as this RREP; keep the mapping in one place.
Rrep hello_as_rrep(const Hello& h) {
    Rrep r;
    r.dest_addr = h.origin_addr;
    r.dest_seq = h.origin_seq;
    r.orig_addr = h.origin_addr;
    r.lifetime_ms = h.lifetime_ms;
    r.hop_count = 0;
    return r;
}

bool is_hello_shape(const Rrep& r) {
    return !r.acc_cost_mm.has_value() && r.dest_addr == r.orig_addr &&
           r.hop_count == 0 && !r.flags.repair && !r.flags.ack_required &&
           r.prefix_size == 0;
}

std::vector<std::uint8_t> encode_rreq(const Rreq& m) {
    if (m.hop_count > 0xff) {
        overflow("RREQ hop_count exceeds one byte: " + std::to_string(m.hop_count));
    }
    std::vector<std::uint8_t> out;
    out.reserve(kRreqBaseSize + (m.acc_cost_mm ? kCostExtensionSize : 0));
    out.push_back(kTypeRreq);
    std::uint8_t flags = 0;
    if (m.flags.join) flags |= kRreqJoin;
    if (m.flags.repair) flags |= kRreqRepair;
    if (m.flags.gratuitous) flags |= kRreqGratuitous;
    if (m.flags.dest_only) flags |= kRreqDestOnly;
    if (m.flags.unknown_seq) flags |= kRreqUnknownSeq;
    out.push_back(flags);
    out.push_back(0); // reserved
    out.push_back(static_cast<std::uint8_t>(m.hop_count));
    put_u32(out, m.rreq_id);
    put_u32(out, m.dest_addr);
    put_u32(out, m.dest_seq);
    put_u32(out, m.orig_addr);
    put_u32(out, m.orig_seq);
    if (m.acc_cost_mm) {
        put_u32(out, *m.acc_cost_mm);
    }
    return out;
}

std::vector<std::uint8_t> encode_rrep(const Rrep& m) {
    if (m.hop_count > 0xff) {
        overflow("RREP hop_count exceeds one byte: " + std::to_string(m.hop_count));
    }
    if (m.prefix_size > kRrepPrefixMask) {
        overflow("RREP prefix_size exceeds five bits: " + std::to_string(m.prefix_size));
    }
    std::vector<std::uint8_t> out;
    out.reserve(kRrepBaseSize + (m.acc_cost_mm ? kCostExtensionSize : 0));
    out.push_back(kTypeRrep);
    std::uint8_t flags = 0;
    if (m.flags.repair) flags |= kRrepRepair;
    if (m.flags.ack_required) flags |= kRrepAck;
    out.push_back(flags);
    out.push_back(static_cast<std::uint8_t>(m.prefix_size)); // 3 reserved bits + prefix
    out.push_back(static_cast<std::uint8_t>(m.hop_count));
    put_u32(out, m.dest_addr);
    put_u32(out, m.dest_seq);
    put_u32(out, m.orig_addr);
    put_u32(out, m.lifetime_ms);
    if (m.acc_cost_mm) {
        put_u32(out, *m.acc_cost_mm);
    }
    return out;
}

std::vector<std::uint8_t> encode_rerr(const Rerr& m) {
    if (m.destinations.empty()) {
        overflow("RERR carries no destinations; dest_count must be >= 1");
    }
    if (m.destinations.size() > 0xff) {
        overflow("RERR dest_count exceeds one byte: " + std::to_string(m.destinations.size()));
    }
    std::vector<std::uint8_t> out;
    out.reserve(kRerrHeaderSize + kRerrPerDestSize * m.destinations.size());
    out.push_back(kTypeRerr);
    out.push_back(m.no_delete ? kRerrNoDelete : 0);
    out.push_back(0); // reserved
    out.push_back(static_cast<std::uint8_t>(m.destinations.size()));
    for (const RerrDest& d : m.destinations) {
        put_u32(out, d.addr);
        put_u32(out, d.seq);
    }
    return out;
}

Message decode_rreq(std::span<const std::uint8_t> b) {
    if (b.size() < kRreqBaseSize) {
        throw CodecError(CodecFault::Truncated,
                         "RREQ needs 24 bytes, got " + std::to_string(b.size()));
    }
    if (b.size() != kRreqBaseSize && b.size() != kRreqBaseSize + kCostExtensionSize) {
        throw CodecError(CodecFault::TrailingGarbage,
                         "RREQ length must be 24 or 28, got " + std::to_string(b.size()));
    }
    Rreq m;
    m.flags.join = (b[1] & kRreqJoin) != 0;
    m.flags.repair = (b[1] & kRreqRepair) != 0;
    m.flags.gratuitous = (b[1] & kRreqGratuitous) != 0;
    m.flags.dest_only = (b[1] & kRreqDestOnly) != 0;
    m.flags.unknown_seq = (b[1] & kRreqUnknownSeq) != 0;
    m.hop_count = b[3];
    m.rreq_id = get_u32(b, 4);
    m.dest_addr = get_u32(b, 8);
    m.dest_seq = get_u32(b, 12);
    m.orig_addr = get_u32(b, 16);
    m.orig_seq = get_u32(b, 20);
    if (b.size() == kRreqBaseSize + kCostExtensionSize) {
        m.acc_cost_mm = get_u32(b, 24);
    }
    return m;
}

Message decode_rrep(std::span<const std::uint8_t> b) {
    if (b.size() < kRrepBaseSize) {
        throw CodecError(CodecFault::Truncated,
                         "RREP needs 20 bytes, got " + std::to_string(b.size()));
    }
    if (b.size() != kRrepBaseSize && b.size() != kRrepBaseSize + kCostExtensionSize) {
        throw CodecError(CodecFault::TrailingGarbage,
                         "RREP length must be 20 or 24, got " + std::to_string(b.size()));
    }
    Rrep m;
    m.flags.repair = (b[1] & kRrepRepair) != 0;
    m.flags.ack_required = (b[1] & kRrepAck) != 0;
    m.prefix_size = b[2] & kRrepPrefixMask;
    m.hop_count = b[3];
    m.dest_addr = get_u32(b, 4);
    m.dest_seq = get_u32(b, 8);
    m.orig_addr = get_u32(b, 12);
    m.lifetime_ms = get_u32(b, 16);
    if (b.size() == kRrepBaseSize + kCostExtensionSize) {
        m.acc_cost_mm = get_u32(b, 20);
    }
    if (is_hello_shape(m)) {
        return Hello{m.dest_addr, m.dest_seq, m.lifetime_ms};
    }
    return m;
}

Message decode_rerr(std::span<const std::uint8_t> b) {
    constexpr std::size_t kMinSize = kRerrHeaderSize + kRerrPerDestSize;
    if (b.size() < kMinSize) {
        throw CodecError(CodecFault::Truncated,
                         "RERR needs at least 12 bytes, got " + std::to_string(b.size()));
    }
    std::size_t count = b[3];
    std::size_t expected = kRerrHeaderSize + kRerrPerDestSize * count;
    if (b.size() < expected) {
        throw CodecError(CodecFault::Truncated,
                         "RERR advertises " + std::to_string(count) + " destinations, needs " +
                             std::to_string(expected) + " bytes, got " + std::to_string(b.size()));
    }
    if (b.size() > expected) {
        throw CodecError(CodecFault::TrailingGarbage,
                         "RERR advertises " + std::to_string(count) + " destinations, expects " +
                             std::to_string(expected) + " bytes, got " + std::to_string(b.size()));
    }
    Rerr m;
    m.no_delete = (b[1] & kRerrNoDelete) != 0;
    m.destinations.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t off = kRerrHeaderSize + kRerrPerDestSize * i;
        m.destinations.push_back(RerrDest{get_u32(b, off), get_u32(b, off + 4)});
    }
    return m;
}

} // namespace

std::vector<std::uint8_t> encode(const Message& msg) {
    return std::visit(
        [](const auto& m) -> std::vector<std::uint8_t> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Rreq>) {
                return encode_rreq(m);
            } else if constexpr (std::is_same_v<T, Rrep>) {
                return encode_rrep(m);
            } else if constexpr (std::is_same_v<T, Rerr>) {
                return encode_rerr(m);
            } else {
                return encode_rrep(hello_as_rrep(m));
            }
        },
        msg);
}

Message decode(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) {
        throw CodecError(CodecFault::Truncated, "empty input");
    }
    switch (bytes[0]) {
        case kTypeRreq:
            return decode_rreq(bytes);
        case kTypeRrep:
            return decode_rrep(bytes);
        case kTypeRerr:
            return decode_rerr(bytes);
        default:
            throw CodecError(CodecFault::UnknownType,
                             "type byte " + std::to_string(bytes[0]) + " not in {1,2,3}");
    }
}

std::size_t encoded_size(const Message& msg) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Rreq>) {
                return kRreqBaseSize + (m.acc_cost_mm ? kCostExtensionSize : 0);
            } else if constexpr (std::is_same_v<T, Rrep>) {
                return kRrepBaseSize + (m.acc_cost_mm ? kCostExtensionSize : 0);
            } else if constexpr (std::is_same_v<T, Rerr>) {
                return kRerrHeaderSize + kRerrPerDestSize * m.destinations.size();
            } else {
                return kRrepBaseSize;
            }
        },
        msg);
}

const char* message_kind_name(const Message& msg) {
    switch (msg.index()) {
        case 0: return "rreq";
        case 1: return "rrep";
        case 2: return "rerr";
        default: return "hello";
    }
}

} // namespace manet::wire
