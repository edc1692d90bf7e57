#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "manet/types.hpp"

namespace manet::wire {

// Control-message codec. Layouts are network byte order: one type byte
// (RREQ=1, RREP=2, RERR=3), flag bits most-significant-first in the order
// they appear on the header row, then 32-bit words. Reserved bits are sent
// as zero and ignored on receive. The optional accumulated-cost extension is
// one trailing 32-bit word of millimeters; a baseline decoder rejects the
// longer frame as trailing garbage, so baseline and variant traffic cannot
// silently mix.

inline constexpr std::uint8_t kTypeRreq = 1;
inline constexpr std::uint8_t kTypeRrep = 2;
inline constexpr std::uint8_t kTypeRerr = 3;

inline constexpr std::size_t kRreqBaseSize = 24;
inline constexpr std::size_t kRrepBaseSize = 20;
inline constexpr std::size_t kRerrHeaderSize = 4;
inline constexpr std::size_t kRerrPerDestSize = 8;
inline constexpr std::size_t kCostExtensionSize = 4;

enum class CodecFault { FieldOverflow, UnknownType, Truncated, TrailingGarbage };

struct CodecError : std::runtime_error {
    CodecError(CodecFault f, const std::string& what)
        : std::runtime_error(what), fault(f) {}
    CodecFault fault;
};

struct RreqFlags {
    bool join = false;        // J: multicast join, parsed and carried only
    bool repair = false;      // R: multicast repair, parsed and carried only
    bool gratuitous = false;  // G: gratuitous RREP, parsed and carried only
    bool dest_only = false;   // D: only the destination may answer
    bool unknown_seq = false; // U: requested destination sequence is unknown

    bool operator==(const RreqFlags&) const = default;
};

struct Rreq {
    RreqFlags flags;
    std::uint32_t hop_count = 0; // wire width is one byte, checked on encode
    std::uint32_t rreq_id = 0;
    Address dest_addr = 0;
    std::uint32_t dest_seq = 0;
    Address orig_addr = 0;
    std::uint32_t orig_seq = 0;
    std::optional<std::uint32_t> acc_cost_mm; // variant extension

    bool operator==(const Rreq&) const = default;
};

struct RrepFlags {
    bool repair = false;       // R: multicast repair, parsed and carried only
    bool ack_required = false; // A: acknowledgment requested, carried only

    bool operator==(const RrepFlags&) const = default;
};

struct Rrep {
    RrepFlags flags;
    std::uint32_t prefix_size = 0; // 5 wire bits, checked on encode
    std::uint32_t hop_count = 0;   // one wire byte, checked on encode
    Address dest_addr = 0;
    std::uint32_t dest_seq = 0;
    Address orig_addr = 0;
    std::uint32_t lifetime_ms = 0;
    std::optional<std::uint32_t> acc_cost_mm; // variant extension

    bool operator==(const Rrep&) const = default;
};

struct RerrDest {
    Address addr = 0;
    std::uint32_t seq = 0;

    bool operator==(const RerrDest&) const = default;
};

struct Rerr {
    bool no_delete = false; // N flag, parsed and carried only
    std::vector<RerrDest> destinations; // at least one, at most 255

    bool operator==(const Rerr&) const = default;
};

// Periodic liveness beacon. The wire vocabulary stays at the three message
// types: a hello travels as a baseline RREP whose destination and originator
// are both the sender, hop count 0, flags and prefix clear. decode() maps
// that exact shape back to Hello.
struct Hello {
    Address origin_addr = 0;
    std::uint32_t origin_seq = 0;
    std::uint32_t lifetime_ms = 0;

    bool operator==(const Hello&) const = default;
};

using Message = std::variant<Rreq, Rrep, Rerr, Hello>;

std::vector<std::uint8_t> encode(const Message& msg);

Message decode(std::span<const std::uint8_t> bytes);

std::size_t encoded_size(const Message& msg);

const char* message_kind_name(const Message& msg);

} // namespace manet::wire
