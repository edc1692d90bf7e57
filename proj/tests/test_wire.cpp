#include <doctest.h>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "generators.hpp"
#include "manet/wire.hpp"

using namespace manet;
using wire::CodecError;
using wire::CodecFault;

namespace {

std::vector<std::uint8_t> from_hex(const std::string& hex) {
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    }
    return out;
}

std::map<std::string, std::vector<std::uint8_t>> load_golden_vectors() {
    std::ifstream in(std::string(MANETSIM_FIXTURE_DIR) + "/wire_golden_vectors.txt");
    REQUIRE(in.good());
    std::map<std::string, std::vector<std::uint8_t>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string name, hex;
        row >> name >> hex;
        out[name] = from_hex(hex);
    }
    return out;
}

CodecFault fault_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const CodecError& e) {
        return e.fault;
    }
    FAIL("expected a CodecError");
    return CodecFault::UnknownType;
}

} // namespace

TEST_SUITE("wire") {

TEST_CASE("rreq encodes to the 24-byte type-1 layout") {
    wire::Rreq m;
    m.flags.unknown_seq = true;
    m.rreq_id = 1;
    m.dest_addr = 5;
    m.orig_addr = 1;
    m.orig_seq = 1;
    auto bytes = wire::encode(m);
    CHECK(bytes.size() == 24);
    CHECK(bytes[0] == 0x01);
    CHECK(bytes[1] == 0x08); // U bit
    CHECK(bytes[11] == 5);   // dest address low byte
}

TEST_CASE("rrep encodes to the 20-byte type-2 layout") {
    wire::Rrep m;
    m.dest_addr = 1;
    m.dest_seq = 0;
    m.orig_addr = 1;
    m.lifetime_ms = 0;
    m.hop_count = 0;
    auto bytes = wire::encode(m);
    CHECK(bytes.size() == 20);
    CHECK(bytes[0] == 0x02);
}

TEST_CASE("rerr length is 4 + 8 per destination") {
    wire::Rerr m;
    m.destinations = {{7, 12}, {9, 3}};
    auto bytes = wire::encode(m);
    CHECK(bytes.size() == 20);
    CHECK(bytes[0] == 0x03);
    CHECK(bytes[3] == 2); // dest_count
}

TEST_CASE("golden vectors decode and re-encode byte-for-byte") {
    auto vectors = load_golden_vectors();
    REQUIRE(vectors.size() == 6);
    for (const auto& [name, bytes] : vectors) {
        CAPTURE(name);
        wire::Message msg = wire::decode(bytes);
        CHECK(wire::encode(msg) == bytes);
        CHECK(wire::encoded_size(msg) == bytes.size());
    }

    auto rreq = std::get<wire::Rreq>(wire::decode(vectors.at("rreq_cost")));
    CHECK(rreq.flags.gratuitous);
    CHECK(rreq.flags.dest_only);
    CHECK(rreq.hop_count == 2);
    CHECK(rreq.rreq_id == 7);
    CHECK(rreq.acc_cost_mm == 123456u);

    auto rrep = std::get<wire::Rrep>(wire::decode(vectors.at("rrep_cost")));
    CHECK(rrep.flags.ack_required);
    CHECK(rrep.prefix_size == 3);
    CHECK(rrep.lifetime_ms == 2500);
    CHECK(rrep.acc_cost_mm == 250000u);

    auto rerr = std::get<wire::Rerr>(wire::decode(vectors.at("rerr_two_dests")));
    REQUIRE(rerr.destinations.size() == 2);
    CHECK(rerr.destinations[0] == wire::RerrDest{7, 12});
    CHECK(rerr.destinations[1] == wire::RerrDest{9, 3});

    auto hello = std::get<wire::Hello>(wire::decode(vectors.at("hello")));
    CHECK(hello == wire::Hello{4, 9, 2000});
}

TEST_CASE("hello travels as an rrep to itself with hop count zero") {
    wire::Hello h{42, 17, 2000};
    auto bytes = wire::encode(h);
    CHECK(bytes.size() == 20);
    CHECK(bytes[0] == 0x02);
    CHECK(std::get<wire::Hello>(wire::decode(bytes)) == h);
}

TEST_CASE("round trip holds over randomized messages") {
    Rng rng(0x5eed);
    for (int i = 0; i < 2000; ++i) {
        wire::Message m = testgen::random_message(rng);
        auto bytes = wire::encode(m);
        CHECK(wire::decode(bytes) == m);
        CHECK(wire::encode(wire::decode(bytes)) == bytes);
    }
}

TEST_CASE("unknown type byte is rejected") {
    std::vector<std::uint8_t> bytes(24, 0);
    bytes[0] = 0x07;
    CHECK(fault_of([&] { wire::decode(bytes); }) == CodecFault::UnknownType);
}

TEST_CASE("truncated inputs are rejected") {
    wire::Rreq rreq;
    auto bytes = wire::encode(wire::Message{rreq});
    bytes.resize(23);
    CHECK(fault_of([&] { wire::decode(bytes); }) == CodecFault::Truncated);

    std::vector<std::uint8_t> rrep(19, 0);
    rrep[0] = 0x02;
    CHECK(fault_of([&] { wire::decode(rrep); }) == CodecFault::Truncated);

    std::vector<std::uint8_t> rerr(4, 0);
    rerr[0] = 0x03;
    rerr[3] = 1;
    CHECK(fault_of([&] { wire::decode(rerr); }) == CodecFault::Truncated);

    // Advertised count larger than the body.
    std::vector<std::uint8_t> short_rerr(12, 0);
    short_rerr[0] = 0x03;
    short_rerr[3] = 2;
    CHECK(fault_of([&] { wire::decode(short_rerr); }) == CodecFault::Truncated);
}

TEST_CASE("lengths between baseline and extended are trailing garbage") {
    wire::Rreq rreq;
    auto bytes = wire::encode(wire::Message{rreq});
    for (std::size_t len : {25u, 26u, 27u}) {
        auto padded = bytes;
        padded.resize(len, 0);
        CAPTURE(len);
        CHECK(fault_of([&] { wire::decode(padded); }) == CodecFault::TrailingGarbage);
    }
    auto extended = bytes;
    extended.resize(29, 0);
    CHECK(fault_of([&] { wire::decode(extended); }) == CodecFault::TrailingGarbage);

    // RERR whose length exceeds 4 + 8 * dest_count.
    wire::Rerr rerr;
    rerr.destinations = {{1, 2}};
    auto rerr_bytes = wire::encode(wire::Message{rerr});
    rerr_bytes.resize(rerr_bytes.size() + 8, 0);
    CHECK(fault_of([&] { wire::decode(rerr_bytes); }) == CodecFault::TrailingGarbage);
}

TEST_CASE("field overflow is rejected on encode") {
    wire::Rreq rreq;
    rreq.hop_count = 256;
    CHECK(fault_of([&] { wire::encode(wire::Message{rreq}); }) == CodecFault::FieldOverflow);

    wire::Rrep rrep;
    rrep.dest_addr = 1; // keep clear of the hello shape
    rrep.prefix_size = 32;
    CHECK(fault_of([&] { wire::encode(wire::Message{rrep}); }) == CodecFault::FieldOverflow);

    wire::Rerr empty;
    CHECK(fault_of([&] { wire::encode(wire::Message{empty}); }) == CodecFault::FieldOverflow);

    wire::Rerr oversized;
    oversized.destinations.resize(256, wire::RerrDest{1, 1});
    CHECK(fault_of([&] { wire::encode(wire::Message{oversized}); }) ==
          CodecFault::FieldOverflow);
}

TEST_CASE("reserved bits are ignored on decode and zeroed on re-encode") {
    wire::Rreq m;
    m.rreq_id = 3;
    m.dest_addr = 9;
    auto bytes = wire::encode(wire::Message{m});
    auto dirty = bytes;
    dirty[1] |= 0x07; // low three reserved flag bits
    dirty[2] = 0xff;  // full reserved byte
    CHECK(wire::decode(dirty) == wire::Message{m});
    CHECK(wire::encode(wire::decode(dirty)) == bytes);
}

} // TEST_SUITE
