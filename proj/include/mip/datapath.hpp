#ifndef MIP_DATAPATH_HPP
#define MIP_DATAPATH_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mip/bytes.hpp"
#include "mip/types.hpp"

namespace mip::datapath {

constexpr std::uint8_t PROTO_IPIP = 4;    // IP-in-IP tunnel
constexpr std::uint8_t PROTO_MIP = 17;    // registration signaling
constexpr std::uint8_t PROTO_DATA = 253;  // application datagrams

struct IpPacket {
    Ipv4 src, dst;
    std::uint8_t protocol = PROTO_DATA;
    // Simulation audit field, not wire data: grows by exactly one entry per
    // forwarding node and survives encapsulation/decapsulation.
    std::vector<NodeId> hop_trace;
    Bytes payload;

    bool operator==(const IpPacket&) const = default;
};

class TunnelError : public std::runtime_error {
public:
    enum class Kind { NestedTunnel, NotTunneled, Truncated };
    TunnelError(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    Kind kind;
};

// Wire form: src(4) dst(4) protocol(1) payload. hop_trace is not encoded.
Bytes encode_packet(const IpPacket& pkt);
IpPacket decode_packet(ByteView raw);  // TunnelError(Truncated) under 9 octets

// Wraps pkt in an outer protocol-4 packet whose payload is the full encoding
// of pkt; the hop trace carries over. Nested tunnels are refused.
IpPacket encapsulate(const IpPacket& pkt, Ipv4 tunnel_src, Ipv4 tunnel_dst);

// Exact inverse: returns the inner packet, with the outer packet's
// (longer) hop trace preserved.
IpPacket decapsulate(const IpPacket& outer);

enum class NodeRole : std::uint8_t { MN, FA, HA, CN, Router, Attacker };

const char* to_string(NodeRole role);
std::optional<NodeRole> parse_role(std::string_view text);

enum class DropReason : std::uint8_t { NoRoute, Expired };

const char* to_string(DropReason r);

// One node's routing knowledge about one packet, assembled by the simulator
// from immutable table snapshots.
struct ForwardView {
    NodeRole role = NodeRole::Router;
    bool dst_is_self = false;
    std::optional<Ipv4> binding_coa;          // HA: live binding for dst
    bool binding_expired = false;             // HA: binding present but lapsed
    std::optional<NodeId> visitor_link;       // FA: promoted visitor owning dst
    std::optional<NodeId> local_node;         // dst owner attached to this subnet
    std::optional<NodeId> local_agent;        // this subnet's agent (MN first hop)
    std::optional<NodeId> gateway;            // agent of dst's home subnet (never self)
    std::optional<NodeId> owner_direct;       // dst owner, reachable directly (agentless subnet)
};

struct ForwardAction {
    enum class Kind { DeliverLocal, Forward, Encapsulate, Decapsulate, Drop };
    Kind kind = Kind::Drop;
    NodeId next;                        // Forward
    Ipv4 tunnel_dst;                    // Encapsulate
    DropReason drop_reason = DropReason::NoRoute;

    static ForwardAction deliver() { return {Kind::DeliverLocal, {}, {}, {}}; }
    static ForwardAction forward(NodeId n) { return {Kind::Forward, std::move(n), {}, {}}; }
    static ForwardAction encapsulate(Ipv4 coa) { return {Kind::Encapsulate, {}, coa, {}}; }
    static ForwardAction decapsulate() { return {Kind::Decapsulate, {}, {}, {}}; }
    static ForwardAction drop(DropReason r) { return {Kind::Drop, {}, {}, r}; }

    bool operator==(const ForwardAction&) const = default;
};

// Pure forwarding decision. Priority: local delivery / detunneling, HA
// interception toward the care-of address, FA visitor delivery, same-subnet
// delivery, MN default route via its agent, home-subnet gateway, direct
// reach, drop. MN-to-CN traffic never touches the HA; that asymmetry is the
// triangle route.
ForwardAction forward(const ForwardView& view, const IpPacket& pkt);

}  // namespace mip::datapath

#endif
