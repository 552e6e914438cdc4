#ifndef MIP_AGENTS_HPP
#define MIP_AGENTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mip/secassoc.hpp"
#include "mip/types.hpp"
#include "mip/wire.hpp"

namespace mip::agents {

// Registration reply codes (octet 1 of the RRP). Normative and bit-exact.
constexpr std::uint8_t CODE_ACCEPT = 0;
constexpr std::uint8_t CODE_FA_MN_AUTH_FAIL = 67;   // FA: MN failed authentication
constexpr std::uint8_t CODE_FA_BAD_REQUEST = 70;    // FA: poorly formed request
constexpr std::uint8_t CODE_HA_MN_AUTH_FAIL = 131;  // HA: MN failed authentication
constexpr std::uint8_t CODE_HA_FA_AUTH_FAIL = 132;  // HA: FA failed authentication
constexpr std::uint8_t CODE_HA_ID_MISMATCH = 133;   // HA: identification mismatch
constexpr std::uint8_t CODE_HA_BAD_REQUEST = 134;   // HA: poorly formed request

constexpr bool is_fa_error_code(std::uint8_t code) { return code >= 64 && code < 128; }

struct MobilityBinding {
    Ipv4 home_address;
    Ipv4 care_of_address;
    SimTime expires_at;
    std::uint32_t spi_used = 0;

    bool operator==(const MobilityBinding&) const = default;
};

struct VisitorEntry {
    Ipv4 home_address;
    Ipv4 home_agent;
    NodeId mn_link;          // node the RRQ arrived from
    SimTime expires_at;
    std::uint64_t pending_id = 0;
    bool promoted = false;   // true once an accepting RRP passed through

    bool operator==(const VisitorEntry&) const = default;
};

// Last accepted identification per home address; accepted values are
// strictly increasing.
class ReplayGuard {
public:
    bool is_fresh(Ipv4 home, std::uint64_t id) const {
        auto it = last_.find(home);
        return it == last_.end() || id > it->second;
    }
    void accept(Ipv4 home, std::uint64_t id) { last_[home] = id; }
    std::optional<std::uint64_t> last(Ipv4 home) const {
        auto it = last_.find(home);
        if (it == last_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<Ipv4, std::uint64_t> last_;
};

/// Mobile Node registration state machine. The home address never changes;
/// only the point of attachment (care-of address) does.
class MobileNode {
public:
    enum class Phase { AtHome, Pending, Registered, Deregistering };

    MobileNode(Ipv4 home_address, Ipv4 home_agent, sa::SecurityContext mn_ha_context);

    // Builds a signed RRQ and arms the pending state. Identification is
    // <whole seconds of now><per-MN sequence>; lifetime 0 deregisters.
    wire::RegistrationMessage compose_rrq(Ipv4 care_of_address, std::uint16_t lifetime,
                                          SimTime now);

    // Retry after code 133: same care-of address and lifetime, identification
    // high bits taken from the home agent's reply.
    wire::RegistrationMessage compose_rrq_resync(std::uint32_t ha_seconds);

    struct Event {
        enum class Kind { Registered, Deregistered, Resync, Denied, Ignored };
        enum class IgnoreReason { BadAuth, NoPending };

        Kind kind;
        std::uint8_t code = 0;             // reply code (Denied / accepted)
        IgnoreReason ignore_reason = IgnoreReason::NoPending;
        std::uint32_t resync_seconds = 0;  // Resync only
    };

    Event handle_rrp(const wire::RegistrationMessage& msg, SimTime now);

    // Move away mid-registration: the reply can no longer reach us.
    void abort_pending();

    Phase phase() const { return phase_; }
    Ipv4 home_address() const { return home_; }
    Ipv4 home_agent() const { return home_agent_; }
    Ipv4 registered_coa() const { return reg_coa_; }
    Ipv4 pending_destination() const { return pending_coa_; }
    SimTime registered_until() const { return reg_expires_; }
    const sa::SecurityContext& context() const { return ctx_; }

private:
    Ipv4 home_;
    Ipv4 home_agent_;
    sa::SecurityContext ctx_;

    Phase phase_ = Phase::AtHome;
    std::uint32_t seq_ = 0;
    std::uint64_t pending_id_ = 0;
    Ipv4 pending_coa_;
    std::uint16_t pending_lifetime_ = 0;
    Ipv4 reg_coa_;
    SimTime reg_expires_;
};

/// Foreign Agent: relays registrations, keeps the visitor list.
class ForeignAgent {
public:
    explicit ForeignAgent(Ipv4 addr) : addr_(addr) {}

    struct RrqOutcome {
        enum class Kind { Forward, Denial };
        Kind kind;
        wire::RegistrationMessage msg;  // RRQ to forward, or the denial RRP
        std::uint8_t code = 0;          // denial code (67/70)
        Ipv4 home_agent;                // forward target
    };

    // Decodes and relays an RRQ that arrived from `from_link`. A decode
    // failure denies with 70; a failed MFAE (when an MN-FA context is
    // configured and the extension is present) denies with 67. Otherwise an
    // FHAE is appended when an FA-HA context exists and a pending visitor
    // entry is recorded.
    RrqOutcome relay_rrq(ByteView raw, const NodeId& from_link, SimTime now,
                         const sa::SecurityAssociationStore& store);

    struct RrpOutcome {
        enum class Kind { Forward, Drop };
        Kind kind;
        wire::RegistrationMessage msg;  // RRP with the FHAE stripped
        NodeId mn_link;
        const char* drop_reason = nullptr;
    };

    // Verifies the FHAE on a reply (when an FA-HA context exists), strips
    // it, and targets the pending visitor's link. Accepting replies promote
    // the visitor entry; definitive denials discard it (133 keeps it).
    RrpOutcome relay_rrp(const wire::RegistrationMessage& msg, SimTime now,
                         const sa::SecurityAssociationStore& store);

    std::vector<VisitorEntry> expire_visitors(SimTime now);

    // Promoted visitor reachable for datapath delivery.
    std::optional<NodeId> visitor_link(Ipv4 home) const;
    std::optional<VisitorEntry> visitor(Ipv4 home) const;
    // Link-layer departure; returns the removed entry if one existed.
    std::optional<VisitorEntry> remove_visitor(Ipv4 home);
    std::size_t visitor_count() const { return visitors_.size(); }

    Ipv4 addr() const { return addr_; }

private:
    Ipv4 addr_;
    std::map<Ipv4, VisitorEntry> visitors_;
};

/// Home Agent: authenticates RRQs, enforces replay protection, owns the
/// mobility binding table.
class HomeAgent {
public:
    explicit HomeAgent(Ipv4 addr) : addr_(addr) {}

    struct Decision {
        std::uint8_t code = CODE_HA_BAD_REQUEST;
        const char* reason = "";  // ok|dereg|missing_mhae|unknown_spi|mn_auth|fa_auth|replay|malformed
        wire::RegistrationMessage rrp;
        bool binding_changed = false;
        std::optional<MobilityBinding> installed;
        bool deregistered = false;
        Ipv4 home;  // home address involved (0.0.0.0 when undecodable)
    };

    // Full HA-side processing of a raw RRQ: FHAE (when the packet source has
    // an FA-HA association with us), then MHAE, then replay/timestamp check,
    // then binding install/refresh/delete. Always produces a reply; the
    // reply carries an MHAE whenever the MN-HA context is resolvable and an
    // FHAE when the request came through an authenticated FA.
    Decision process_rrq(ByteView raw, Ipv4 pkt_src, SimTime now,
                         const sa::SecurityAssociationStore& store);

    std::vector<MobilityBinding> expire_bindings(SimTime now);

    enum class BindingState { None, Live, Expired };
    BindingState binding_state(Ipv4 home, SimTime now) const;
    const MobilityBinding* live_binding(Ipv4 home, SimTime now) const;
    const std::map<Ipv4, MobilityBinding>& bindings() const { return bindings_; }

    // Handoff support: the stale-link notice removes the binding (guarded by
    // its care-of address) and marks the home address suspended until the
    // next successful registration or deregistration.
    bool suspend_binding(Ipv4 home, Ipv4 stale_coa);
    bool is_suspended(Ipv4 home) const { return suspended_.contains(home); }

    const ReplayGuard& replay_guard() const { return replay_; }
    Ipv4 addr() const { return addr_; }

private:
    Ipv4 addr_;
    std::map<Ipv4, MobilityBinding> bindings_;
    ReplayGuard replay_;
    std::set<Ipv4> suspended_;
};

}  // namespace mip::agents

#endif
