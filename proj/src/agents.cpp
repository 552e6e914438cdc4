#include "mip/agents.hpp"

#include <cstdlib>

namespace mip::agents {

using wire::RegistrationMessage;
using wire::RegistrationReply;
using wire::RegistrationRequest;

// ---------------------------------------------------------------- MobileNode

MobileNode::MobileNode(Ipv4 home_address, Ipv4 home_agent, sa::SecurityContext mn_ha_context)
    : home_(home_address), home_agent_(home_agent), ctx_(std::move(mn_ha_context)) {}

wire::RegistrationMessage MobileNode::compose_rrq(Ipv4 care_of_address, std::uint16_t lifetime,
                                                  SimTime now) {
    RegistrationRequest rrq;
    rrq.lifetime = lifetime;
    rrq.home_address = home_;
    rrq.home_agent = home_agent_;
    rrq.care_of_address = care_of_address;
    rrq.identification =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(now.whole_seconds())) << 32) |
        ++seq_;

    RegistrationMessage msg;
    msg.body = rrq;
    sa::sign(msg, ctx_, wire::EXT_MHAE);

    phase_ = lifetime == 0 ? Phase::Deregistering : Phase::Pending;
    pending_id_ = rrq.identification;
    pending_coa_ = care_of_address;
    pending_lifetime_ = lifetime;
    return msg;
}

wire::RegistrationMessage MobileNode::compose_rrq_resync(std::uint32_t ha_seconds) {
    RegistrationRequest rrq;
    rrq.lifetime = pending_lifetime_;
    rrq.home_address = home_;
    rrq.home_agent = home_agent_;
    rrq.care_of_address = pending_coa_;
    rrq.identification = (static_cast<std::uint64_t>(ha_seconds) << 32) | ++seq_;

    RegistrationMessage msg;
    msg.body = rrq;
    sa::sign(msg, ctx_, wire::EXT_MHAE);
    pending_id_ = rrq.identification;
    return msg;
}

MobileNode::Event MobileNode::handle_rrp(const wire::RegistrationMessage& msg, SimTime now) {
    if (msg.is_request()) {
        return {Event::Kind::Ignored, 0, Event::IgnoreReason::NoPending, 0};
    }
    if (phase_ != Phase::Pending && phase_ != Phase::Deregistering) {
        return {Event::Kind::Ignored, 0, Event::IgnoreReason::NoPending, 0};
    }
    const RegistrationReply& rrp = msg.reply();

    // FA-originated denials carry no MN-HA authenticator (the FA has no such
    // key); they are advisory. Everything else must verify.
    if (!is_fa_error_code(rrp.code)) {
        if (!sa::verify_with_context(msg, ctx_, wire::EXT_MHAE).accepted()) {
            return {Event::Kind::Ignored, rrp.code, Event::IgnoreReason::BadAuth, 0};
        }
    }

    if ((rrp.identification & 0xffffffffULL) != (pending_id_ & 0xffffffffULL)) {
        return {Event::Kind::Ignored, rrp.code, Event::IgnoreReason::NoPending, 0};
    }

    if (rrp.accepted()) {
        if (phase_ == Phase::Deregistering) {
            phase_ = Phase::AtHome;
            reg_coa_ = Ipv4();
            return {Event::Kind::Deregistered, rrp.code, Event::IgnoreReason::NoPending, 0};
        }
        phase_ = Phase::Registered;
        reg_coa_ = pending_coa_;
        reg_expires_ = now + SimTime::seconds(rrp.lifetime);
        return {Event::Kind::Registered, rrp.code, Event::IgnoreReason::NoPending, 0};
    }

    if (rrp.code == CODE_HA_ID_MISMATCH) {
        return {Event::Kind::Resync, rrp.code, Event::IgnoreReason::NoPending,
                static_cast<std::uint32_t>(rrp.identification >> 32)};
    }

    phase_ = Phase::AtHome;  // unregistered; a later beacon may retry
    return {Event::Kind::Denied, rrp.code, Event::IgnoreReason::NoPending, 0};
}

void MobileNode::abort_pending() {
    if (phase_ == Phase::Pending || phase_ == Phase::Deregistering) phase_ = Phase::AtHome;
}

// -------------------------------------------------------------- ForeignAgent

ForeignAgent::RrqOutcome ForeignAgent::relay_rrq(ByteView raw, const NodeId& from_link,
                                                 SimTime now,
                                                 const sa::SecurityAssociationStore& store) {
    RegistrationMessage msg;
    try {
        msg = wire::decode_message(raw);
    } catch (const wire::CodecError&) {
        RrqOutcome denial;
        denial.kind = RrqOutcome::Kind::Denial;
        denial.code = CODE_FA_BAD_REQUEST;
        RegistrationReply rrp;
        rrp.code = CODE_FA_BAD_REQUEST;
        denial.msg.body = rrp;
        return denial;
    }
    if (!msg.is_request()) {
        RrqOutcome denial;
        denial.kind = RrqOutcome::Kind::Denial;
        denial.code = CODE_FA_BAD_REQUEST;
        RegistrationReply rrp;
        rrp.code = CODE_FA_BAD_REQUEST;
        denial.msg.body = rrp;
        return denial;
    }

    const RegistrationRequest& rrq = msg.request();
    sa::PeerPair mn_fa(sa::RolePair::MnFa, rrq.home_address, addr_);
    if (store.has_association(mn_fa) && wire::find_last_auth(msg, wire::EXT_MFAE) >= 0) {
        if (!sa::verify(msg, store, mn_fa, wire::EXT_MFAE).accepted()) {
            RrqOutcome denial;
            denial.kind = RrqOutcome::Kind::Denial;
            denial.code = CODE_FA_MN_AUTH_FAIL;
            RegistrationReply rrp;
            rrp.code = CODE_FA_MN_AUTH_FAIL;
            rrp.lifetime = rrq.lifetime;
            rrp.home_address = rrq.home_address;
            rrp.home_agent = rrq.home_agent;
            rrp.identification = rrq.identification;
            denial.msg.body = rrp;
            return denial;
        }
    }

    sa::PeerPair fa_ha(sa::RolePair::FaHa, addr_, rrq.home_agent);
    if (const sa::SecurityContext* ctx = store.first_context(fa_ha)) {
        sa::sign(msg, *ctx, wire::EXT_FHAE);
    }

    VisitorEntry entry;
    entry.home_address = rrq.home_address;
    entry.home_agent = rrq.home_agent;
    entry.mn_link = from_link;
    // Pending entries live for the requested lifetime; deregistrations get a
    // short grace window for the reply to pass back through.
    entry.expires_at = now + SimTime::seconds(rrq.lifetime > 0 ? rrq.lifetime : 7);
    entry.pending_id = rrq.identification;
    entry.promoted = false;
    visitors_[rrq.home_address] = entry;

    RrqOutcome fwd;
    fwd.kind = RrqOutcome::Kind::Forward;
    fwd.msg = std::move(msg);
    fwd.home_agent = rrq.home_agent;
    return fwd;
}

ForeignAgent::RrpOutcome ForeignAgent::relay_rrp(const wire::RegistrationMessage& msg,
                                                 SimTime now,
                                                 const sa::SecurityAssociationStore& store) {
    RrpOutcome out;
    if (msg.is_request()) {
        out.kind = RrpOutcome::Kind::Drop;
        out.drop_reason = "not_a_reply";
        return out;
    }
    const RegistrationReply& rrp = msg.reply();

    sa::PeerPair fa_ha(sa::RolePair::FaHa, addr_, rrp.home_agent);
    wire::RegistrationMessage stripped = msg;
    if (store.has_association(fa_ha)) {
        if (!sa::verify(msg, store, fa_ha, wire::EXT_FHAE).accepted()) {
            out.kind = RrpOutcome::Kind::Drop;
            out.drop_reason = "fa_auth_failed";
            return out;
        }
        int idx = wire::find_last_auth(stripped, wire::EXT_FHAE);
        stripped.extensions.erase(stripped.extensions.begin() + idx);
    }

    auto it = visitors_.find(rrp.home_address);
    if (it == visitors_.end()) {
        out.kind = RrpOutcome::Kind::Drop;
        out.drop_reason = "no_visitor";
        return out;
    }

    out.kind = RrpOutcome::Kind::Forward;
    out.msg = std::move(stripped);
    out.mn_link = it->second.mn_link;

    if (rrp.accepted()) {
        if (rrp.lifetime > 0) {
            it->second.promoted = true;
            it->second.expires_at = now + SimTime::seconds(rrp.lifetime);
        } else {
            visitors_.erase(it);  // accepted deregistration
        }
    } else if (rrp.code != CODE_HA_ID_MISMATCH) {
        visitors_.erase(it);  // definitive denial; 133 keeps the entry for the retry
    }
    return out;
}

std::vector<VisitorEntry> ForeignAgent::expire_visitors(SimTime now) {
    std::vector<VisitorEntry> removed;
    for (auto it = visitors_.begin(); it != visitors_.end();) {
        if (it->second.expires_at <= now) {
            removed.push_back(it->second);
            it = visitors_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

std::optional<NodeId> ForeignAgent::visitor_link(Ipv4 home) const {
    auto it = visitors_.find(home);
    if (it == visitors_.end() || !it->second.promoted) return std::nullopt;
    return it->second.mn_link;
}

std::optional<VisitorEntry> ForeignAgent::visitor(Ipv4 home) const {
    auto it = visitors_.find(home);
    if (it == visitors_.end()) return std::nullopt;
    return it->second;
}

std::optional<VisitorEntry> ForeignAgent::remove_visitor(Ipv4 home) {
    auto it = visitors_.find(home);
    if (it == visitors_.end()) return std::nullopt;
    VisitorEntry entry = it->second;
    visitors_.erase(it);
    return entry;
}

// ----------------------------------------------------------------- HomeAgent

HomeAgent::Decision HomeAgent::process_rrq(ByteView raw, Ipv4 pkt_src, SimTime now,
                                           const sa::SecurityAssociationStore& store) {
    Decision d;

    RegistrationMessage msg;
    bool decoded = true;
    try {
        msg = wire::decode_message(raw);
    } catch (const wire::CodecError&) {
        decoded = false;
    }
    if (!decoded || !msg.is_request()) {
        d.code = CODE_HA_BAD_REQUEST;
        d.reason = "malformed";
        RegistrationReply rrp;
        rrp.code = d.code;
        rrp.home_agent = addr_;
        d.rrp.body = rrp;  // nothing to echo, nothing to sign with
        return d;
    }

    const RegistrationRequest& rrq = msg.request();
    d.home = rrq.home_address;

    RegistrationReply rrp;
    rrp.lifetime = rrq.lifetime;
    rrp.home_address = rrq.home_address;
    rrp.home_agent = rrq.home_agent;
    rrp.identification = rrq.identification;

    // The MN-HA context named by the request's MHAE, used both for
    // verification and for signing the reply.
    sa::PeerPair mn_ha(sa::RolePair::MnHa, rrq.home_address, addr_);
    const sa::SecurityContext* reply_ctx = nullptr;
    if (int idx = wire::find_last_auth(msg, wire::EXT_MHAE); idx >= 0) {
        const auto& mhae = std::get<wire::AuthExtension>(msg.extensions[static_cast<std::size_t>(idx)]);
        reply_ctx = store.find(mn_ha, mhae.spi);
    }

    sa::PeerPair fa_ha(sa::RolePair::FaHa, pkt_src, addr_);
    bool via_fa = store.has_association(fa_ha);

    auto finish = [&](std::uint8_t code, const char* reason) {
        d.code = code;
        d.reason = reason;
        rrp.code = code;
        d.rrp.body = rrp;
        if (reply_ctx) sa::sign(d.rrp, *reply_ctx, wire::EXT_MHAE);
        if (via_fa) {
            if (const sa::SecurityContext* fa_ctx = store.first_context(fa_ha)) {
                sa::sign(d.rrp, *fa_ctx, wire::EXT_FHAE);
            }
        }
        return d;
    };

    if (via_fa) {
        if (!sa::verify(msg, store, fa_ha, wire::EXT_FHAE).accepted()) {
            return finish(CODE_HA_FA_AUTH_FAIL, "fa_auth");
        }
    }

    sa::VerifyResult mn = sa::verify(msg, store, mn_ha, wire::EXT_MHAE);
    if (!mn.accepted()) {
        const char* reason = "mn_auth";
        if (mn.reason == sa::RejectReason::MissingExtension) reason = "missing_mhae";
        if (mn.reason == sa::RejectReason::UnknownSpi) reason = "unknown_spi";
        return finish(CODE_HA_MN_AUTH_FAIL, reason);
    }

    // Replay protection: timestamp window per the context's policy, plus
    // unconditional monotonicity of accepted identifications.
    bool fresh = replay_.is_fresh(rrq.home_address, rrq.identification);
    if (fresh && reply_ctx->replay.method == sa::ReplayMethod::Timestamps) {
        auto id_seconds = static_cast<std::int64_t>(rrq.identification >> 32);
        std::int64_t skew = std::llabs(now.whole_seconds() - id_seconds);
        fresh = skew <= reply_ctx->replay.window_s;
    }
    if (!fresh) {
        // Resynchronization: our clock in the high bits, the request's low
        // bits echoed so the MN can match the reply to its attempt.
        rrp.identification =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(now.whole_seconds())) << 32) |
            (rrq.identification & 0xffffffffULL);
        return finish(CODE_HA_ID_MISMATCH, "replay");
    }

    replay_.accept(rrq.home_address, rrq.identification);
    suspended_.erase(rrq.home_address);

    if (rrq.lifetime == 0) {
        d.binding_changed = bindings_.erase(rrq.home_address) > 0;
        d.deregistered = true;
        return finish(CODE_ACCEPT, "dereg");
    }

    MobilityBinding binding;
    binding.home_address = rrq.home_address;
    binding.care_of_address = rrq.care_of_address;
    binding.expires_at = now + SimTime::seconds(rrq.lifetime);
    binding.spi_used = reply_ctx->spi;
    bindings_[rrq.home_address] = binding;
    d.binding_changed = true;
    d.installed = binding;
    return finish(CODE_ACCEPT, "ok");
}

std::vector<MobilityBinding> HomeAgent::expire_bindings(SimTime now) {
    std::vector<MobilityBinding> removed;
    for (auto it = bindings_.begin(); it != bindings_.end();) {
        if (it->second.expires_at <= now) {
            removed.push_back(it->second);
            it = bindings_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

HomeAgent::BindingState HomeAgent::binding_state(Ipv4 home, SimTime now) const {
    auto it = bindings_.find(home);
    if (it == bindings_.end()) return BindingState::None;
    return it->second.expires_at > now ? BindingState::Live : BindingState::Expired;
}

const MobilityBinding* HomeAgent::live_binding(Ipv4 home, SimTime now) const {
    auto it = bindings_.find(home);
    if (it == bindings_.end() || it->second.expires_at <= now) return nullptr;
    return &it->second;
}

bool HomeAgent::suspend_binding(Ipv4 home, Ipv4 stale_coa) {
    auto it = bindings_.find(home);
    if (it == bindings_.end() || it->second.care_of_address != stale_coa) return false;
    bindings_.erase(it);
    suspended_.insert(home);
    return true;
}

}  // namespace mip::agents
