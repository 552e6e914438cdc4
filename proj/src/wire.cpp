#include "mip/wire.hpp"

namespace mip::wire {

namespace {

[[noreturn]] void fail(CodecErr kind, std::size_t offset, const std::string& what) {
    throw CodecError(kind, offset, what + " (offset " + std::to_string(offset) + ")");
}

void encode_fixed(const RegistrationMessage& msg, Bytes& out) {
    if (msg.is_request()) {
        const auto& rrq = msg.request();
        put_u8(out, MIP_TYPE_RRQ);
        put_u8(out, rrq.flags);
        put_u16(out, rrq.lifetime);
        put_u32(out, rrq.home_address.v);
        put_u32(out, rrq.home_agent.v);
        put_u32(out, rrq.care_of_address.v);
        put_u64(out, rrq.identification);
    } else {
        const auto& rrp = msg.reply();
        put_u8(out, MIP_TYPE_RRP);
        put_u8(out, rrp.code);
        put_u16(out, rrp.lifetime);
        put_u32(out, rrp.home_address.v);
        put_u32(out, rrp.home_agent.v);
        put_u64(out, rrp.identification);
    }
}

// Header through SPI; for auth extensions this is exactly the part of the
// extension its own authenticator covers.
void encode_auth_header(const AuthExtension& ext, Bytes& out) {
    if (ext.ext_type == EXT_GNAE) {
        std::size_t length = 4 + ext.authenticator.size();
        if (length > 0xffff) {
            fail(CodecErr::OversizeExtension, out.size(), "GNAE authenticator too large");
        }
        put_u8(out, ext.ext_type);
        put_u8(out, ext.subtype.value_or(GNAE_SUBTYPE_MN_AAA));
        put_u16(out, static_cast<std::uint16_t>(length));
    } else {
        std::size_t length = 4 + ext.authenticator.size();
        if (length > 0xff) {
            fail(CodecErr::OversizeExtension, out.size(), "authenticator too large");
        }
        put_u8(out, ext.ext_type);
        put_u8(out, static_cast<std::uint8_t>(length));
    }
    put_u32(out, ext.spi);
}

void encode_extension(const AnyExtension& any, Bytes& out) {
    if (const auto* auth = std::get_if<AuthExtension>(&any)) {
        encode_auth_header(*auth, out);
        out.insert(out.end(), auth->authenticator.begin(), auth->authenticator.end());
    } else {
        const auto& ext = std::get<Extension>(any);
        if (ext.payload.size() > 0xff) {
            fail(CodecErr::OversizeExtension, out.size(), "extension payload too large");
        }
        put_u8(out, ext.ext_type);
        put_u8(out, static_cast<std::uint8_t>(ext.payload.size()));
        out.insert(out.end(), ext.payload.begin(), ext.payload.end());
    }
}

AnyExtension decode_extension(ByteView raw, std::size_t& off) {
    std::uint8_t t = raw[off];
    if (t == EXT_GNAE) {
        if (off + 4 > raw.size()) fail(CodecErr::Truncated, off, "generalized extension header");
        std::uint8_t subtype = raw[off + 1];
        std::uint16_t length = read_u16(raw, off + 2);
        if (length < 4) fail(CodecErr::Truncated, off + 2, "auth extension shorter than its SPI");
        if (off + 4 + length > raw.size()) fail(CodecErr::Truncated, off + 2, "extension body");
        AuthExtension ext;
        ext.ext_type = t;
        ext.subtype = subtype;
        ext.spi = read_u32(raw, off + 4);
        ext.authenticator.assign(raw.begin() + off + 8, raw.begin() + off + 4 + length);
        off += 4 + length;
        return ext;
    }
    if (off + 2 > raw.size()) fail(CodecErr::Truncated, off, "extension header");
    std::uint8_t length = raw[off + 1];
    if (is_auth_ext_type(t)) {
        if (length < 4) fail(CodecErr::Truncated, off + 1, "auth extension shorter than its SPI");
        if (off + 2 + length > raw.size()) fail(CodecErr::Truncated, off + 1, "extension body");
        AuthExtension ext;
        ext.ext_type = t;
        ext.spi = read_u32(raw, off + 2);
        ext.authenticator.assign(raw.begin() + off + 6, raw.begin() + off + 2 + length);
        off += 2 + length;
        return ext;
    }
    if (off + 2 + length > raw.size()) fail(CodecErr::Truncated, off + 1, "extension body");
    Extension ext;
    ext.ext_type = t;
    ext.payload.assign(raw.begin() + off + 2, raw.begin() + off + 2 + length);
    off += 2 + length;
    return ext;
}

}  // namespace

const char* ext_type_name(std::uint8_t t) {
    switch (t) {
        case EXT_MHAE: return "MHAE";
        case EXT_MFAE: return "MFAE";
        case EXT_FHAE: return "FHAE";
        case EXT_GNAE: return "GNAE";
        default: return "EXT";
    }
}

Bytes encode_message(const RegistrationMessage& msg) {
    Bytes out;
    out.reserve(64);
    encode_fixed(msg, out);
    for (const auto& ext : msg.extensions) encode_extension(ext, out);
    return out;
}

RegistrationMessage decode_message(ByteView raw) {
    if (raw.empty()) fail(CodecErr::Truncated, 0, "empty message");

    RegistrationMessage msg;
    std::size_t off = 0;
    if (raw[0] == MIP_TYPE_RRQ) {
        if (raw.size() < RRQ_FIXED_LEN) fail(CodecErr::Truncated, raw.size(), "RRQ fixed part");
        RegistrationRequest rrq;
        rrq.flags = raw[1];
        rrq.lifetime = read_u16(raw, 2);
        rrq.home_address = Ipv4(read_u32(raw, 4));
        rrq.home_agent = Ipv4(read_u32(raw, 8));
        rrq.care_of_address = Ipv4(read_u32(raw, 12));
        rrq.identification = read_u64(raw, 16);
        msg.body = rrq;
        off = RRQ_FIXED_LEN;
    } else if (raw[0] == MIP_TYPE_RRP) {
        if (raw.size() < RRP_FIXED_LEN) fail(CodecErr::Truncated, raw.size(), "RRP fixed part");
        RegistrationReply rrp;
        rrp.code = raw[1];
        rrp.lifetime = read_u16(raw, 2);
        rrp.home_address = Ipv4(read_u32(raw, 4));
        rrp.home_agent = Ipv4(read_u32(raw, 8));
        rrp.identification = read_u64(raw, 12);
        msg.body = rrp;
        off = RRP_FIXED_LEN;
    } else {
        fail(CodecErr::UnknownMessageType, 0,
             "unknown message type " + std::to_string(raw[0]));
    }

    while (off < raw.size()) msg.extensions.push_back(decode_extension(raw, off));
    return msg;
}

void append_extension(RegistrationMessage& msg, AnyExtension ext) {
    if (const auto* auth = std::get_if<AuthExtension>(&ext); auth && auth->ext_type == EXT_MHAE) {
        for (const auto& existing : msg.extensions) {
            const auto* e = std::get_if<AuthExtension>(&existing);
            if (!e) continue;
            if (e->ext_type == EXT_MHAE) {
                fail(CodecErr::OrderingViolation, msg.extensions.size(), "second MHAE");
            }
            if (e->ext_type == EXT_FHAE) {
                fail(CodecErr::OrderingViolation, msg.extensions.size(), "MHAE after FHAE");
            }
        }
    }
    msg.extensions.push_back(std::move(ext));
}

Bytes protected_span(const RegistrationMessage& msg, std::size_t ext_index) {
    if (ext_index >= msg.extensions.size() ||
        !std::holds_alternative<AuthExtension>(msg.extensions[ext_index])) {
        fail(CodecErr::NotAuthExtension, ext_index,
             "protected span requires an authentication extension");
    }
    Bytes span;
    span.reserve(64);
    encode_fixed(msg, span);
    for (std::size_t i = 0; i < ext_index; ++i) encode_extension(msg.extensions[i], span);
    encode_auth_header(std::get<AuthExtension>(msg.extensions[ext_index]), span);
    return span;
}

int find_last_auth(const RegistrationMessage& msg, std::uint8_t ext_type) {
    for (int i = static_cast<int>(msg.extensions.size()) - 1; i >= 0; --i) {
        const auto* auth = std::get_if<AuthExtension>(&msg.extensions[static_cast<std::size_t>(i)]);
        if (auth && auth->ext_type == ext_type) return i;
    }
    return -1;
}

}  // namespace mip::wire
