#ifndef MIP_WIRE_HPP
#define MIP_WIRE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mip/bytes.hpp"
#include "mip/types.hpp"

// Registration message codec. Byte layout (all integers network order):
//
//   RRQ (24-octet fixed part)
//     0       type = 1
//     1       flags: S B D M G r T x, most significant bit first
//     2-3     lifetime (seconds; 0 = deregistration)
//     4-7     home address
//     8-11    home agent
//     12-15   care-of address
//     16-23   identification
//
//   RRP (20-octet fixed part)
//     0       type = 3
//     1       code (0/1 accepted, >= 64 denied)
//     2-3     lifetime
//     4-7     home address
//     8-11    home agent
//     12-19   identification
//
//   Extensions follow the fixed part back to back:
//     short:            type(1) length(1)=|payload| payload
//     auth (32/33/34):  type(1) length(1)=4+|auth| SPI(4) authenticator
//     GNAE (36):        type(1) subtype(1) length(2)=4+|auth| SPI(4) authenticator
namespace mip::wire {

constexpr std::uint8_t MIP_TYPE_RRQ = 1;
constexpr std::uint8_t MIP_TYPE_RRP = 3;

constexpr std::uint8_t EXT_MHAE = 32;  // Mobile-Home authentication
constexpr std::uint8_t EXT_MFAE = 33;  // Mobile-Foreign authentication
constexpr std::uint8_t EXT_FHAE = 34;  // Foreign-Home authentication
constexpr std::uint8_t EXT_GNAE = 36;  // generalized authentication (subtyped)
constexpr std::uint8_t GNAE_SUBTYPE_MN_AAA = 1;

constexpr std::size_t RRQ_FIXED_LEN = 24;
constexpr std::size_t RRP_FIXED_LEN = 20;

// RRQ flag bits, octet 1.
constexpr std::uint8_t FLAG_S = 0x80;
constexpr std::uint8_t FLAG_B = 0x40;
constexpr std::uint8_t FLAG_D = 0x20;
constexpr std::uint8_t FLAG_M = 0x10;
constexpr std::uint8_t FLAG_G = 0x08;
constexpr std::uint8_t FLAG_r = 0x04;
constexpr std::uint8_t FLAG_T = 0x02;
constexpr std::uint8_t FLAG_x = 0x01;

constexpr bool is_auth_ext_type(std::uint8_t t) {
    return t == EXT_MHAE || t == EXT_MFAE || t == EXT_FHAE || t == EXT_GNAE;
}

const char* ext_type_name(std::uint8_t t);  // "MHAE", ... or "EXT" for unknown

struct RegistrationRequest {
    std::uint8_t flags = 0;
    std::uint16_t lifetime = 0;  // 0 = deregistration
    Ipv4 home_address;
    Ipv4 home_agent;
    Ipv4 care_of_address;
    std::uint64_t identification = 0;

    bool operator==(const RegistrationRequest&) const = default;
};

struct RegistrationReply {
    std::uint8_t code = 0;
    std::uint16_t lifetime = 0;
    Ipv4 home_address;
    Ipv4 home_agent;
    std::uint64_t identification = 0;

    bool accepted() const { return code <= 1; }
    bool operator==(const RegistrationReply&) const = default;
};

// Unknown extension, carried opaquely. Must not use an authentication
// extension type code (those always decode as AuthExtension).
struct Extension {
    std::uint8_t ext_type = 0;
    Bytes payload;

    bool operator==(const Extension&) const = default;
};

struct AuthExtension {
    std::uint8_t ext_type = EXT_MHAE;
    std::optional<std::uint8_t> subtype;  // GNAE only
    std::uint32_t spi = 0;
    Bytes authenticator;  // 16 octets for HMAC-MD5

    bool operator==(const AuthExtension&) const = default;
};

using AnyExtension = std::variant<Extension, AuthExtension>;

struct RegistrationMessage {
    std::variant<RegistrationRequest, RegistrationReply> body;
    std::vector<AnyExtension> extensions;

    bool is_request() const { return std::holds_alternative<RegistrationRequest>(body); }
    const RegistrationRequest& request() const { return std::get<RegistrationRequest>(body); }
    const RegistrationReply& reply() const { return std::get<RegistrationReply>(body); }

    bool operator==(const RegistrationMessage&) const = default;
};

enum class CodecErr {
    Truncated,
    UnknownMessageType,
    OversizeExtension,
    OrderingViolation,
    NotAuthExtension,
};

class CodecError : public std::runtime_error {
public:
    CodecError(CodecErr kind, std::size_t offset, const std::string& what)
        : std::runtime_error(what), kind(kind), offset(offset) {}

    CodecErr kind;
    std::size_t offset;  // octet position the error was detected at
};

Bytes encode_message(const RegistrationMessage& msg);
RegistrationMessage decode_message(ByteView raw);

// Appends ext; throws CodecError(OrderingViolation) if the result would
// carry two MHAEs or an MHAE after an FHAE.
void append_extension(RegistrationMessage& msg, AnyExtension ext);

// Octets covered by the authenticator of the extension at ext_index: the
// encoded fixed part, every prior extension in its entirety, and this
// extension's header through its SPI. The authenticator itself is excluded.
Bytes protected_span(const RegistrationMessage& msg, std::size_t ext_index);

// Index of the last extension with the given auth type, or -1.
int find_last_auth(const RegistrationMessage& msg, std::uint8_t ext_type);

}  // namespace mip::wire

#endif
