#ifndef MIP_SECASSOC_HPP
#define MIP_SECASSOC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "mip/bytes.hpp"
#include "mip/md5.hpp"
#include "mip/types.hpp"
#include "mip/wire.hpp"

namespace mip::sa {

// SPIs 0..255 are reserved; a context names one of the remaining 2^32-256.
constexpr std::uint32_t SPI_RESERVED_MAX = 255;
constexpr std::size_t HMAC_MD5_KEY_MIN = 16;   // 128-bit minimum
constexpr std::size_t HMAC_MD5_MAC_LEN = 16;

enum class Algorithm : std::uint8_t { HmacMd5 = 1 };

enum class ReplayMethod : std::uint8_t { None, Timestamps, Nonces };

struct ReplayPolicy {
    ReplayMethod method = ReplayMethod::Timestamps;
    std::uint32_t window_s = 7;  // timestamp tolerance, seconds

    bool operator==(const ReplayPolicy&) const = default;
};

// Algorithm + shared key + replay method, selected by SPI.
struct SecurityContext {
    std::uint32_t spi = 0;
    Algorithm algorithm = Algorithm::HmacMd5;
    Bytes key;  // raw octets; arbitrary binary values are legal
    ReplayPolicy replay;

    bool operator==(const SecurityContext&) const = default;
};

enum class RolePair : std::uint8_t { MnHa, MnFa, FaHa, MnAaa };

const char* to_string(RolePair r);

// Unordered endpoint pair: (a,b) and (b,a) name the same association.
struct PeerPair {
    RolePair role = RolePair::MnHa;
    Ipv4 a, b;  // normalized so a <= b

    PeerPair() = default;
    PeerPair(RolePair r, Ipv4 x, Ipv4 y) : role(r), a(x <= y ? x : y), b(x <= y ? y : x) {}

    auto operator<=>(const PeerPair&) const = default;
};

enum class SaErr {
    SpiSyntax,
    SpiReserved,
    SpiRange,
    DuplicateSpi,
    UnknownSpi,
    UnsupportedAlgorithm,
    KeyTooShort,
};

class SaError : public std::runtime_error {
public:
    SaError(SaErr kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    SaErr kind;
};

// "0x"-prefixed input is hexadecimal, bare digits are decimal; both forms of
// the same value compare equal. Throws SpiSyntax / SpiReserved / SpiRange.
std::uint32_t parse_spi(std::string_view text);

class SecurityAssociationStore {
public:
    // Validates the context (SPI not reserved, key length) and stores it.
    // Re-adding an identical context is a no-op; a different context under
    // the same (peer, SPI) throws DuplicateSpi.
    void add_context(const PeerPair& peer, const SecurityContext& ctx);

    const SecurityContext& lookup(const PeerPair& peer, std::uint32_t spi) const;  // UnknownSpi
    const SecurityContext* find(const PeerPair& peer, std::uint32_t spi) const;

    bool has_association(const PeerPair& peer) const;
    // Lowest-SPI context of an association, or nullptr. Used by agents that
    // pick "their" context for signing.
    const SecurityContext* first_context(const PeerPair& peer) const;

    std::size_t context_count() const;

private:
    std::map<PeerPair, std::map<std::uint32_t, SecurityContext>> table_;
};

// 16-octet HMAC-MD5 of data under ctx.key. Throws UnsupportedAlgorithm for
// anything but HMAC-MD5.
Digest16 compute_authenticator(const SecurityContext& ctx, ByteView data);

enum class RejectReason : std::uint8_t {
    MissingExtension,
    UnknownSpi,
    AuthenticationFailed,
    AlgorithmMismatch,
};

const char* to_string(RejectReason r);

struct VerifyResult {
    std::optional<RejectReason> reason;  // empty = accepted

    bool accepted() const { return !reason.has_value(); }
    static VerifyResult accept() { return {}; }
    static VerifyResult reject(RejectReason r) { return {r}; }

    bool operator==(const VerifyResult&) const = default;
};

// Appends an authentication extension of ext_type carrying ctx.spi and the
// MAC over the new extension's protected span. Propagates OrderingViolation;
// throws UnsupportedAlgorithm before touching msg.
void sign(wire::RegistrationMessage& msg, const SecurityContext& ctx, std::uint8_t ext_type,
          std::optional<std::uint8_t> subtype = std::nullopt);

// Checks the last extension of ext_type against the context its SPI names
// under peer. All failures are expressed in the result, never thrown.
VerifyResult verify(const wire::RegistrationMessage& msg, const SecurityAssociationStore& store,
                    const PeerPair& peer, std::uint8_t ext_type);

// Same check against one known context (the verifier already holds the key).
VerifyResult verify_with_context(const wire::RegistrationMessage& msg, const SecurityContext& ctx,
                                 std::uint8_t ext_type);

// Avalanche experiment: random message, random single-bit flip, fraction of
// authenticator bits that change. Fully determined by (seed, trials).
struct AvalancheReport {
    int trials = 0;
    std::int64_t total_diff_bits = 0;  // across all trials, of 128 per trial
    double min_fraction = 1.0;
    double max_fraction = 0.0;

    double mean_fraction() const {
        return trials == 0 ? 0.0 : static_cast<double>(total_diff_bits) / (128.0 * trials);
    }
    bool within_band() const { return mean_fraction() >= 0.45 && mean_fraction() <= 0.55; }
};

AvalancheReport avalanche_experiment(std::uint64_t seed, int trials);

}  // namespace mip::sa

#endif
