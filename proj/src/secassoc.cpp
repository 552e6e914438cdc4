#include "mip/secassoc.hpp"

#include <bit>
#include <charconv>

#include "mip/rng.hpp"

namespace mip::sa {

namespace {

void validate_context(const SecurityContext& ctx) {
    if (ctx.spi <= SPI_RESERVED_MAX) {
        throw SaError(SaErr::SpiReserved, "SPI " + std::to_string(ctx.spi) + " is reserved");
    }
    if (ctx.algorithm != Algorithm::HmacMd5) {
        throw SaError(SaErr::UnsupportedAlgorithm, "unsupported algorithm");
    }
    if (ctx.key.size() < HMAC_MD5_KEY_MIN) {
        throw SaError(SaErr::KeyTooShort, "HMAC-MD5 keys must be at least 128 bits");
    }
}

}  // namespace

const char* to_string(RolePair r) {
    switch (r) {
        case RolePair::MnHa: return "MN-HA";
        case RolePair::MnFa: return "MN-FA";
        case RolePair::FaHa: return "FA-HA";
        case RolePair::MnAaa: return "MN-AAA";
    }
    return "?";
}

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::MissingExtension: return "MissingExtension";
        case RejectReason::UnknownSpi: return "UnknownSpi";
        case RejectReason::AuthenticationFailed: return "AuthenticationFailed";
        case RejectReason::AlgorithmMismatch: return "AlgorithmMismatch";
    }
    return "?";
}

std::uint32_t parse_spi(std::string_view text) {
    int base = 10;
    std::string_view digits = text;
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        digits = text.substr(2);
    }
    if (digits.empty()) throw SaError(SaErr::SpiSyntax, "empty SPI");

    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (ec == std::errc::result_out_of_range) {
        throw SaError(SaErr::SpiRange, "SPI does not fit in 4 octets");
    }
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw SaError(SaErr::SpiSyntax, "SPI is neither decimal nor 0x-hexadecimal");
    }
    if (value > 0xffffffffULL) throw SaError(SaErr::SpiRange, "SPI does not fit in 4 octets");
    if (value <= SPI_RESERVED_MAX) {
        throw SaError(SaErr::SpiReserved, "SPI values 0-255 are reserved");
    }
    return static_cast<std::uint32_t>(value);
}

void SecurityAssociationStore::add_context(const PeerPair& peer, const SecurityContext& ctx) {
    validate_context(ctx);
    auto& contexts = table_[peer];
    auto it = contexts.find(ctx.spi);
    if (it != contexts.end()) {
        if (it->second == ctx) return;  // idempotent re-add
        throw SaError(SaErr::DuplicateSpi,
                      "SPI " + std::to_string(ctx.spi) + " already bound to a different context");
    }
    contexts.emplace(ctx.spi, ctx);
}

const SecurityContext* SecurityAssociationStore::find(const PeerPair& peer,
                                                      std::uint32_t spi) const {
    auto it = table_.find(peer);
    if (it == table_.end()) return nullptr;
    auto ctx = it->second.find(spi);
    return ctx == it->second.end() ? nullptr : &ctx->second;
}

const SecurityContext& SecurityAssociationStore::lookup(const PeerPair& peer,
                                                        std::uint32_t spi) const {
    const SecurityContext* ctx = find(peer, spi);
    if (!ctx) {
        throw SaError(SaErr::UnknownSpi,
                      "no context with SPI " + std::to_string(spi) + " for this peer pair");
    }
    return *ctx;
}

bool SecurityAssociationStore::has_association(const PeerPair& peer) const {
    auto it = table_.find(peer);
    return it != table_.end() && !it->second.empty();
}

const SecurityContext* SecurityAssociationStore::first_context(const PeerPair& peer) const {
    auto it = table_.find(peer);
    if (it == table_.end() || it->second.empty()) return nullptr;
    return &it->second.begin()->second;
}

std::size_t SecurityAssociationStore::context_count() const {
    std::size_t n = 0;
    for (const auto& [peer, contexts] : table_) n += contexts.size();
    return n;
}

Digest16 compute_authenticator(const SecurityContext& ctx, ByteView data) {
    if (ctx.algorithm != Algorithm::HmacMd5) {
        throw SaError(SaErr::UnsupportedAlgorithm, "unsupported algorithm");
    }
    return hmac_md5(ctx.key, data);
}

void sign(wire::RegistrationMessage& msg, const SecurityContext& ctx, std::uint8_t ext_type,
          std::optional<std::uint8_t> subtype) {
    if (ctx.algorithm != Algorithm::HmacMd5) {
        throw SaError(SaErr::UnsupportedAlgorithm, "unsupported algorithm");
    }
    wire::AuthExtension ext;
    ext.ext_type = ext_type;
    if (ext_type == wire::EXT_GNAE) ext.subtype = subtype.value_or(wire::GNAE_SUBTYPE_MN_AAA);
    ext.spi = ctx.spi;
    ext.authenticator.assign(HMAC_MD5_MAC_LEN, 0);

    wire::append_extension(msg, ext);  // may throw OrderingViolation
    Bytes span = wire::protected_span(msg, msg.extensions.size() - 1);
    Digest16 mac = compute_authenticator(ctx, span);
    auto& placed = std::get<wire::AuthExtension>(msg.extensions.back());
    placed.authenticator.assign(mac.begin(), mac.end());
}

namespace {

VerifyResult check_extension(const wire::RegistrationMessage& msg, std::size_t index,
                             const SecurityContext* ctx) {
    if (!ctx) return VerifyResult::reject(RejectReason::UnknownSpi);
    const auto& ext = std::get<wire::AuthExtension>(msg.extensions[index]);
    if (ctx->algorithm != Algorithm::HmacMd5 || ext.authenticator.size() != HMAC_MD5_MAC_LEN) {
        return VerifyResult::reject(RejectReason::AlgorithmMismatch);
    }
    Bytes span = wire::protected_span(msg, index);
    Digest16 expected = compute_authenticator(*ctx, span);
    if (!ct_equal(ByteView(expected.data(), expected.size()), ext.authenticator)) {
        return VerifyResult::reject(RejectReason::AuthenticationFailed);
    }
    return VerifyResult::accept();
}

}  // namespace

VerifyResult verify(const wire::RegistrationMessage& msg, const SecurityAssociationStore& store,
                    const PeerPair& peer, std::uint8_t ext_type) {
    int index = wire::find_last_auth(msg, ext_type);
    if (index < 0) return VerifyResult::reject(RejectReason::MissingExtension);
    const auto& ext = std::get<wire::AuthExtension>(msg.extensions[static_cast<std::size_t>(index)]);
    return check_extension(msg, static_cast<std::size_t>(index), store.find(peer, ext.spi));
}

VerifyResult verify_with_context(const wire::RegistrationMessage& msg, const SecurityContext& ctx,
                                 std::uint8_t ext_type) {
    int index = wire::find_last_auth(msg, ext_type);
    if (index < 0) return VerifyResult::reject(RejectReason::MissingExtension);
    const auto& ext = std::get<wire::AuthExtension>(msg.extensions[static_cast<std::size_t>(index)]);
    if (ext.spi != ctx.spi) return VerifyResult::reject(RejectReason::UnknownSpi);
    return check_extension(msg, static_cast<std::size_t>(index), &ctx);
}

AvalancheReport avalanche_experiment(std::uint64_t seed, int trials) {
    SplitMix64 rng(seed);
    AvalancheReport report;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Bytes key = rng.fill(16);
        std::size_t len = 24 + static_cast<std::size_t>(rng.below(41));  // message-sized inputs
        Bytes msg = rng.fill(len);
        std::size_t bit = static_cast<std::size_t>(rng.below(len * 8));

        Digest16 before = hmac_md5(key, msg);
        msg[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        Digest16 after = hmac_md5(key, msg);

        int diff = 0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            diff += std::popcount(static_cast<unsigned>(before[i] ^ after[i]));
        }
        report.total_diff_bits += diff;
        double fraction = diff / 128.0;
        report.min_fraction = std::min(report.min_fraction, fraction);
        report.max_fraction = std::max(report.max_fraction, fraction);
    }
    return report;
}

}  // namespace mip::sa
