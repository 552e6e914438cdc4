#ifndef MIP_MD5_HPP
#define MIP_MD5_HPP

#include <array>
#include <cstdint>

#include "mip/bytes.hpp"

namespace mip {

using Digest16 = std::array<std::uint8_t, 16>;

/// MD5 message digest (RFC 1321), incremental interface.
class Md5 {
public:
    static constexpr std::size_t kDigestSize = 16;
    static constexpr std::size_t kBlockSize = 64;

    Md5();
    void update(ByteView data);
    Digest16 finish();

    static Digest16 digest(ByteView data);

private:
    void compress(const std::uint8_t* block);

    std::uint32_t a_, b_, c_, d_;
    std::uint64_t total_ = 0;  // bytes fed so far
    std::uint8_t buf_[kBlockSize];
    std::size_t buflen_ = 0;
};

/// HMAC keyed hash over MD5 (RFC 2104). Any key length, including empty
/// and keys longer than the block size.
Digest16 hmac_md5(ByteView key, ByteView data);

// Equality that always walks every octet of both operands; never returns
// early on the first mismatch. When `octets_compared` is given it receives
// the number of octet comparisons performed (test instrumentation).
bool ct_equal(ByteView a, ByteView b, std::size_t* octets_compared = nullptr);

}  // namespace mip

#endif
