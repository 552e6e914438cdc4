#include "mip/md5.hpp"

#include <cstring>

namespace mip {

namespace {

constexpr std::uint32_t K[64] = {
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501,
    0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821,
    0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, 0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a,
    0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70,
    0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
    0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391,
};

constexpr int S[64] = {
    7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22,
    5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20, 5, 9,  14, 20,
    4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23,
    6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21,
};

constexpr std::uint32_t rotl(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

}  // namespace

Md5::Md5() : a_(0x67452301), b_(0xefcdab89), c_(0x98badcfe), d_(0x10325476) {}

void Md5::compress(const std::uint8_t* p) {
    std::uint32_t m[16];
    for (int i = 0; i < 16; ++i) {
        m[i] = std::uint32_t(p[4 * i]) | (std::uint32_t(p[4 * i + 1]) << 8) |
               (std::uint32_t(p[4 * i + 2]) << 16) | (std::uint32_t(p[4 * i + 3]) << 24);
    }

    std::uint32_t a = a_, b = b_, c = c_, d = d_;
    for (int i = 0; i < 64; ++i) {
        std::uint32_t f;
        int g;
        if (i < 16) {
            f = (b & c) | (~b & d);
            g = i;
        } else if (i < 32) {
            f = (d & b) | (~d & c);
            g = (5 * i + 1) & 15;
        } else if (i < 48) {
            f = b ^ c ^ d;
            g = (3 * i + 5) & 15;
        } else {
            f = c ^ (b | ~d);
            g = (7 * i) & 15;
        }
        std::uint32_t tmp = d;
        d = c;
        c = b;
        b = b + rotl(a + f + K[i] + m[g], S[i]);
        a = tmp;
    }
    a_ += a;
    b_ += b;
    c_ += c;
    d_ += d;
}

void Md5::update(ByteView data) {
    total_ += data.size();
    std::size_t off = 0;
    if (buflen_ > 0) {
        std::size_t take = std::min(kBlockSize - buflen_, data.size());
        std::memcpy(buf_ + buflen_, data.data(), take);
        buflen_ += take;
        off = take;
        if (buflen_ < kBlockSize) return;
        compress(buf_);
        buflen_ = 0;
    }
    while (off + kBlockSize <= data.size()) {
        compress(data.data() + off);
        off += kBlockSize;
    }
    if (off < data.size()) {
        buflen_ = data.size() - off;
        std::memcpy(buf_, data.data() + off, buflen_);
    }
}

Digest16 Md5::finish() {
    std::uint64_t bits = total_ * 8;
    static constexpr std::uint8_t pad_byte = 0x80;
    update(ByteView(&pad_byte, 1));
    static constexpr std::uint8_t zero = 0x00;
    while (buflen_ != 56) update(ByteView(&zero, 1));

    std::uint8_t len[8];
    for (int i = 0; i < 8; ++i) len[i] = static_cast<std::uint8_t>(bits >> (8 * i));
    update(ByteView(len, 8));

    Digest16 out;
    const std::uint32_t words[4] = {a_, b_, c_, d_};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out[4 * i + j] = static_cast<std::uint8_t>(words[i] >> (8 * j));
        }
    }
    return out;
}

Digest16 Md5::digest(ByteView data) {
    Md5 h;
    h.update(data);
    return h.finish();
}

Digest16 hmac_md5(ByteView key, ByteView data) {
    std::uint8_t block[Md5::kBlockSize] = {0};
    if (key.size() > Md5::kBlockSize) {
        Digest16 kd = Md5::digest(key);
        std::memcpy(block, kd.data(), kd.size());
    } else if (!key.empty()) {
        std::memcpy(block, key.data(), key.size());
    }

    std::uint8_t ipad[Md5::kBlockSize], opad[Md5::kBlockSize];
    for (std::size_t i = 0; i < Md5::kBlockSize; ++i) {
        ipad[i] = block[i] ^ 0x36;
        opad[i] = block[i] ^ 0x5c;
    }

    Md5 inner;
    inner.update(ByteView(ipad, sizeof(ipad)));
    inner.update(data);
    Digest16 ih = inner.finish();

    Md5 outer;
    outer.update(ByteView(opad, sizeof(opad)));
    outer.update(ByteView(ih.data(), ih.size()));
    return outer.finish();
}

bool ct_equal(ByteView a, ByteView b, std::size_t* octets_compared) {
    std::size_t n = std::max(a.size(), b.size());
    std::uint8_t acc = a.size() == b.size() ? 0 : 1;
    std::size_t compared = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t x = i < a.size() ? a[i] : 0;
        std::uint8_t y = i < b.size() ? b[i] : 0;
        acc |= static_cast<std::uint8_t>(x ^ y);
        ++compared;
    }
    if (octets_compared) *octets_compared = compared;
    return acc == 0;
}

}  // namespace mip
