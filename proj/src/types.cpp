#include "mip/types.hpp"

#include <charconv>
#include <cstdio>

namespace mip {

std::optional<Ipv4> Ipv4::parse(std::string_view text) {
    std::uint32_t parts[4];
    std::size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (i > 0) {
            if (pos >= text.size() || text[pos] != '.') return std::nullopt;
            ++pos;
        }
        const char* begin = text.data() + pos;
        const char* end = text.data() + text.size();
        std::uint32_t value = 0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin || value > 255) return std::nullopt;
        parts[i] = value;
        pos = static_cast<std::size_t>(ptr - text.data());
    }
    if (pos != text.size()) return std::nullopt;
    return Ipv4((parts[0] << 24) | (parts[1] << 16) | (parts[2] << 8) | parts[3]);
}

std::string Ipv4::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (v >> 24) & 0xff, (v >> 16) & 0xff,
                  (v >> 8) & 0xff, v & 0xff);
    return buf;
}

std::string SimTime::str() const {
    char buf[32];
    std::int64_t sign = ms < 0 ? -1 : 1;
    std::int64_t abs_ms = ms * sign;
    std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", sign < 0 ? "-" : "",
                  static_cast<long long>(abs_ms / 1000), static_cast<long long>(abs_ms % 1000));
    return buf;
}

std::optional<SimTime> SimTime::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::int64_t secs = 0;
    if (whole.empty()) return std::nullopt;
    auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), secs);
    if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;

    std::int64_t frac_ms = 0;
    if (dot != std::string_view::npos) {
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 3) return std::nullopt;
        std::int64_t digits = 0;
        auto [fp, fec] = std::from_chars(frac.data(), frac.data() + frac.size(), digits);
        if (fec != std::errc{} || fp != frac.data() + frac.size()) return std::nullopt;
        for (std::size_t i = frac.size(); i < 3; ++i) digits *= 10;
        frac_ms = digits;
    }
    return SimTime(secs * 1000 + frac_ms);
}

}  // namespace mip
