#ifndef MIP_TYPES_HPP
#define MIP_TYPES_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mip {

// Simulator node identifier (scenario node ids are short names like "mn", "fa1").
using NodeId = std::string;

struct Ipv4 {
    std::uint32_t v = 0;

    constexpr Ipv4() = default;
    constexpr explicit Ipv4(std::uint32_t raw) : v(raw) {}
    constexpr Ipv4(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
        : v((std::uint32_t(a) << 24) | (std::uint32_t(b) << 16) | (std::uint32_t(c) << 8) | d) {}

    static std::optional<Ipv4> parse(std::string_view text);
    std::string str() const;

    constexpr bool is_zero() const { return v == 0; }
    auto operator<=>(const Ipv4&) const = default;
};

// Simulation clock: fixed-point milliseconds, so traces are platform independent.
struct SimTime {
    std::int64_t ms = 0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t milliseconds) : ms(milliseconds) {}
    static constexpr SimTime seconds(std::int64_t s) { return SimTime(s * 1000); }

    constexpr std::int64_t whole_seconds() const { return ms / 1000; }
    std::string str() const;  // "12.345"

    // "<sec>.<ms>" with up to 3 decimals, e.g. "5", "5.5", "5.125"
    static std::optional<SimTime> parse(std::string_view text);

    constexpr SimTime operator+(SimTime o) const { return SimTime(ms + o.ms); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(ms - o.ms); }
    auto operator<=>(const SimTime&) const = default;
};

}  // namespace mip

#endif
