#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hedgelab {

// Shortest decimal representation that round-trips the exact double.
// Used by every file writer so outputs are byte-identical across runs.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad number: '" + std::string(s) + "'");
    }
    return v;
}

inline long parse_long(std::string_view s) {
    long v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad integer: '" + std::string(s) + "'");
    }
    return v;
}

inline std::string_view trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

// Whitespace-separated tokens (collapses runs of spaces/tabs).
inline std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
        size_t start = pos;
        while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '\r') ++pos;
        if (pos > start) out.push_back(s.substr(start, pos - start));
    }
    return out;
}

// Deterministic RNG: splitmix64 seeded state feeding xoshiro-style draws.
// Hand-rolled so sequences are identical on every platform and toolchain;
// std::uniform_*_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        // splitmix64 to spread the seed
        uint64_t z = seed + 0x9e3779b97f4a7c15ull;
        for (auto& w : s_) {
            z += 0x9e3779b97f4a7c15ull;
            uint64_t x = z;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            w = x ^ (x >> 31);
        }
    }

    uint64_t next_u64() {
        // xoshiro256**
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi] inclusive
    long uniform_int(long lo, long hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    // uniform real in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace hedgelab
