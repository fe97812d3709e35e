#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "p2b/errors.hpp"

namespace p2b {

// FNV-1a, 64-bit. Used wherever a stable text hash is persisted (prompt
// hashes in evidence records, mock provider dispatch). std::hash is not
// guaranteed stable across implementations, so it must not leak into files.
constexpr std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value);

// SplitMix64. Small, seedable, and trivially portable, which is what the
// reproducibility contract for the random baseline needs.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

enum class Binary { No = 0, Yes = 1 };

std::string to_string(Binary b);

// Ordinal 1-5 score to Yes/No: 3 and above is Yes. Throws OutOfRangeScore.
Binary normalize_binary(int score);

// Exact half-up percentage in hundredths: matches/total -> 10000*pct value,
// e.g. 13/19 -> 6842 ("68.42"). Integer arithmetic so x.xx5 cases never
// depend on binary floating point.
long long percent_hundredths(long long matches, long long total);

// Truncated (not rounded) quotient in hundredths: total/count -> e.g.
// 4056/7 -> 57942 ("579.42").
long long trunc_hundredths(long long numerator, long long denominator);

// "57942" -> "579.42"; handles negatives for completeness.
std::string format_hundredths(long long hundredths);

}  // namespace p2b
