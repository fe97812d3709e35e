#include "p2b/common.hpp"

#include <cstdio>

namespace p2b {

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string to_string(Binary b) { return b == Binary::Yes ? "Yes" : "No"; }

Binary normalize_binary(int score) {
    if (score < 1 || score > 5) {
        throw OutOfRangeScore("score " + std::to_string(score) + " outside [1,5]");
    }
    return score >= 3 ? Binary::Yes : Binary::No;
}

long long percent_hundredths(long long matches, long long total) {
    if (total <= 0) throw EmptyList("percentage over zero total");
    if (matches < 0 || matches > total) {
        throw EmptyList("matches " + std::to_string(matches) + " outside [0," +
                        std::to_string(total) + "]");
    }
    // matches/total as a percent with 2 decimals, half-up:
    // round(10000*m/t) = floor((10000*m + t/2)/t) = (20000*m + t)/(2*t).
    return (20000 * matches + total) / (2 * total);
}

long long trunc_hundredths(long long numerator, long long denominator) {
    if (denominator <= 0) throw EmptyList("quotient over zero denominator");
    return (100 * numerator) / denominator;
}

std::string format_hundredths(long long hundredths) {
    const char* sign = hundredths < 0 ? "-" : "";
    long long v = hundredths < 0 ? -hundredths : hundredths;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", sign, v / 100, v % 100);
    return buf;
}

}  // namespace p2b
