#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "p2b/common.hpp"

namespace p2b {

struct ExpertLabel {
    std::string expert_id;
    std::string platform;
    std::string question_id;
    int score = 0;  // 1..5
};

struct ParticipantRating {
    std::string participant_id;
    std::string platform;     // Booking or Tripadvisor
    std::string question_id;  // Q3, Q4, Q15, Q16
    int agreement = 0;        // 1 (strongly disagree) .. 5 (strongly agree)
    double read_minutes = 0.0;
};

std::vector<ExpertLabel> load_expert_labels(const std::filesystem::path& path);
std::vector<ParticipantRating> load_participant_ratings(const std::filesystem::path& path);

// Majority of the normalized (>=3 -> Yes) scores. The count must be odd;
// normalization happens before the vote, not after.
Binary majority_label(const std::vector<ExpertLabel>& labels);

struct AgreementCell {
    long long matches = 0;
    long long total = 0;
    long long rate_hundredths = 0;  // percent in hundredths, half-up

    std::string rate_str() const { return format_hundredths(rate_hundredths); }
};

// Question-keyed maps must agree on their key sets (KeyMismatch otherwise,
// with the differing questions in the message).
AgreementCell agreement_rate(const std::map<std::string, Binary>& tool,
                             const std::map<std::string, Binary>& truth);

// Sums matches and totals across platforms, then divides once. Pooling, not
// averaging of rates: the two disagree whenever platform totals differ.
AgreementCell pooled_agreement(const std::vector<AgreementCell>& cells);

std::map<std::string, Binary> always_yes_baseline(const std::vector<std::string>& question_ids);

// One uniform bit per question, drawn in the given bank order from a
// SplitMix64 stream seeded with `seed`. Bit-reproducible by construction.
std::map<std::string, Binary> random_baseline(const std::vector<std::string>& question_ids,
                                              std::uint64_t seed);

enum class Alternative { Less, Greater };
enum class MwuMethod { Exact, NormalApprox };

struct MwuResult {
    double u_statistic = 0.0;  // U of the first sample, midrank method
    double p_value = 1.0;
    MwuMethod method = MwuMethod::NormalApprox;
};

// One-sided Mann-Whitney U. Exact enumeration (no continuity correction)
// when the samples are tie-free with n1+n2 <= 12; otherwise the normal
// approximation with tie correction and 0.5 continuity correction.
MwuResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                         Alternative alternative);

// r = 1 - 2U/(n1*n2) for the first sample's U.
double rank_biserial(double u, int n1, int n2);

// Fraction of cross pairs (x in a, y in b) with x > y; ties count half.
double common_language_effect_size(const std::vector<double>& a,
                                   const std::vector<double>& b);

struct CellStats {
    int n = 0;
    std::optional<double> mean;
    std::optional<double> std_dev;  // sample (n-1); absent when n < 2
};

// Mean/std of agreement per (platform, question) over ratings whose
// read_minutes is at least min_minutes.
std::map<std::pair<std::string, std::string>, CellStats> duration_filtered_means(
    const std::vector<ParticipantRating>& ratings, double min_minutes);

}  // namespace p2b
