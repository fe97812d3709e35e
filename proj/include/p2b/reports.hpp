#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "p2b/checklist.hpp"
#include "p2b/corpus.hpp"
#include "p2b/evaluation.hpp"

namespace p2b {

// Agreement of every assessment strategy (plus the random and always-yes
// baselines) with the experts' majority labels, per platform and pooled.
struct AgreementMatrix {
    std::vector<std::string> platforms;   // row order (sorted by name)
    std::vector<std::string> strategies;  // column order; baselines last
    // strategy -> platform -> cell; a strategy may lack some platform
    std::map<std::string, std::map<std::string, AgreementCell>> cells;
    std::map<std::string, AgreementCell> pooled;  // strategy -> "All" row
};

AgreementMatrix build_agreement_matrix(const std::vector<nlohmann::json>& records,
                                       const std::vector<ExpertLabel>& labels,
                                       const Checklist& checklist,
                                       std::uint64_t seed);

std::string render_agreement_csv(const AgreementMatrix& matrix);
std::string render_agreement_table(const AgreementMatrix& matrix);

struct SurveyCellRow {
    std::string platform;
    std::string question_id;
    CellStats stats;
};

std::vector<SurveyCellRow> survey_summary(const std::vector<ParticipantRating>& ratings,
                                          double min_minutes);

std::string render_survey_csv(const std::vector<SurveyCellRow>& rows);
std::string render_survey_table(const std::vector<SurveyCellRow>& rows);

// Booking vs Tripadvisor per survey question: one-sided tests both ways plus
// effect sizes over the duration-filtered agreement samples.
struct MwuRow {
    std::string question_id;
    int n_booking = 0;
    int n_tripadvisor = 0;
    double u_statistic = 0.0;
    std::string method;
    double p_less = 1.0;
    double p_greater = 1.0;
    double rank_biserial_value = 0.0;
    double cles = 0.5;
};

std::vector<MwuRow> survey_mwu_listing(const std::vector<ParticipantRating>& ratings,
                                       double min_minutes);

std::string render_mwu_csv(const std::vector<MwuRow>& rows);
std::string render_mwu_table(const std::vector<MwuRow>& rows);

std::string render_corpus_stats_table(
    const std::vector<std::pair<std::string, CorpusStats>>& rows);

// Label-free digest of persisted evidence records.
std::string render_record_summary(const std::vector<nlohmann::json>& records);

}  // namespace p2b
