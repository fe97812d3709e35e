#include "p2b/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "p2b/pipeline.hpp"

namespace p2b {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::map<std::string, std::map<std::string, Binary>> truth_by_platform(
    const std::vector<ExpertLabel>& labels) {
    std::map<std::string, std::map<std::string, std::vector<ExpertLabel>>> grouped;
    for (auto& l : labels) grouped[l.platform][l.question_id].push_back(l);
    std::map<std::string, std::map<std::string, Binary>> truth;
    for (auto& [platform, questions] : grouped) {
        for (auto& [qid, cell] : questions) {
            truth[platform][qid] = majority_label(cell);
        }
    }
    return truth;
}

}  // namespace

AgreementMatrix build_agreement_matrix(const std::vector<nlohmann::json>& records,
                                       const std::vector<ExpertLabel>& labels,
                                       const Checklist& checklist,
                                       std::uint64_t seed) {
    auto truth = truth_by_platform(labels);

    // strategy -> platform -> tool answers, restricted to platforms that
    // have expert labels.
    std::map<std::string, std::map<std::string, std::map<std::string, Binary>>> tools;
    std::map<std::string, PlatformType> platform_types;
    std::set<std::string> platforms_seen;
    for (auto& record : records) {
        auto platform = record.at("platform").get<std::string>();
        if (!truth.count(platform)) continue;
        auto strategy = record.at("strategy").get<std::string>();
        tools[strategy][platform] = binary_map_of_record(record);
        platform_types[platform] =
            platform_type_from_string(record.at("platform_type").get<std::string>());
        platforms_seen.insert(platform);
    }
    if (platforms_seen.empty()) {
        throw KeyMismatch("no overlap between record platforms and label platforms");
    }

    AgreementMatrix matrix;
    matrix.platforms.assign(platforms_seen.begin(), platforms_seen.end());
    for (auto& [strategy, per_platform] : tools) matrix.strategies.push_back(strategy);
    matrix.strategies.push_back("random");
    matrix.strategies.push_back("always_yes");

    auto bank_ids = [&](const std::string& platform) {
        std::vector<std::string> ids;
        for (auto& q : checklist.questions_for(platform_types.at(platform))) {
            ids.push_back(q.id);
        }
        return ids;
    };

    for (auto& platform : matrix.platforms) {
        const auto& platform_truth = truth.at(platform);
        for (auto& [strategy, per_platform] : tools) {
            auto it = per_platform.find(platform);
            if (it == per_platform.end()) continue;
            matrix.cells[strategy][platform] = agreement_rate(it->second, platform_truth);
        }
        auto ids = bank_ids(platform);
        // Per-platform substream so platforms do not share the same draws.
        auto random = random_baseline(ids, seed ^ fnv1a64(platform));
        matrix.cells["random"][platform] = agreement_rate(random, platform_truth);
        matrix.cells["always_yes"][platform] =
            agreement_rate(always_yes_baseline(ids), platform_truth);
    }

    for (auto& strategy : matrix.strategies) {
        std::vector<AgreementCell> cells;
        for (auto& platform : matrix.platforms) {
            auto it = matrix.cells[strategy].find(platform);
            if (it != matrix.cells[strategy].end()) cells.push_back(it->second);
        }
        if (!cells.empty()) matrix.pooled[strategy] = pooled_agreement(cells);
    }
    return matrix;
}

std::string render_agreement_csv(const AgreementMatrix& matrix) {
    std::ostringstream out;
    out << "platform";
    for (auto& s : matrix.strategies) out << ',' << s;
    out << '\n';
    for (auto& platform : matrix.platforms) {
        out << platform;
        for (auto& s : matrix.strategies) {
            out << ',';
            auto row = matrix.cells.find(s);
            if (row != matrix.cells.end()) {
                auto cell = row->second.find(platform);
                if (cell != row->second.end()) out << cell->second.rate_str();
            }
        }
        out << '\n';
    }
    out << "All";
    for (auto& s : matrix.strategies) {
        out << ',';
        auto it = matrix.pooled.find(s);
        if (it != matrix.pooled.end()) out << it->second.rate_str();
    }
    out << '\n';
    return out.str();
}

std::string render_agreement_table(const AgreementMatrix& matrix) {
    std::ostringstream out;
    out << "Agreement with expert majority labels (matches/total, percent)\n";
    for (auto& platform : matrix.platforms) {
        out << "  " << platform << ":";
        for (auto& s : matrix.strategies) {
            auto row = matrix.cells.find(s);
            if (row == matrix.cells.end()) continue;
            auto cell = row->second.find(platform);
            if (cell == row->second.end()) continue;
            out << "  " << s << " " << cell->second.matches << "/" << cell->second.total
                << " (" << cell->second.rate_str() << "%)";
        }
        out << '\n';
    }
    out << "  All:";
    for (auto& s : matrix.strategies) {
        auto it = matrix.pooled.find(s);
        if (it == matrix.pooled.end()) continue;
        out << "  " << s << " " << it->second.matches << "/" << it->second.total << " ("
            << it->second.rate_str() << "%)";
    }
    out << '\n';
    return out.str();
}

std::vector<SurveyCellRow> survey_summary(const std::vector<ParticipantRating>& ratings,
                                          double min_minutes) {
    auto cells = duration_filtered_means(ratings, min_minutes);
    std::vector<SurveyCellRow> rows;
    for (auto& [key, stats] : cells) {
        rows.push_back({key.first, key.second, stats});
    }
    // Numeric question order within platform (Q3 before Q15).
    std::sort(rows.begin(), rows.end(), [](const SurveyCellRow& a, const SurveyCellRow& b) {
        if (a.platform != b.platform) return a.platform < b.platform;
        return std::stoi(a.question_id.substr(1)) < std::stoi(b.question_id.substr(1));
    });
    return rows;
}

std::string render_survey_csv(const std::vector<SurveyCellRow>& rows) {
    std::ostringstream out;
    out << "platform,question_id,n,mean,std\n";
    for (auto& r : rows) {
        out << r.platform << ',' << r.question_id << ',' << r.stats.n << ',';
        if (r.stats.mean) out << fixed(*r.stats.mean, 4);
        out << ',';
        if (r.stats.std_dev) out << fixed(*r.stats.std_dev, 4);
        out << '\n';
    }
    return out.str();
}

std::string render_survey_table(const std::vector<SurveyCellRow>& rows) {
    std::ostringstream out;
    out << "Survey agreement by platform and question (mean +/- std, n)\n";
    for (auto& r : rows) {
        out << "  " << r.platform << " " << r.question_id << ": ";
        if (r.stats.mean) {
            out << fixed(*r.stats.mean, 2);
            if (r.stats.std_dev) out << " +/- " << fixed(*r.stats.std_dev, 2);
        } else {
            out << "-";
        }
        out << " (n=" << r.stats.n << ")\n";
    }
    return out.str();
}

std::vector<MwuRow> survey_mwu_listing(const std::vector<ParticipantRating>& ratings,
                                       double min_minutes) {
    std::map<std::string, std::vector<double>> booking, tripadvisor;
    for (auto& r : ratings) {
        if (r.read_minutes < min_minutes) continue;
        if (r.platform == "Booking") {
            booking[r.question_id].push_back(r.agreement);
        } else if (r.platform == "Tripadvisor") {
            tripadvisor[r.question_id].push_back(r.agreement);
        }
    }
    std::vector<MwuRow> rows;
    for (auto& [qid, a] : booking) {
        auto it = tripadvisor.find(qid);
        if (it == tripadvisor.end() || a.empty() || it->second.empty()) continue;
        const auto& b = it->second;
        MwuRow row;
        row.question_id = qid;
        row.n_booking = static_cast<int>(a.size());
        row.n_tripadvisor = static_cast<int>(b.size());
        auto less = mann_whitney_u(a, b, Alternative::Less);
        auto greater = mann_whitney_u(a, b, Alternative::Greater);
        row.u_statistic = less.u_statistic;
        row.method = less.method == MwuMethod::Exact ? "exact" : "normal";
        row.p_less = less.p_value;
        row.p_greater = greater.p_value;
        row.rank_biserial_value =
            rank_biserial(less.u_statistic, row.n_booking, row.n_tripadvisor);
        row.cles = common_language_effect_size(a, b);
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const MwuRow& a, const MwuRow& b) {
        return std::stoi(a.question_id.substr(1)) < std::stoi(b.question_id.substr(1));
    });
    return rows;
}

std::string render_mwu_csv(const std::vector<MwuRow>& rows) {
    std::ostringstream out;
    out << "question_id,n_booking,n_tripadvisor,u_statistic,method,p_less,p_greater,"
           "rank_biserial,cles\n";
    for (auto& r : rows) {
        out << r.question_id << ',' << r.n_booking << ',' << r.n_tripadvisor << ','
            << fixed(r.u_statistic, 1) << ',' << r.method << ',' << fixed(r.p_less, 6)
            << ',' << fixed(r.p_greater, 6) << ',' << fixed(r.rank_biserial_value, 4)
            << ',' << fixed(r.cles, 4) << '\n';
    }
    return out.str();
}

std::string render_mwu_table(const std::vector<MwuRow>& rows) {
    std::ostringstream out;
    out << "Booking vs Tripadvisor agreement, one-sided rank tests\n";
    for (auto& r : rows) {
        out << "  " << r.question_id << ": U=" << fixed(r.u_statistic, 1) << " ("
            << r.method << ", n=" << r.n_booking << "/" << r.n_tripadvisor
            << "), p(less)=" << fixed(r.p_less, 4) << ", p(greater)="
            << fixed(r.p_greater, 4) << ", rank-biserial=" << fixed(r.rank_biserial_value, 4)
            << ", cles=" << fixed(r.cles, 4) << '\n';
    }
    return out.str();
}

std::string render_corpus_stats_table(
    const std::vector<std::pair<std::string, CorpusStats>>& rows) {
    std::ostringstream out;
    out << "platform,links,avg_words_per_doc\n";
    for (auto& [name, stats] : rows) {
        out << name << ',' << stats.link_count << ','
            << format_hundredths(stats.avg_words_hundredths) << '\n';
    }
    return out.str();
}

std::string render_record_summary(const std::vector<nlohmann::json>& records) {
    std::ostringstream out;
    for (auto& record : records) {
        auto platform = record.at("platform").get<std::string>();
        auto strategy = record.at("strategy").get<std::string>();
        auto& questions = record.at("questions");
        int yes = 0;
        double relevance_sum = 0.0;
        int relevance_n = 0;
        for (auto& q : questions) {
            if (q.at("binary").get<std::string>() == "Yes") ++yes;
            if (q.contains("explanatory_relevance")) {
                relevance_sum += q.at("explanatory_relevance").get<double>();
                ++relevance_n;
            }
        }
        out << platform << " [" << strategy << "]: " << yes << "/" << questions.size()
            << " Yes";
        if (relevance_n > 0) {
            out << ", mean explanatory relevance "
                << fixed(relevance_sum / relevance_n, 4);
        }
        auto failures = record.value("failures", nlohmann::json::array());
        if (!failures.empty()) out << ", " << failures.size() << " failed question(s)";
        out << '\n';
    }
    return out.str();
}

}  // namespace p2b
