#include "p2b/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace p2b {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            if (line != expected_header) {
                throw MalformedLabelFile(path.string() + ": expected header '" +
                                         expected_header + "', got '" + line + "'");
            }
            first = false;
            continue;
        }
        rows.push_back(split_line(line));
    }
    if (first) throw MalformedLabelFile(path.string() + ": empty file");
    return rows;
}

int parse_bounded_int(const std::string& s, int lo, int hi,
                      const std::string& context) {
    int v;
    try {
        std::size_t used;
        v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw MalformedLabelFile(context + ": not an integer: '" + s + "'");
    }
    if (v < lo || v > hi) {
        throw MalformedLabelFile(context + ": " + s + " outside [" +
                                 std::to_string(lo) + "," + std::to_string(hi) + "]");
    }
    return v;
}

}  // namespace

std::vector<ExpertLabel> load_expert_labels(const std::filesystem::path& path) {
    std::vector<ExpertLabel> labels;
    for (auto& row : read_csv(path, "expert_id,platform,question_id,score")) {
        if (row.size() != 4) {
            throw MalformedLabelFile(path.string() + ": expected 4 fields, got " +
                                     std::to_string(row.size()));
        }
        ExpertLabel l{row[0], row[1], row[2], 0};
        l.score = parse_bounded_int(row[3], 1, 5, path.string() + " score");
        labels.push_back(std::move(l));
    }
    return labels;
}

std::vector<ParticipantRating> load_participant_ratings(const std::filesystem::path& path) {
    std::vector<ParticipantRating> ratings;
    for (auto& row :
         read_csv(path, "participant_id,platform,question_id,agreement,read_minutes")) {
        if (row.size() != 5) {
            throw MalformedLabelFile(path.string() + ": expected 5 fields, got " +
                                     std::to_string(row.size()));
        }
        ParticipantRating r{row[0], row[1], row[2], 0, 0.0};
        r.agreement = parse_bounded_int(row[3], 1, 5, path.string() + " agreement");
        try {
            r.read_minutes = std::stod(row[4]);
        } catch (const std::exception&) {
            throw MalformedLabelFile(path.string() + ": bad read_minutes '" + row[4] + "'");
        }
        if (r.read_minutes < 0) {
            throw MalformedLabelFile(path.string() + ": negative read_minutes");
        }
        ratings.push_back(std::move(r));
    }
    return ratings;
}

Binary majority_label(const std::vector<ExpertLabel>& labels) {
    if (labels.empty() || labels.size() % 2 == 0) {
        throw EvenLabelCount(std::to_string(labels.size()) + " labels");
    }
    std::size_t yes = 0;
    for (auto& l : labels) {
        if (normalize_binary(l.score) == Binary::Yes) ++yes;
    }
    return yes * 2 > labels.size() ? Binary::Yes : Binary::No;
}

AgreementCell agreement_rate(const std::map<std::string, Binary>& tool,
                             const std::map<std::string, Binary>& truth) {
    if (tool.size() != truth.size() ||
        !std::equal(tool.begin(), tool.end(), truth.begin(),
                    [](auto& a, auto& b) { return a.first == b.first; })) {
        std::string diff;
        for (auto& [q, v] : tool) {
            if (!truth.count(q)) diff += " +" + q;
        }
        for (auto& [q, v] : truth) {
            if (!tool.count(q)) diff += " -" + q;
        }
        throw KeyMismatch("question sets differ:" + diff);
    }
    AgreementCell cell;
    cell.total = static_cast<long long>(truth.size());
    for (auto& [q, v] : tool) {
        if (truth.at(q) == v) ++cell.matches;
    }
    cell.rate_hundredths = percent_hundredths(cell.matches, cell.total);
    return cell;
}

AgreementCell pooled_agreement(const std::vector<AgreementCell>& cells) {
    if (cells.empty()) throw EmptyList("pooled agreement over zero cells");
    AgreementCell pooled;
    for (auto& c : cells) {
        pooled.matches += c.matches;
        pooled.total += c.total;
    }
    pooled.rate_hundredths = percent_hundredths(pooled.matches, pooled.total);
    return pooled;
}

std::map<std::string, Binary> always_yes_baseline(const std::vector<std::string>& question_ids) {
    std::map<std::string, Binary> out;
    for (auto& q : question_ids) out[q] = Binary::Yes;
    return out;
}

std::map<std::string, Binary> random_baseline(const std::vector<std::string>& question_ids,
                                              std::uint64_t seed) {
    std::map<std::string, Binary> out;
    SplitMix64 g(seed);
    for (auto& q : question_ids) {
        out[q] = (g.next() >> 63) ? Binary::Yes : Binary::No;
    }
    return out;
}

namespace {

double phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Midranks of the combined sample; returns (rank sum of a, tie term
// sum(t^3 - t), any_ties).
struct RankInfo {
    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    bool has_ties = false;
};

RankInfo midranks(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<std::pair<double, int>> all;  // value, group (0 = a)
    all.reserve(a.size() + b.size());
    for (double x : a) all.emplace_back(x, 0);
    for (double y : b) all.emplace_back(y, 1);
    std::sort(all.begin(), all.end(),
              [](auto& l, auto& r) { return l.first < r.first; });

    RankInfo info;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double t = static_cast<double>(j - i);
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].second == 0) info.rank_sum_a += avg_rank;
        }
        if (t > 1) {
            info.has_ties = true;
            info.tie_term += t * t * t - t;
        }
        i = j;
    }
    return info;
}

// Null distribution counts of U for tie-free samples:
// N(u; n1, n2) = N(u - n2; n1-1, n2) + N(u; n1, n2-1).
std::vector<long long> exact_u_counts(int n1, int n2) {
    int umax = n1 * n2;
    std::vector<std::vector<long long>> cur(n2 + 1, std::vector<long long>(umax + 1, 0));
    for (int j = 0; j <= n2; ++j) cur[j][0] = 1;  // n1 = 0
    for (int i = 1; i <= n1; ++i) {
        std::vector<std::vector<long long>> next(n2 + 1,
                                                 std::vector<long long>(umax + 1, 0));
        next[0][0] = 1;  // n2 = 0
        for (int j = 1; j <= n2; ++j) {
            for (int u = 0; u <= i * j; ++u) {
                long long from_a = u >= j ? cur[j][u - j] : 0;
                next[j][u] = from_a + next[j - 1][u];
            }
        }
        cur = std::move(next);
    }
    return cur[n2];
}

}  // namespace

MwuResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                         Alternative alternative) {
    if (a.empty() || b.empty()) throw EmptySample("mann_whitney_u needs both samples");
    const int n1 = static_cast<int>(a.size());
    const int n2 = static_cast<int>(b.size());
    auto info = midranks(a, b);
    const double u = info.rank_sum_a - static_cast<double>(n1) * (n1 + 1) / 2.0;

    MwuResult result;
    result.u_statistic = u;

    if (!info.has_ties && n1 + n2 <= 12) {
        result.method = MwuMethod::Exact;
        auto counts = exact_u_counts(n1, n2);
        long long total = 0;
        for (long long c : counts) total += c;
        const long long observed = std::llround(u);
        long long favorable = 0;
        if (alternative == Alternative::Less) {
            for (long long v = 0; v <= observed; ++v) favorable += counts[v];
        } else {
            for (long long v = observed; v <= static_cast<long long>(n1) * n2; ++v) {
                favorable += counts[v];
            }
        }
        result.p_value = static_cast<double>(favorable) / static_cast<double>(total);
        return result;
    }

    result.method = MwuMethod::NormalApprox;
    const double n = n1 + n2;
    const double mu = static_cast<double>(n1) * n2 / 2.0;
    const double sigma_sq = (static_cast<double>(n1) * n2 / 12.0) *
                            ((n + 1.0) - info.tie_term / (n * (n - 1.0)));
    if (sigma_sq <= 0.0) {
        result.p_value = 1.0;  // every observation tied; no evidence either way
        return result;
    }
    const double sigma = std::sqrt(sigma_sq);
    double p;
    if (alternative == Alternative::Less) {
        p = phi((u + 0.5 - mu) / sigma);
    } else {
        p = 1.0 - phi((u - 0.5 - mu) / sigma);
    }
    result.p_value = std::clamp(p, 1e-300, 1.0);
    return result;
}

double rank_biserial(double u, int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw EmptySample("rank_biserial needs both group sizes");
    const double pairs = static_cast<double>(n1) * n2;
    if (u < 0.0 || u > pairs) {
        throw OutOfRangeU(std::to_string(u) + " outside [0," + std::to_string(pairs) + "]");
    }
    return 1.0 - 2.0 * u / pairs;
}

double common_language_effect_size(const std::vector<double>& a,
                                   const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw EmptySample("effect size needs both samples");
    double wins = 0.0;
    for (double x : a) {
        for (double y : b) {
            if (x > y) {
                wins += 1.0;
            } else if (x == y) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::map<std::pair<std::string, std::string>, CellStats> duration_filtered_means(
    const std::vector<ParticipantRating>& ratings, double min_minutes) {
    std::map<std::pair<std::string, std::string>, std::vector<int>> cells;
    for (auto& r : ratings) {
        if (r.read_minutes >= min_minutes) {
            cells[{r.platform, r.question_id}].push_back(r.agreement);
        }
    }
    std::map<std::pair<std::string, std::string>, CellStats> out;
    for (auto& [key, values] : cells) {
        CellStats stats;
        stats.n = static_cast<int>(values.size());
        double sum = 0.0;
        for (int v : values) sum += v;
        double mean = sum / stats.n;
        stats.mean = mean;
        if (stats.n >= 2) {
            double ss = 0.0;
            for (int v : values) ss += (v - mean) * (v - mean);
            stats.std_dev = std::sqrt(ss / (stats.n - 1));
        }
        out[key] = stats;
    }
    return out;
}

}  // namespace p2b
