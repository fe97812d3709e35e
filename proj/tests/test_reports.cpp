#include <doctest.h>

#include "p2b/reports.hpp"

#include <json.hpp>

#include "helpers.hpp"

using namespace p2b;
using p2b_test::source_path;

namespace {

const Checklist& bank() {
    static Checklist checklist = Checklist::load(source_path("data/checklist.json"));
    return checklist;
}

std::vector<std::string> ids_for(PlatformType type) {
    std::vector<std::string> ids;
    for (auto& q : bank().questions_for(type)) ids.push_back(q.id);
    return ids;
}

// Three experts whose majority is `truth` for every question.
void append_labels(std::vector<ExpertLabel>& labels, const std::string& platform,
                   const std::vector<std::string>& ids,
                   const std::map<std::string, Binary>& truth) {
    for (auto& id : ids) {
        int base = truth.at(id) == Binary::Yes ? 4 : 1;
        labels.push_back({"expert_1", platform, id, base});
        labels.push_back({"expert_2", platform, id, base + 1});
        labels.push_back({"expert_3", platform, id, base});
    }
}

nlohmann::json record_matching(const std::string& platform, PlatformType type,
                               const std::string& strategy,
                               const std::vector<std::string>& ids,
                               const std::map<std::string, Binary>& truth,
                               int matches) {
    nlohmann::json questions = nlohmann::json::array();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        Binary b = truth.at(ids[i]);
        if (static_cast<int>(i) >= matches) b = b == Binary::Yes ? Binary::No : Binary::Yes;
        questions.push_back({{"question_id", ids[i]}, {"binary", to_string(b)}});
    }
    return {{"platform", platform},
            {"platform_type", to_string(type)},
            {"strategy", strategy},
            {"questions", questions}};
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("agreement matrix reproduces the reference tool-vs-expert table") {
    // Match counts per tool, reconstructed from the reference percentages,
    // and the Yes-count of the expert majority per platform (which pins the
    // always-yes column).
    struct Row {
        const char* platform;
        PlatformType type;
        int chatgpt35, chatgpt4, dox_based, yes_count;
        const char *s35, *s4, *sdox, *say;
    };
    const std::vector<Row> table = {
        {"Bing", PlatformType::SearchEngine, 13, 6, 13, 14,
         "68.42", "31.58", "68.42", "73.68"},
        {"Booking", PlatformType::Intermediation, 13, 5, 6, 1,
         "76.47", "29.41", "35.29", "5.88"},
        {"Tripadvisor", PlatformType::Intermediation, 10, 9, 11, 10,
         "58.82", "52.94", "64.71", "58.82"},
        {"Amazon", PlatformType::Intermediation, 8, 9, 11, 11,
         "47.06", "52.94", "64.71", "64.71"},
        {"Google", PlatformType::SearchEngine, 7, 11, 10, 6,
         "36.84", "57.89", "52.63", "31.58"},
        {"Yahoo", PlatformType::SearchEngine, 18, 18, 18, 1,
         "94.74", "94.74", "94.74", "5.26"},
    };

    std::vector<ExpertLabel> labels;
    std::vector<nlohmann::json> records;
    for (auto& row : table) {
        auto ids = ids_for(row.type);
        std::map<std::string, Binary> truth;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            truth[ids[i]] = static_cast<int>(i) < row.yes_count ? Binary::Yes : Binary::No;
        }
        append_labels(labels, row.platform, ids, truth);
        records.push_back(
            record_matching(row.platform, row.type, "chatgpt35", ids, truth, row.chatgpt35));
        records.push_back(
            record_matching(row.platform, row.type, "chatgpt4", ids, truth, row.chatgpt4));
        records.push_back(
            record_matching(row.platform, row.type, "dox_based", ids, truth, row.dox_based));
    }

    auto matrix = build_agreement_matrix(records, labels, bank(), 42);

    CHECK(matrix.platforms == std::vector<std::string>{"Amazon", "Bing", "Booking",
                                                       "Google", "Tripadvisor", "Yahoo"});
    CHECK(matrix.strategies ==
          std::vector<std::string>{"chatgpt35", "chatgpt4", "dox_based", "random",
                                   "always_yes"});

    for (auto& row : table) {
        CHECK(matrix.cells.at("chatgpt35").at(row.platform).rate_str() == row.s35);
        CHECK(matrix.cells.at("chatgpt4").at(row.platform).rate_str() == row.s4);
        CHECK(matrix.cells.at("dox_based").at(row.platform).rate_str() == row.sdox);
        CHECK(matrix.cells.at("always_yes").at(row.platform).rate_str() == row.say);
        // The random column exists but its values are seed-dependent.
        CHECK(matrix.cells.at("random").count(row.platform) == 1);
    }

    CHECK(matrix.pooled.at("chatgpt35").matches == 69);
    CHECK(matrix.pooled.at("chatgpt35").rate_str() == "63.89");
    CHECK(matrix.pooled.at("chatgpt4").matches == 58);
    CHECK(matrix.pooled.at("chatgpt4").rate_str() == "53.70");
    CHECK(matrix.pooled.at("dox_based").matches == 69);
    CHECK(matrix.pooled.at("dox_based").rate_str() == "63.89");
    CHECK(matrix.pooled.at("always_yes").matches == 43);
    CHECK(matrix.pooled.at("always_yes").rate_str() == "39.81");
    CHECK(matrix.pooled.at("chatgpt35").total == 108);

    auto csv = render_agreement_csv(matrix);
    auto lines = lines_of(csv);
    REQUIRE(lines.size() == 8);  // header + 6 platforms + All
    CHECK(lines[0] == "platform,chatgpt35,chatgpt4,dox_based,random,always_yes");
    CHECK(lines[6].rfind("Yahoo,94.74,94.74,94.74,", 0) == 0);
    CHECK(lines[6].substr(lines[6].size() - 5) == ",5.26");
    CHECK(lines[7].rfind("All,63.89,53.70,63.89,", 0) == 0);
    CHECK(lines[7].substr(lines[7].size() - 6) == ",39.81");

    auto human = render_agreement_table(matrix);
    CHECK(human.find("chatgpt35 69/108 (63.89%)") != std::string::npos);
    CHECK(human.find("always_yes 43/108 (39.81%)") != std::string::npos);
}

TEST_CASE("self-evaluation scores 100% everywhere") {
    auto ids = ids_for(PlatformType::SearchEngine);
    std::map<std::string, Binary> truth;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        truth[ids[i]] = i % 3 == 0 ? Binary::Yes : Binary::No;
    }
    auto record = record_matching("Bing", PlatformType::SearchEngine, "direct", ids,
                                  truth, static_cast<int>(ids.size()));
    std::vector<ExpertLabel> labels;
    append_labels(labels, "Bing", ids, truth);

    auto matrix = build_agreement_matrix({record}, labels, bank(), 42);
    CHECK(matrix.cells.at("direct").at("Bing").rate_str() == "100.00");
    CHECK(matrix.pooled.at("direct").rate_str() == "100.00");
}

TEST_CASE("label sets that miss the record platforms are rejected") {
    auto ids = ids_for(PlatformType::SearchEngine);
    std::map<std::string, Binary> truth;
    for (auto& id : ids) truth[id] = Binary::Yes;
    auto record = record_matching("Bing", PlatformType::SearchEngine, "direct", ids,
                                  truth, 10);

    CHECK_THROWS_AS(build_agreement_matrix({record}, {}, bank(), 42), KeyMismatch);

    std::vector<ExpertLabel> elsewhere;
    append_labels(elsewhere, "Altavista", ids, truth);
    CHECK_THROWS_AS(build_agreement_matrix({record}, elsewhere, bank(), 42), KeyMismatch);
}

TEST_CASE("a strategy covering only some platforms leaves other cells empty") {
    auto ids = ids_for(PlatformType::SearchEngine);
    std::map<std::string, Binary> truth;
    for (auto& id : ids) truth[id] = Binary::Yes;

    std::vector<ExpertLabel> labels;
    append_labels(labels, "Bing", ids, truth);
    append_labels(labels, "Google", ids, truth);

    std::vector<nlohmann::json> records = {
        record_matching("Bing", PlatformType::SearchEngine, "direct", ids, truth, 19),
        record_matching("Google", PlatformType::SearchEngine, "direct", ids, truth, 10),
        record_matching("Bing", PlatformType::SearchEngine, "dox", ids, truth, 13),
    };
    auto matrix = build_agreement_matrix(records, labels, bank(), 42);

    CHECK(matrix.cells.at("dox").count("Google") == 0);
    CHECK(matrix.pooled.at("dox").total == 19);  // Bing only
    CHECK(matrix.pooled.at("direct").total == 38);

    auto lines = lines_of(render_agreement_csv(matrix));
    REQUIRE(lines.size() == 4);
    auto google = split_csv_line(lines[2]);
    REQUIRE(google.size() == 5);  // platform, direct, dox, random, always_yes
    CHECK(google[0] == "Google");
    CHECK(google[1] == "52.63");
    CHECK(google[2].empty());
}

TEST_CASE("survey summary on the participant fixture is ordered and complete") {
    auto ratings =
        load_participant_ratings(source_path("fixtures/labels/participant_ratings.csv"));
    auto rows = survey_summary(ratings, 0.0);
    REQUIRE(rows.size() == 8);

    const std::vector<std::pair<std::string, std::string>> expected_order = {
        {"Booking", "Q3"},  {"Booking", "Q4"},  {"Booking", "Q15"},  {"Booking", "Q16"},
        {"Tripadvisor", "Q3"}, {"Tripadvisor", "Q4"}, {"Tripadvisor", "Q15"},
        {"Tripadvisor", "Q16"},
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].platform == expected_order[i].first);
        CHECK(rows[i].question_id == expected_order[i].second);
        CHECK(rows[i].stats.n == 100);
        CHECK(rows[i].stats.mean.has_value());
        CHECK(rows[i].stats.std_dev.has_value());
    }

    auto csv = render_survey_csv(rows);
    auto lines = lines_of(csv);
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == "platform,question_id,n,mean,std");
    auto first = split_csv_line(lines[1]);
    REQUIRE(first.size() == 5);
    CHECK(first[0] == "Booking");
    CHECK(first[1] == "Q3");
    CHECK(first[2] == "100");
    CHECK(first[3].find('.') != std::string::npos);

    auto human = render_survey_table(rows);
    CHECK(human.find("Booking Q3: ") != std::string::npos);
    CHECK(human.find(" +/- ") != std::string::npos);
    CHECK(human.find("(n=100)") != std::string::npos);

    // An impossible duration threshold empties the table but not the header.
    CHECK(survey_summary(ratings, 1e9).empty());
    CHECK(render_survey_csv({}) == "platform,question_id,n,mean,std\n");
}

TEST_CASE("rank-test listing walks a hand-checked example") {
    std::vector<ParticipantRating> ratings = {
        {"p1", "Booking", "Q3", 5, 10.0},
        {"p2", "Booking", "Q3", 4, 10.0},
        {"p3", "Tripadvisor", "Q3", 1, 10.0},
        {"p4", "Booking", "Q9", 3, 10.0},  // no Tripadvisor counterpart
    };
    auto rows = survey_mwu_listing(ratings, 0.0);
    REQUIRE(rows.size() == 1);
    auto& row = rows[0];
    CHECK(row.question_id == "Q3");
    CHECK(row.n_booking == 2);
    CHECK(row.n_tripadvisor == 1);
    CHECK(row.u_statistic == doctest::Approx(2.0));
    CHECK(row.method == "exact");
    CHECK(row.p_less == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.p_greater == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(row.rank_biserial_value == doctest::Approx(-1.0));
    CHECK(row.cles == doctest::Approx(1.0));

    auto csv = render_mwu_csv(rows);
    auto lines = lines_of(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "question_id,n_booking,n_tripadvisor,u_statistic,method,p_less,p_greater,"
          "rank_biserial,cles");
    CHECK(lines[1] == "Q3,2,1,2.0,exact,1.000000,0.333333,-1.0000,1.0000");
}

TEST_CASE("rank-test listing on the fixture uses the approximation at n=100") {
    auto ratings =
        load_participant_ratings(source_path("fixtures/labels/participant_ratings.csv"));
    auto rows = survey_mwu_listing(ratings, 0.0);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].question_id == "Q3");
    CHECK(rows[1].question_id == "Q4");
    CHECK(rows[2].question_id == "Q15");
    CHECK(rows[3].question_id == "Q16");
    for (auto& row : rows) {
        CHECK(row.n_booking == 100);
        CHECK(row.n_tripadvisor == 100);
        CHECK(row.method == "normal");
        CHECK(row.p_less > 0.0);
        CHECK(row.p_less < 1.0);
        CHECK(row.p_greater > 0.0);
        CHECK(row.p_greater < 1.0);
        CHECK(row.rank_biserial_value ==
              doctest::Approx(1.0 - 2.0 * row.u_statistic / (100.0 * 100.0)));
        CHECK(row.cles >= 0.0);
        CHECK(row.cles <= 1.0);
    }

    auto human = render_mwu_table(rows);
    CHECK(human.find("Q3: U=") != std::string::npos);
    CHECK(human.find("normal, n=100/100") != std::string::npos);
}

TEST_CASE("corpus stats table preserves the given row order") {
    CorpusStats yahoo{3, 522, 17400};
    CorpusStats amazon{5, 2172, 43440};
    auto text = render_corpus_stats_table({{"Yahoo", yahoo}, {"Amazon", amazon}});
    auto lines = lines_of(text);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "platform,links,avg_words_per_doc");
    CHECK(lines[1] == "Yahoo,3,174.00");
    CHECK(lines[2] == "Amazon,5,434.40");
}

TEST_CASE("record summary digests answers, relevance, and failures") {
    nlohmann::json direct = {
        {"platform", "Booking"},
        {"strategy", "direct"},
        {"questions",
         {{{"question_id", "Q1"}, {"binary", "Yes"}},
          {{"question_id", "Q2"}, {"binary", "No"}},
          {{"question_id", "Q3"}, {"binary", "Yes"}}}},
    };
    nlohmann::json retrieval = {
        {"platform", "Booking"},
        {"strategy", "retrieval_dox"},
        {"questions",
         {{{"question_id", "Q1"}, {"binary", "Yes"}, {"explanatory_relevance", 0.5}},
          {{"question_id", "Q2"}, {"binary", "No"}, {"explanatory_relevance", 0.1}}}},
        {"failures", {{{"question_id", "Q3"}, {"error", "ProviderUnavailable"}}}},
    };
    auto digest = render_record_summary({direct, retrieval});
    CHECK(digest.find("Booking [direct]: 2/3 Yes\n") != std::string::npos);
    CHECK(digest.find("Booking [retrieval_dox]: 1/2 Yes, mean explanatory relevance "
                      "0.3000, 1 failed question(s)\n") != std::string::npos);
}
