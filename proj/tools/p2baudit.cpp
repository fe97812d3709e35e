#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "p2b/checklist.hpp"
#include "p2b/corpus.hpp"
#include "p2b/dox.hpp"
#include "p2b/errors.hpp"
#include "p2b/evaluation.hpp"
#include "p2b/pipeline.hpp"
#include "p2b/providers.hpp"
#include "p2b/records.hpp"
#include "p2b/reports.hpp"

namespace fs = std::filesystem;

namespace {

#ifndef P2B_SOURCE_DIR
#define P2B_SOURCE_DIR "."
#endif

std::string default_checklist_path() { return P2B_SOURCE_DIR "/data/checklist.json"; }
std::string default_archetypes_path() { return P2B_SOURCE_DIR "/data/archetypes.json"; }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw p2b::MissingFile("cannot write " + path.string());
    out << text;
}

// Record files are JSON objects with "strategy" and "questions"; anything
// else in the directory (failures.json, reports) is skipped.
std::vector<nlohmann::json> load_records_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw p2b::MissingFile("record directory not found: " + dir.string());
    }
    std::vector<fs::path> paths;
    for (auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<nlohmann::json> records;
    for (auto& path : paths) {
        auto j = p2b::load_record(path);
        if (j.is_object() && j.contains("strategy") && j.contains("questions")) {
            records.push_back(std::move(j));
        }
    }
    if (records.empty()) {
        throw p2b::MissingFile("no assessment records in " + dir.string());
    }
    return records;
}

int cmd_stats(const std::vector<std::string>& manifests) {
    std::vector<std::pair<std::string, p2b::CorpusStats>> rows;
    for (auto& m : manifests) {
        auto corpus = p2b::load_manifest(m);
        rows.emplace_back(corpus.platform_name, p2b::corpus_stats(corpus));
    }
    std::cout << p2b::render_corpus_stats_table(rows);
    return 0;
}

struct AssessArgs {
    std::vector<std::string> manifests;
    std::string config_path;
    bool mock = false;
    std::string strategy = "both";
    std::string out_dir = "records";
    std::uint64_t seed = 42;
    std::string checklist_path = default_checklist_path();
    std::string archetypes_path = default_archetypes_path();
    int k = 20;
    double theta = 0.55;
    std::string aspect = "the ranking mechanism";
};

int cmd_assess(const AssessArgs& args) {
    if (!args.mock && args.config_path.empty()) {
        throw p2b::ConfigError("--config is required unless --mock is given");
    }
    auto checklist = p2b::Checklist::load(args.checklist_path);
    auto archetypes = p2b::load_archetype_templates(args.archetypes_path);

    p2b::Providers providers =
        args.mock ? p2b::make_mock_providers(args.seed)
                  : p2b::make_http_providers(p2b::load_provider_config(args.config_path));

    bool run_direct = args.strategy == "direct" || args.strategy == "both";
    bool run_dox = args.strategy == "dox" || args.strategy == "both";

    fs::create_directories(args.out_dir);
    nlohmann::json failure_manifest = nlohmann::json::array();
    for (auto& manifest : args.manifests) {
        auto corpus = p2b::load_manifest(manifest);
        // Mock runs must be byte-identical, so they take their timestamp
        // from the corpus instead of the clock.
        auto timestamp = args.mock ? p2b::latest_fetched_at(corpus) : p2b::utc_now_iso8601();

        auto persist = [&](p2b::Strategy strategy, auto&& run) {
            auto name = p2b::record_filename(corpus.platform_name, strategy);
            try {
                p2b::AssessmentRecord result = run();
                p2b::write_record(result.record, fs::path(args.out_dir) / name);
                for (auto& f : result.failures) {
                    failure_manifest.push_back({{"platform", corpus.platform_name},
                                                {"strategy", p2b::to_string(strategy)},
                                                {"question_id", f.question_id},
                                                {"error", f.error}});
                }
            } catch (const p2b::Error& e) {
                failure_manifest.push_back({{"platform", corpus.platform_name},
                                            {"strategy", p2b::to_string(strategy)},
                                            {"error", e.what()}});
            }
        };

        if (run_direct) {
            persist(p2b::Strategy::Direct, [&] {
                return p2b::run_direct_assessment(corpus, checklist, *providers.generator,
                                                  providers.generation, timestamp,
                                                  providers.concurrency_cap);
            });
        }
        if (run_dox) {
            persist(p2b::Strategy::RetrievalDox, [&] {
                p2b::RetrievalDoxOptions options;
                options.k = args.k;
                options.theta = args.theta;
                options.aspect = args.aspect;
                return p2b::run_retrieval_dox_assessment(
                    corpus, checklist, *providers.generator, *providers.embedder,
                    providers.generation, archetypes, options, timestamp,
                    providers.concurrency_cap);
            });
        }
    }

    if (!failure_manifest.empty()) {
        p2b::write_record(failure_manifest, fs::path(args.out_dir) / "failures.json");
        std::cerr << failure_manifest.size() << " failure(s); see "
                  << (fs::path(args.out_dir) / "failures.json").string() << "\n";
        return 1;
    }
    return 0;
}

struct EvaluateArgs {
    std::string records_dir;
    std::string expert_path;
    std::string participants_path;
    std::string out_dir = "reports";
    std::uint64_t seed = 42;
    double min_minutes = 0.0;
    std::string checklist_path = default_checklist_path();
};

int cmd_evaluate(const EvaluateArgs& args) {
    auto records = load_records_dir(args.records_dir);
    auto checklist = p2b::Checklist::load(args.checklist_path);
    auto labels = p2b::load_expert_labels(args.expert_path);

    auto matrix = p2b::build_agreement_matrix(records, labels, checklist, args.seed);

    fs::create_directories(args.out_dir);
    write_text(fs::path(args.out_dir) / "agreement_matrix.csv",
               p2b::render_agreement_csv(matrix));

    std::string summary = p2b::render_agreement_table(matrix);

    if (!args.participants_path.empty()) {
        auto ratings = p2b::load_participant_ratings(args.participants_path);
        auto survey = p2b::survey_summary(ratings, args.min_minutes);
        write_text(fs::path(args.out_dir) / "survey_summary.csv",
                   p2b::render_survey_csv(survey));
        auto mwu = p2b::survey_mwu_listing(ratings, args.min_minutes);
        write_text(fs::path(args.out_dir) / "mwu_tests.csv", p2b::render_mwu_csv(mwu));
        summary += "\n" + p2b::render_survey_table(survey);
        summary += "\n" + p2b::render_mwu_table(mwu);
    }

    write_text(fs::path(args.out_dir) / "summary.txt", summary);
    std::cout << summary;
    return 0;
}

int cmd_report(const std::string& records_dir, const std::string& out_dir) {
    auto records = load_records_dir(records_dir);
    auto digest = p2b::render_record_summary(records);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "record_summary.txt", digest);
    }
    std::cout << digest;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audits ranking-transparency documentation against a compliance checklist"};
    app.require_subcommand(1);

    auto* stats = app.add_subcommand("stats", "Corpus statistics per platform manifest");
    std::vector<std::string> stats_manifests;
    stats->add_option("manifests", stats_manifests, "corpus manifest files")->required();

    auto* assess = app.add_subcommand("assess", "Run assessment strategies over corpora");
    AssessArgs assess_args;
    assess->add_option("manifests", assess_args.manifests, "corpus manifest files")->required();
    assess->add_option("--config", assess_args.config_path, "provider config JSON");
    assess->add_flag("--mock", assess_args.mock, "use deterministic mock providers");
    assess->add_option("--strategy", assess_args.strategy, "direct|dox|both")
        ->check(CLI::IsMember({"direct", "dox", "both"}))
        ->capture_default_str();
    assess->add_option("--out", assess_args.out_dir, "record output directory")
        ->capture_default_str();
    assess->add_option("--seed", assess_args.seed, "mock provider seed")->capture_default_str();
    assess->add_option("--checklist", assess_args.checklist_path, "checklist JSON")
        ->capture_default_str();
    assess->add_option("--archetypes", assess_args.archetypes_path, "archetype templates JSON")
        ->capture_default_str();
    assess->add_option("--k", assess_args.k, "paragraphs retrieved per question")
        ->capture_default_str();
    assess->add_option("--theta", assess_args.theta, "answerability threshold")
        ->capture_default_str();
    assess->add_option("--aspect", assess_args.aspect, "aspect for archetype questions")
        ->capture_default_str();

    auto* evaluate = app.add_subcommand("evaluate", "Compare records against label fixtures");
    EvaluateArgs eval_args;
    evaluate->add_option("--records", eval_args.records_dir, "assessment record directory")
        ->required();
    evaluate->add_option("--expert", eval_args.expert_path, "expert label CSV")->required();
    evaluate->add_option("--participants", eval_args.participants_path,
                         "participant rating CSV");
    evaluate->add_option("--out", eval_args.out_dir, "report output directory")
        ->capture_default_str();
    evaluate->add_option("--seed", eval_args.seed, "random baseline seed")
        ->capture_default_str();
    evaluate->add_option("--min-minutes", eval_args.min_minutes,
                         "drop ratings read for fewer minutes")
        ->capture_default_str();
    evaluate->add_option("--checklist", eval_args.checklist_path, "checklist JSON")
        ->capture_default_str();

    auto* report = app.add_subcommand("report", "Digest persisted records without labels");
    std::string report_records;
    std::string report_out;
    report->add_option("--records", report_records, "assessment record directory")->required();
    report->add_option("--out", report_out, "optional output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats->parsed()) return cmd_stats(stats_manifests);
        if (assess->parsed()) return cmd_assess(assess_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
        if (report->parsed()) return cmd_report(report_records, report_out);
    } catch (const p2b::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
