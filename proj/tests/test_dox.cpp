#include <doctest.h>

#include "p2b/dox.hpp"

#include <cmath>

#include "helpers.hpp"

using namespace p2b;
using p2b_test::ScriptedEmbedder;
using p2b_test::source_path;

namespace {

// Embedder with every archetype question at angle zero, so a sentence
// scripted via script_pertinence gets exactly that pertinence against all
// eight archetypes.
ScriptedEmbedder aligned_embedder(const ArchetypeSet& set) {
    ScriptedEmbedder embedder;
    for (auto& q : set.instantiate()) embedder.script(q, {1.0, 0.0});
    return embedder;
}

}  // namespace

TEST_CASE("sentence_split on simple prose") {
    auto s = sentence_split("A is B. C is D.");
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "A is B.");
    CHECK(s[1] == "C is D.");

    CHECK(sentence_split("").empty());
    CHECK(sentence_split("   ").empty());

    auto single = sentence_split("No trailing punctuation here");
    REQUIRE(single.size() == 1);
    CHECK(single[0] == "No trailing punctuation here");
}

TEST_CASE("sentence_split keeps citation groups intact") {
    auto s = sentence_split("Works (paragraphs 1 and 2). Done.");
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "Works (paragraphs 1 and 2).");
    CHECK(s[1] == "Done.");

    auto guarded = sentence_split("He said (see p. 4) nothing. Then left.");
    REQUIRE(guarded.size() == 2);
    CHECK(guarded[0] == "He said (see p. 4) nothing.");
}

TEST_CASE("sentence_split needs a capital after the break") {
    auto s = sentence_split("Version 2. 5 was skipped. The end.");
    // "2. 5" does not break (no capital); "skipped. The" does.
    REQUIRE(s.size() == 2);
    CHECK(s[0] == "Version 2. 5 was skipped.");
    CHECK(s[1] == "The end.");
}

TEST_CASE("default archetype set covers the eight fundamental questions") {
    auto& defaults = default_archetype_templates();
    REQUIRE(defaults.size() == 8);
    std::vector<std::string> names;
    for (auto& t : defaults) names.push_back(t.archetype);
    CHECK(names == std::vector<std::string>{"Why", "What", "How", "When", "Who", "Where",
                                            "What-for", "What-if"});
    for (auto& t : defaults) {
        CAPTURE(t.archetype);
        CHECK(t.text.find("{aspect}") != std::string::npos);
        CHECK(t.text.back() == '?');
    }
}

TEST_CASE("archetype data file matches the built-in defaults") {
    auto loaded = load_archetype_templates(source_path("data/archetypes.json"));
    auto& defaults = default_archetype_templates();
    REQUIRE(loaded.size() == defaults.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].archetype == defaults[i].archetype);
        CHECK(loaded[i].text == defaults[i].text);
    }
    CHECK_THROWS_AS(load_archetype_templates(source_path("data/none.json")), MissingFile);
}

TEST_CASE("archetype instantiation substitutes the aspect everywhere") {
    auto set = make_archetype_set("the ranking mechanism");
    auto questions = set.instantiate();
    REQUIRE(questions.size() == 8);
    CHECK(questions[0] == "Why does the ranking mechanism behave this way?");
    CHECK(questions[1] == "What is the ranking mechanism?");
    for (auto& q : questions) {
        CHECK(q.find("{aspect}") == std::string::npos);
        CHECK(q.find("the ranking mechanism") != std::string::npos);
    }
}

TEST_CASE("answerability: noisy-or over thresholded pertinences") {
    CHECK(archetype_answerability({}, 0.5) == doctest::Approx(0.0));
    CHECK(archetype_answerability({1.0}, 0.5) == doctest::Approx(1.0));
    CHECK(archetype_answerability({0.75, 0.75}, 0.5) == doctest::Approx(0.75));
    CHECK(archetype_answerability({0.5}, 0.5) == doctest::Approx(0.0));
    CHECK(archetype_answerability({0.3, 0.2}, 0.5) == doctest::Approx(0.0));

    CHECK_THROWS_AS(archetype_answerability({0.5}, -0.1), BadThreshold);
    CHECK_THROWS_AS(archetype_answerability({0.5}, 1.0), BadThreshold);
    CHECK_NOTHROW(archetype_answerability({0.5}, 0.0));
}

TEST_CASE("answerability matches an independent evaluation on a grid") {
    const double theta = 0.55;
    auto rescale = [&](double p) { return std::max(0.0, p - theta) / (1.0 - theta); };
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            double p1 = i / 10.0, p2 = j / 10.0;
            double expected = 1.0 - (1.0 - rescale(p1)) * (1.0 - rescale(p2));
            CHECK(archetype_answerability({p1, p2}, theta) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("answerability is monotone and bounded") {
    std::vector<double> base = {0.6, 0.7};
    double before = archetype_answerability(base, 0.55);
    base.push_back(0.8);
    double after = archetype_answerability(base, 0.55);
    CHECK(after >= before);
    CHECK(after <= 1.0);
    CHECK(before >= 0.0);
}

TEST_CASE("empty answer text scores zero without touching the embedder") {
    auto set = make_archetype_set("the ranking mechanism");
    ScriptedEmbedder untouchable;  // throws on any embed call
    auto result = dox_score(untouchable, set, "", 0.55);
    CHECK(result.dox == doctest::Approx(0.0));
    REQUIRE(result.per_archetype.size() == 8);
    for (auto& [name, value] : result.per_archetype) CHECK(value == doctest::Approx(0.0));
}

TEST_CASE("dox is the mean archetype answerability") {
    auto set = make_archetype_set("the ranking mechanism");
    auto embedder = aligned_embedder(set);
    embedder.script_pertinence("Alpha covers the topic well.", 0.8);

    auto result = dox_score(embedder, set, "Alpha covers the topic well.", 0.55);
    double expected = (0.8 - 0.55) / (1.0 - 0.55);
    REQUIRE(result.per_archetype.size() == 8);
    for (auto& [name, value] : result.per_archetype) {
        CHECK(value == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(result.dox == doctest::Approx(expected).epsilon(1e-9));
    CHECK(result.dox >= 0.0);
    CHECK(result.dox <= 1.0);
}

TEST_CASE("sentences at the threshold contribute nothing") {
    auto set = make_archetype_set("the ranking mechanism");
    auto embedder = aligned_embedder(set);
    embedder.script_pertinence("Borderline sentence here.", 0.55);
    auto result = dox_score(embedder, set, "Borderline sentence here.", 0.55);
    CHECK(result.dox == doctest::Approx(0.0));
}

TEST_CASE("appending a sentence never lowers dox; sub-threshold leaves it fixed") {
    auto set = make_archetype_set("the ranking mechanism");
    auto embedder = aligned_embedder(set);
    embedder.script_pertinence("Alpha covers the topic well.", 0.8);
    embedder.script_pertinence("Beta adds more explanatory depth.", 0.7);
    embedder.script_pertinence("Gamma is background noise.", 0.3);

    auto one = dox_score(embedder, set, "Alpha covers the topic well.", 0.55);
    auto two = dox_score(embedder, set,
                         "Alpha covers the topic well. Beta adds more explanatory depth.",
                         0.55);
    CHECK(two.dox >= one.dox);
    CHECK(two.dox > one.dox);  // 0.7 is above threshold, so strictly more

    auto with_noise = dox_score(
        embedder, set, "Alpha covers the topic well. Gamma is background noise.", 0.55);
    CHECK(with_noise.dox == doctest::Approx(one.dox).epsilon(1e-12));
}

TEST_CASE("explanatory relevance multiplies dox by peak pertinence") {
    std::vector<RetrievedAnswer> answers(3);
    answers[0].pertinence = 0.2;
    answers[1].pertinence = 0.8;
    answers[2].pertinence = 0.5;
    CHECK(explanatory_relevance(0.5, answers) == doctest::Approx(0.4));
    CHECK(explanatory_relevance(0.0, answers) == doctest::Approx(0.0));
    CHECK(explanatory_relevance(0.9, {}) == doctest::Approx(0.0));
}

TEST_CASE("dox rejects degenerate configuration") {
    ScriptedEmbedder embedder;
    ArchetypeSet no_aspect{"", default_archetype_templates()};
    CHECK_THROWS_AS(dox_score(embedder, no_aspect, "Some text.", 0.55), ConfigError);
    ArchetypeSet no_templates{"aspect", {}};
    CHECK_THROWS_AS(dox_score(embedder, no_templates, "Some text.", 0.55), ConfigError);
}
