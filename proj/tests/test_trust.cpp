#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sftta/trust.hpp"

using namespace sftta;

namespace {

const std::string kCorpusDir = std::string(SFTTA_SOURCE_DIR) + "/data/corpus";

Transcript small_transcript() {
    Transcript t;
    t.transcript_id = "t1";
    t.quotes = {{QuoteId{1, 1}, "A", "sleep was hard after the diagnosis"},
                {QuoteId{1, 2}, "A", "we wanted clearer explanations"},
                {QuoteId{2, 1}, "B", "costs piled up quickly"},
                {QuoteId{2, 2}, "B", "other parents helped the most"}};
    return t;
}

ThemeSet word_themes(const std::vector<std::string>& words) {
    // one theme per word and no description, so joined_text tokenizes to
    // exactly this unigram set
    ThemeSet set;
    for (const auto& w : words) set.themes.push_back({w, "", {}, {}});
    return set;
}

}  // namespace

TEST_CASE("credibility counts hallucinated citations as inconsistent") {
    const Corpus corpus({small_transcript()});
    MockBackend judge;  // synthesis answers CONSISTENT for resolvable links
    const PromptLibrary prompts;

    ThemeSet themes;
    themes.themes.push_back(
        {"Sleep disruption", "poor sleep", {"[P1_S001]", "[P1_S002]"}, {}});
    themes.themes.push_back(
        {"Financial strain", "money worries", {"[P2_S001]", "[P9_S999]"}, {}});

    const auto report = credibility(themes, corpus, judge, prompts);
    CHECK(report.total_links == 4);
    CHECK(report.consistent_links == 3);
    CHECK(report.score_c == doctest::Approx(0.75));
    CHECK(report.links[3].quote_id == "[P9_S999]");
    CHECK_FALSE(report.links[3].resolvable);
    CHECK_FALSE(report.links[3].consistent);
}

TEST_CASE("an injected unresolvable link strictly lowers credibility") {
    const Corpus corpus({small_transcript()});
    MockBackend judge;
    const PromptLibrary prompts;

    ThemeSet clean;
    clean.themes.push_back({"Support", "peers", {"[P2_S002]", "[P1_S001]"}, {}});
    const double before = credibility(clean, corpus, judge, prompts).score_c;
    CHECK(before == doctest::Approx(1.0));

    auto tainted = clean;
    tainted.themes[0].supporting_quote_ids.push_back("[P42_S042]");
    CHECK(credibility(tainted, corpus, judge, prompts).score_c < before);
}

TEST_CASE("credibility retries a malformed verdict once, then errors") {
    const Corpus corpus({small_transcript()});
    const PromptLibrary prompts;
    ThemeSet themes;
    themes.themes.push_back({"Sleep", "d", {"[P1_S001]"}, {}});

    MockBackend recovers;
    recovers.push_response("hmm, let me think");
    recovers.push_response("INCONSISTENT");
    const auto report = credibility(themes, corpus, recovers, prompts);
    CHECK(report.consistent_links == 0);

    MockBackend broken;
    broken.set_synthesis(false);
    broken.push_response("nonsense");
    broken.push_response("more nonsense");
    CHECK_THROWS_AS(credibility(themes, corpus, broken, prompts), ParseError);
}

TEST_CASE("credibility requires at least one cited link") {
    const Corpus corpus({small_transcript()});
    MockBackend judge;
    const PromptLibrary prompts;
    CHECK_THROWS_AS(credibility(word_themes({"a", "b"}), corpus, judge, prompts), Error);
}

TEST_CASE("dependability of identical runs is 1.0 over all pairs") {
    const auto run = word_themes({"care", "cost", "support"});
    const auto report = dependability({run, run, run, run, run});
    CHECK(report.run_pair_scores.size() == 10);  // C(5,2)
    CHECK(report.score_d == doctest::Approx(1.0));
}

TEST_CASE("dependability of disjoint vocabularies is 0.0") {
    const auto report =
        dependability({word_themes({"alpha", "beta"}), word_themes({"gamma", "delta"})});
    CHECK(report.score_d == doctest::Approx(0.0));
}

TEST_CASE("the {a,b,c}/{b,c,d} fixture gives R1 = 2/3, R2 = 0, D = 1/3 exactly") {
    // titles "a b c" and "c b d": unigram overlap 2 of 3 each way, and
    // the bigram sets {ab,bc} vs {cb,bd} are disjoint
    ThemeSet run_a = word_themes({"a b c"});
    ThemeSet run_b = word_themes({"c b d"});
    const auto report = dependability({run_a, run_b});
    REQUIRE(report.run_pair_scores.size() == 1);
    const auto& pair = report.run_pair_scores[0];
    CHECK(pair.r1 == 2.0 / 3.0);
    CHECK(pair.r2 == 0.0);
    CHECK(pair.d_pair == 1.0 / 3.0);
    CHECK(report.score_d == 1.0 / 3.0);
}

TEST_CASE("dependability is invariant to run ordering") {
    const std::vector<ThemeSet> runs{word_themes({"a b c"}), word_themes({"c b d"}),
                                     word_themes({"b c e"})};
    const std::vector<ThemeSet> shuffled{runs[2], runs[0], runs[1]};
    CHECK(dependability(runs).score_d == doctest::Approx(dependability(shuffled).score_d));
    CHECK_THROWS_AS(dependability({runs[0]}), Error);
}

TEST_CASE("transferability evaluates all 36 splits of the shipped corpus") {
    const Corpus corpus = load_corpus(kCorpusDir);
    std::size_t calls = 0;
    const auto fixed = word_themes({"care", "cost"});
    const auto report = transferability(
        corpus, [&](const std::vector<std::string>&) { ++calls; return fixed; });
    CHECK(report.split_scores.size() == 36);
    CHECK(calls == 72);  // train + validation per split
    CHECK(report.score_t == doctest::Approx(1.0));
}

TEST_CASE("transferability is directional train to validation") {
    const Corpus corpus = load_corpus(kCorpusDir);
    const auto report = transferability(corpus, [](const std::vector<std::string>& ids) {
        // train side (7 transcripts) says "a b c", validation side "c b d"
        return ids.size() == 7 ? word_themes({"a b c"}) : word_themes({"c b d"});
    });
    for (const auto& s : report.split_scores) {
        CHECK(s.r1 == doctest::Approx(2.0 / 3.0));
        CHECK(s.r2 == doctest::Approx(0.0));
        CHECK(s.t_split == doctest::Approx(1.0 / 3.0));
    }
    CHECK(report.score_t == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a failing split raises TransferabilityError with the partial report") {
    const Corpus corpus = load_corpus(kCorpusDir);
    std::size_t calls = 0;
    try {
        transferability(corpus, [&](const std::vector<std::string>&) -> ThemeSet {
            if (++calls > 10) throw Error("backend went away");
            return word_themes({"x"});
        });
        FAIL("expected TransferabilityError");
    } catch (const TransferabilityError& e) {
        CHECK(e.partial_report.split_scores.size() == 5);
        CHECK(std::string(e.what()).find("backend went away") != std::string::npos);
    }
}
