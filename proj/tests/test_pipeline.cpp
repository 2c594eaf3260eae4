#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "sftta/corpus.hpp"
#include "sftta/pipeline.hpp"

using namespace sftta;
using nlohmann::json;

namespace {

const std::string kCorpusDir = std::string(SFTTA_SOURCE_DIR) + "/data/corpus";

Pipeline mock_pipeline(std::shared_ptr<MockBackend>& out_backend) {
    out_backend = std::make_shared<MockBackend>();
    return Pipeline(out_backend, PromptLibrary());
}

ThemeSet themes_of(std::size_t n) {
    ThemeSet set;
    for (std::size_t i = 0; i < n; ++i)
        set.themes.push_back({"Theme " + std::to_string(i + 1), "desc", {}, {}});
    return set;
}

std::string themes_json_of(std::size_t n) {
    json arr = json::array();
    for (std::size_t i = 0; i < n; ++i)
        arr.push_back({{"title", "T" + std::to_string(i)},
                       {"description", "d"},
                       {"quote_ids", json::array()}});
    return arr.dump();
}

}  // namespace

TEST_CASE("placement presets follow the ablation table") {
    const auto vanilla = PlacementConfig::preset("vanilla", "base", "ft");
    CHECK(vanilla.coding_agents.size() == 2);
    CHECK(vanilla.theme_agents.size() == 2);
    for (const auto& a : vanilla.coding_agents) CHECK_FALSE(a.is_fine_tuned);

    const auto both = PlacementConfig::preset("sft_both", "base", "ft");
    CHECK(both.coding_agents.size() == 3);
    CHECK(both.theme_agents.size() == 3);
    CHECK(both.coding_agents.back().model_id == "ft");

    const auto only = PlacementConfig::preset("vanilla_sft_only", "base", "ft");
    CHECK(only.coding_agents.size() == 1);
    CHECK(only.coding_agents.front().is_fine_tuned);

    CHECK(PlacementConfig::preset_names().size() == 5);
    CHECK_THROWS_AS(PlacementConfig::preset("nope", "b", "f"), ConfigError);
}

TEST_CASE("placement validation rejects bad rosters") {
    auto p = PlacementConfig::preset("vanilla", "base", "ft");
    p.theme_agents.clear();
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = PlacementConfig::preset("vanilla", "base", "ft");
    p.coding_agents.push_back(p.coding_agents.front());  // duplicate id
    CHECK_THROWS_AS(p.validate(), ConfigError);

    p = PlacementConfig::preset("sft_coding", "base", "ft");
    auto extra = p.coding_agents.back();
    extra.agent_id = "second_sft";
    p.coding_agents.push_back(extra);  // two fine-tuned in one stage
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("placement JSON round-trip preserves the roster") {
    const auto p = PlacementConfig::preset("sft_tg", "base", "ft");
    const auto copy = PlacementConfig::from_json(p.to_json());
    CHECK(copy.to_json() == p.to_json());
    CHECK(copy.theme_agents.back().is_fine_tuned);
}

TEST_CASE("theme set JSON round-trip") {
    ThemeSet set = themes_of(3);
    set.themes[1].supporting_quote_ids = {"[P1_S001]"};
    set.themes[1].provenance = {{"aggregation", "agg", 0}};
    const auto copy = ThemeSet::from_json(set.to_json());
    CHECK(copy.to_json() == set.to_json());
    CHECK(copy.titles() == set.titles());
    CHECK_THROWS_AS(ThemeSet::from_json(json::parse(R"({"themes":[{"title":""}]})")), ParseError);
}

TEST_CASE("apply_review_decision removes and schedules") {
    const auto twelve = themes_of(12);
    const auto outcome = apply_review_decision(
        twelve, {{4, ReviewAction::remove}, {2, ReviewAction::extra_round}});
    CHECK(outcome.themes.size() == 11);
    CHECK(outcome.removed_indices == std::vector<std::size_t>{4});
    CHECK(outcome.extra_round_indices == std::vector<std::size_t>{2});
    CHECK(outcome.themes.themes[4].title == "Theme 6");  // index 4 gone

    CHECK_THROWS_AS(apply_review_decision(twelve, {{12, ReviewAction::keep}}), Error);
    CHECK_THROWS_AS(
        apply_review_decision(twelve, {{3, ReviewAction::remove}, {3, ReviewAction::remove}}),
        Error);
}

TEST_CASE("aggregate_codes errors on empty input and enforces quote conservation") {
    std::shared_ptr<MockBackend> backend;
    auto pipeline = mock_pipeline(backend);
    CHECK_THROWS_AS(pipeline.aggregate_codes({}), Error);
    CHECK_THROWS_AS(pipeline.aggregate_codes({{}, {}}), Error);

    // aggregator invents a quote id; it must be dropped with a warning
    backend->push_response(
        R"([{"label":"merged","description":"d","quote_ids":["[P1_S001]","[P99_S001]"]}])");
    RunManifest manifest;
    std::vector<Code> input{{"c1", "d", {"[P1_S001]"}, "agent"}};
    const auto out = pipeline.aggregate_codes({input}, &manifest);
    REQUIRE(out.size() == 1);
    CHECK(out[0].quote_ids == std::vector<std::string>{"[P1_S001]"});
    CHECK_FALSE(manifest.warnings.empty());
}

TEST_CASE("single agent's codes pass through aggregation") {
    std::shared_ptr<MockBackend> backend;
    auto pipeline = mock_pipeline(backend);
    std::vector<Code> input{{"night worries", "sleep loss", {"[P1_S001]"}, "solo"}};
    const auto out = pipeline.aggregate_codes({input});
    REQUIRE(out.size() == 1);
    CHECK(out[0].label == "night worries");
}

TEST_CASE("aggregate_themes re-prompts once on a count miss, then errors") {
    std::shared_ptr<MockBackend> backend;
    auto pipeline = mock_pipeline(backend);
    std::map<std::string, ThemeSet> candidates{{"a1", themes_of(12)}};

    // corrective re-prompt succeeds on the second try
    backend->push_response(themes_json_of(11));
    backend->push_response(themes_json_of(12));
    RunManifest manifest;
    CHECK(pipeline.aggregate_themes(candidates, 12, &manifest).size() == 12);
    CHECK_FALSE(manifest.warnings.empty());

    // eleven twice is a hard error
    backend->push_response(themes_json_of(11));
    backend->push_response(themes_json_of(11));
    CHECK_THROWS_AS(pipeline.aggregate_themes(candidates, 12), Error);

    CHECK_THROWS_AS(pipeline.aggregate_themes({}, 12), Error);
}

TEST_CASE("evaluate_themes accepts a scripted revise verdict") {
    std::shared_ptr<MockBackend> backend;
    auto pipeline = mock_pipeline(backend);
    backend->push_response(R"([
        {"theme_index": 3, "criterion": "Specificity", "verdict": "revise",
         "rationale": "too broad"},
        {"theme_index": 0, "criterion": "Clarity", "verdict": "pass", "rationale": ""}
    ])");
    const auto report = pipeline.evaluate_themes(themes_of(4));
    std::size_t revises = 0;
    for (const auto& v : report.verdicts)
        if (v.verdict == "revise") ++revises;
    CHECK(revises == 1);
    CHECK(report.verdicts[0].theme_index == 3);
    CHECK(report.as_text().find("Specificity") != std::string::npos);

    CHECK_THROWS_AS(pipeline.evaluate_themes(ThemeSet{}), Error);
}

TEST_CASE("refine_themes preserves the count and extends provenance") {
    std::shared_ptr<MockBackend> backend;
    auto pipeline = mock_pipeline(backend);
    auto themes = themes_of(5);
    themes.themes[0].provenance = {{"aggregation", "agg", 0}};

    const auto refined = pipeline.refine_themes(themes, CritiqueReport{}, 2);
    CHECK(refined.size() == 5);
    REQUIRE(refined.themes[0].provenance.size() == 2);
    CHECK(refined.themes[0].provenance.back().stage == "refinement");
    CHECK(refined.themes[0].provenance.back().round == 2);

    // the mock dropping a theme twice is a hard error
    backend->push_response(themes_json_of(4));
    backend->push_response(themes_json_of(4));
    CHECK_THROWS_AS(pipeline.refine_themes(themes, CritiqueReport{}, 1), Error);
}

TEST_CASE("full mock pipeline emits 12 resolvable themes deterministically") {
    const Corpus corpus = load_corpus(kCorpusDir);
    const auto placement = PlacementConfig::preset("vanilla", "base", "ft");

    std::shared_ptr<MockBackend> b1, b2;
    auto r1 = mock_pipeline(b1).run_pipeline(corpus, placement, 7);
    auto r2 = mock_pipeline(b2).run_pipeline(corpus, placement, 7);

    CHECK(r1.themes.size() == 12);
    for (const auto& t : r1.themes.themes)
        for (const auto& qid : t.supporting_quote_ids)
            CHECK(corpus.contains(QuoteId::parse(qid)));

    CHECK(r1.manifest.content_hash() == r2.manifest.content_hash());
    // run_id and cassette path are excluded from the hash
    r2.manifest.run_id = "different";
    r2.manifest.cassette_ref = "other.jsonl";
    CHECK(r1.manifest.content_hash() == r2.manifest.content_hash());

    auto r3 = mock_pipeline(b1).run_pipeline(corpus, placement, 8);
    CHECK(r1.manifest.content_hash() != r3.manifest.content_hash());
}

TEST_CASE("refinement_rounds = 0 returns the aggregation output directly") {
    const Corpus corpus = load_corpus(kCorpusDir);
    auto placement = PlacementConfig::preset("vanilla", "base", "ft");
    placement.refinement_rounds = 0;
    std::shared_ptr<MockBackend> backend;
    const auto result = mock_pipeline(backend).run_pipeline(corpus, placement, 7);
    CHECK(result.themes.size() == 12);
    CHECK_FALSE(result.manifest.round_artifacts.contains("round_1"));
    CHECK(result.manifest.round_artifacts.contains("aggregation"));
    for (const auto& t : result.themes.themes)
        CHECK(t.provenance.back().stage == "aggregation");
}

TEST_CASE("human gate removal after round 1 yields a final set of 11") {
    const Corpus corpus = load_corpus(kCorpusDir);
    auto placement = PlacementConfig::preset("vanilla", "base", "ft");
    placement.human_gate = true;
    std::shared_ptr<MockBackend> backend;
    const auto result = mock_pipeline(backend).run_pipeline(
        corpus, placement, 7, [](const ThemeSet&, int round) {
            std::vector<ReviewDecision> d;
            if (round == 1) d.push_back({7, ReviewAction::remove});
            return d;
        });
    CHECK(result.themes.size() == 11);
    REQUIRE(result.manifest.human_actions.size() == 1);
    CHECK(result.manifest.human_actions[0]["action"] == "remove");
    CHECK(result.manifest.human_actions[0]["theme_index"] == 7);
}

TEST_CASE("an extra_round decision extends the refinement schedule") {
    const Corpus corpus = load_corpus(kCorpusDir);
    auto placement = PlacementConfig::preset("vanilla", "base", "ft");
    placement.human_gate = true;
    std::shared_ptr<MockBackend> backend;
    const auto result = mock_pipeline(backend).run_pipeline(
        corpus, placement, 7, [](const ThemeSet&, int round) {
            std::vector<ReviewDecision> d;
            if (round == 1) d.push_back({0, ReviewAction::extra_round});
            return d;
        });
    CHECK(result.manifest.round_artifacts.contains("round_4"));
    CHECK_FALSE(result.manifest.round_artifacts.contains("round_5"));
}

TEST_CASE("render_transcript_payload is one quote per line with canonical ids") {
    Transcript t;
    t.transcript_id = "x";
    t.quotes = {{QuoteId{1, 1}, "A", "hello"}, {QuoteId{2, 1}, "B", "world"}};
    CHECK(render_transcript_payload(t) == "[P1_S001] (A) hello\n[P2_S001] (B) world\n");
}

TEST_CASE("parse_codes_json tolerates fences and prose") {
    const auto codes = parse_codes_json(
        "Here you go:\n```json\n[{\"label\":\"x\",\"description\":\"d\",\"quote_ids\":[]}]\n```",
        "agent");
    REQUIRE(codes.size() == 1);
    CHECK(codes[0].coder_id == "agent");
    CHECK_THROWS_AS(parse_codes_json("no array here", "a"), ParseError);
    CHECK_THROWS_AS(parse_codes_json(R"([{"label":""}])", "a"), ParseError);
}
