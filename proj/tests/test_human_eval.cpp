#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sftta/error.hpp"
#include "sftta/human_eval.hpp"

using namespace sftta;

namespace {

const std::string kRatingsCsv = std::string(SFTTA_SOURCE_DIR) + "/data/sample_ratings.csv";

RatingSheet sheet(const std::string& rater, const std::string& condition, int coverage,
                  std::vector<ThemeRatings> themes) {
    RatingSheet s;
    s.rater_id = rater;
    s.condition_id = condition;
    s.coverage = coverage;
    for (std::size_t i = 0; i < themes.size(); ++i) s.per_theme[i] = themes[i];
    return s;
}

}  // namespace

TEST_CASE("rating sheets validate the Likert range and coverage of every theme") {
    auto ok = sheet("r1", "c", 4, {{3, 4, 5}, {2, 2, 2}});
    CHECK_NOTHROW(ok.validate());
    CHECK_NOTHROW(ok.validate(2));
    CHECK_THROWS_AS(ok.validate(3), Error);  // expects 3 themes, has 2

    auto bad_score = sheet("r1", "c", 4, {{6, 4, 5}});
    CHECK_THROWS_AS(bad_score.validate(), Error);
    auto bad_coverage = sheet("r1", "c", 0, {{3, 3, 3}});
    CHECK_THROWS_AS(bad_coverage.validate(), Error);
    auto empty = sheet("r1", "c", 4, {});
    CHECK_THROWS_AS(empty.validate(), Error);

    auto gap = sheet("r1", "c", 4, {{3, 3, 3}, {3, 3, 3}});
    gap.per_theme.erase(0);
    gap.per_theme[5] = {3, 3, 3};
    CHECK_THROWS_AS(gap.validate(2), Error);  // wrong indices
}

TEST_CASE("aggregate_ratings averages coverage per rater and criteria per cell") {
    const std::vector<RatingSheet> sheets{
        sheet("r1", "cond", 5, {{4, 3, 5}, {2, 5, 1}}),
        sheet("r2", "cond", 3, {{2, 1, 3}, {4, 3, 5}}),
        sheet("r1", "other", 1, {{1, 1, 1}}),
    };
    const auto summary = aggregate_ratings(sheets, "cond");
    CHECK(summary.coverage == doctest::Approx(4.0));           // (5+3)/2
    CHECK(summary.actionability == doctest::Approx(3.0));      // (4+2+2+4)/4
    CHECK(summary.distinctiveness == doctest::Approx(3.0));    // (3+5+1+3)/4
    CHECK(summary.relevance == doctest::Approx(3.5));          // (5+1+3+5)/4
    CHECK_FALSE(summary.delta_coverage.has_value());
    CHECK_THROWS_AS(aggregate_ratings(sheets, "missing"), Error);
}

TEST_CASE("compute_deltas reproduces the published delta arithmetic") {
    HumanEvalSummary baseline;
    baseline.condition_id = "baseline";
    baseline.coverage = 4.00;
    baseline.actionability = 2.80;
    HumanEvalSummary sft;
    sft.condition_id = "sft";
    sft.coverage = 5.00;
    sft.actionability = 4.28;

    const auto out = compute_deltas({baseline, sft}, "baseline");
    CHECK(round_half_up_2(*out[1].delta_coverage) == doctest::Approx(1.00));
    CHECK(round_half_up_2(*out[1].delta_actionability) == doctest::Approx(1.48));
    // the condition equal to the baseline has all-zero deltas
    CHECK(*out[0].delta_coverage == doctest::Approx(0.0));
    CHECK(*out[0].delta_actionability == doctest::Approx(0.0));
    CHECK_THROWS_AS(compute_deltas({baseline}, "nope"), Error);
}

TEST_CASE("round_half_up_2") {
    CHECK(round_half_up_2(1.006) == doctest::Approx(1.01));
    CHECK(round_half_up_2(1.004) == doctest::Approx(1.00));
    CHECK(round_half_up_2(-0.5) == doctest::Approx(-0.5));
}

TEST_CASE("CSV ingestion reads the shipped sample ratings") {
    const auto sheets = load_rating_sheets_csv(kRatingsCsv);
    CHECK(sheets.size() == 4);  // 2 raters x 2 conditions
    for (const auto& s : sheets) {
        CHECK_NOTHROW(s.validate(12));
        CHECK((s.condition_id == "baseline" || s.condition_id == "sft_both"));
    }
    const auto base = aggregate_ratings(sheets, "baseline");
    const auto sft = aggregate_ratings(sheets, "sft_both");
    const auto with_deltas = compute_deltas({base, sft}, "baseline");
    CHECK(with_deltas[1].delta_coverage.has_value());
    CHECK_THROWS_AS(load_rating_sheets_csv("/nonexistent.csv"), ConfigError);
}

TEST_CASE("CSV ingestion rejects malformed rows") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "sftta_bad_ratings.csv").string();

    std::ofstream(path) << "rater_id,condition_id,theme_index,criterion,score\n"
                           "r1,c,0,actionability,notanumber\n";
    CHECK_THROWS_AS(load_rating_sheets_csv(path), ParseError);

    std::ofstream(path) << "r1,c,3,coverage,4\n";  // coverage rows must omit theme_index
    CHECK_THROWS_AS(load_rating_sheets_csv(path), ParseError);

    std::ofstream(path) << "r1,c,0,enthusiasm,4\n";  // unknown criterion
    CHECK_THROWS_AS(load_rating_sheets_csv(path), ParseError);

    std::ofstream(path) << "\n";
    CHECK_THROWS_AS(load_rating_sheets_csv(path), ParseError);
    fs::remove(path);
}
