#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sftta {

struct ThemeRatings {
    int actionability = 0;
    int distinctiveness = 0;
    int relevance = 0;
};

/// One rater's Likert sheet for one condition: coverage once per set,
/// the other criteria per theme. All scores in 1..5.
struct RatingSheet {
    std::string rater_id;
    std::string condition_id;
    int coverage = 0;
    std::map<std::size_t, ThemeRatings> per_theme;

    void validate(std::size_t expected_theme_count = 0) const;
};

struct HumanEvalSummary {
    std::string condition_id;
    double coverage = 0.0;
    double actionability = 0.0;
    double distinctiveness = 0.0;
    double relevance = 0.0;
    std::optional<double> delta_coverage;
    std::optional<double> delta_actionability;
    std::optional<double> delta_distinctiveness;
    std::optional<double> delta_relevance;
};

/// Coverage averaged over raters; the per-theme criteria averaged over
/// every (theme, rater) cell.
HumanEvalSummary aggregate_ratings(const std::vector<RatingSheet>& sheets,
                                   const std::string& condition_id);

/// Populate each summary's delta fields as value minus the baseline
/// condition's value.
std::vector<HumanEvalSummary> compute_deltas(std::vector<HumanEvalSummary> summaries,
                                             const std::string& baseline_condition);

/// CSV columns: rater_id, condition_id, theme_index (empty on coverage
/// rows), criterion, score.
std::vector<RatingSheet> load_rating_sheets_csv(const std::string& path);

/// Table-style display rounding: 2 decimals, half-up.
double round_half_up_2(double value);

}  // namespace sftta
