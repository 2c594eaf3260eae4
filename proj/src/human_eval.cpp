#include "sftta/human_eval.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sftta/corpus.hpp"
#include "sftta/error.hpp"

namespace sftta {

namespace {

void check_score(int score, const std::string& where) {
    if (score < 1 || score > 5)
        throw Error("Likert score out of 1..5 in " + where + ": " + std::to_string(score));
}

}  // namespace

void RatingSheet::validate(std::size_t expected_theme_count) const {
    check_score(coverage, rater_id + "/coverage");
    if (per_theme.empty()) throw Error("rating sheet " + rater_id + " has no per-theme entries");
    for (const auto& [index, ratings] : per_theme) {
        const std::string where = rater_id + "/theme " + std::to_string(index);
        check_score(ratings.actionability, where);
        check_score(ratings.distinctiveness, where);
        check_score(ratings.relevance, where);
    }
    if (expected_theme_count > 0) {
        if (per_theme.size() != expected_theme_count)
            throw Error("rating sheet " + rater_id + " covers " +
                        std::to_string(per_theme.size()) + " themes, expected " +
                        std::to_string(expected_theme_count));
        for (std::size_t i = 0; i < expected_theme_count; ++i)
            if (!per_theme.count(i))
                throw Error("rating sheet " + rater_id + " missing theme index " +
                            std::to_string(i));
    }
}

HumanEvalSummary aggregate_ratings(const std::vector<RatingSheet>& sheets,
                                   const std::string& condition_id) {
    std::vector<const RatingSheet*> relevant;
    for (const auto& s : sheets)
        if (s.condition_id == condition_id) relevant.push_back(&s);
    if (relevant.empty()) throw Error("no rating sheets for condition " + condition_id);

    HumanEvalSummary summary;
    summary.condition_id = condition_id;
    double coverage_sum = 0.0, act_sum = 0.0, dis_sum = 0.0, rel_sum = 0.0;
    std::size_t cells = 0;
    for (const auto* s : relevant) {
        s->validate();
        coverage_sum += s->coverage;
        for (const auto& [index, r] : s->per_theme) {
            act_sum += r.actionability;
            dis_sum += r.distinctiveness;
            rel_sum += r.relevance;
            ++cells;
        }
    }
    summary.coverage = coverage_sum / relevant.size();
    summary.actionability = act_sum / cells;
    summary.distinctiveness = dis_sum / cells;
    summary.relevance = rel_sum / cells;
    return summary;
}

std::vector<HumanEvalSummary> compute_deltas(std::vector<HumanEvalSummary> summaries,
                                             const std::string& baseline_condition) {
    const HumanEvalSummary* baseline = nullptr;
    for (const auto& s : summaries)
        if (s.condition_id == baseline_condition) baseline = &s;
    if (!baseline) throw Error("baseline condition not present: " + baseline_condition);

    const HumanEvalSummary base = *baseline;
    for (auto& s : summaries) {
        s.delta_coverage = s.coverage - base.coverage;
        s.delta_actionability = s.actionability - base.actionability;
        s.delta_distinctiveness = s.distinctiveness - base.distinctiveness;
        s.delta_relevance = s.relevance - base.relevance;
    }
    return summaries;
}

std::vector<RatingSheet> load_rating_sheets_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rating CSV: " + path);

    std::map<std::pair<std::string, std::string>, RatingSheet> sheets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim_copy(line);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string field; std::getline(ss, field, ',');) fields.push_back(trim_copy(field));
        while (fields.size() < 5) fields.push_back("");
        if (lineno == 1 && fields[0] == "rater_id") continue;  // header
        if (fields.size() != 5)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 columns");

        const std::string& rater = fields[0];
        const std::string& condition = fields[1];
        const std::string& theme_index = fields[2];
        const std::string& criterion = fields[3];
        int score = 0;
        try {
            score = std::stoi(fields[4]);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad score");
        }

        RatingSheet& sheet = sheets[{rater, condition}];
        sheet.rater_id = rater;
        sheet.condition_id = condition;
        if (criterion == "coverage") {
            if (!theme_index.empty())
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": coverage rows must leave theme_index empty");
            sheet.coverage = score;
        } else {
            if (theme_index.empty())
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": per-theme rows need a theme_index");
            const std::size_t index = std::stoul(theme_index);
            ThemeRatings& r = sheet.per_theme[index];
            if (criterion == "actionability")
                r.actionability = score;
            else if (criterion == "distinctiveness")
                r.distinctiveness = score;
            else if (criterion == "relevance")
                r.relevance = score;
            else
                throw ParseError(path + ":" + std::to_string(lineno) + ": unknown criterion '" +
                                 criterion + "'");
        }
    }

    std::vector<RatingSheet> out;
    for (auto& [key, sheet] : sheets) {
        sheet.validate();
        out.push_back(std::move(sheet));
    }
    if (out.empty()) throw ParseError("no ratings in " + path);
    return out;
}

double round_half_up_2(double value) {
    return std::floor(value * 100.0 + 0.5) / 100.0;
}

}  // namespace sftta
