#include "sftta/win_rate.hpp"

#include "sftta/corpus.hpp"

namespace sftta {

WinRateResult judge_win_rate(const std::vector<ComparisonPair>& pairs,
                             const std::string& criterion, Backend& judge,
                             const PromptLibrary& prompts, long seed,
                             const std::string& judge_model) {
    if (pairs.empty()) throw Error("judge_win_rate: no pairs");

    std::size_t wins = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const long order_seed = seed + static_cast<long>(i);
        auto prompt =
            render_judge_prompt(prompts, pairs[i].candidate, pairs[i].baseline, criterion,
                                order_seed);
        ChatRequest request;
        request.model_id = judge_model;
        request.temperature = 0.0;
        request.seed = order_seed;
        request.messages = prompt.messages;

        std::string verdict;
        for (int attempt = 0; attempt < 2; ++attempt) {
            verdict = trim_copy(judge.complete_chat(request).content);
            if (verdict == "A" || verdict == "B") break;
            if (attempt == 1)
                throw ParseError("judge answered '" + verdict + "', expected A or B");
            request.messages.push_back(
                {"user", "Invalid answer. Reply with exactly one character: A or B."});
        }
        if (verdict_is_a_win(verdict, prompt.swapped)) ++wins;
    }
    return win_rate_from_counts(wins, pairs.size());
}

std::vector<ComparisonPair> build_pairs_by_best_fuzzy(const std::vector<std::string>& candidate,
                                                      const std::vector<std::string>& baseline) {
    if (candidate.empty() || baseline.empty())
        throw Error("build_pairs_by_best_fuzzy: empty side");
    std::vector<ComparisonPair> pairs;
    for (const auto& c : candidate) {
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t b = 0; b < baseline.size(); ++b) {
            const double s = fuzzy_match(c, baseline[b]);
            if (s > best_score) {
                best_score = s;
                best = b;
            }
        }
        pairs.push_back({c, baseline[best]});
    }
    return pairs;
}

}  // namespace sftta
