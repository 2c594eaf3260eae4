#include "sftta/trust.hpp"

#include <sstream>

#include "sftta/metrics.hpp"

namespace sftta {

CredibilityReport credibility(const ThemeSet& themes, const Corpus& corpus, Backend& judge,
                              const PromptLibrary& prompts, const std::string& judge_model,
                              int context_radius) {
    CredibilityReport report;
    for (std::size_t t = 0; t < themes.size(); ++t) {
        const auto& theme = themes.themes[t];
        for (const auto& quote_id : theme.supporting_quote_ids) {
            ThemeLinkVerdict link;
            link.theme_index = t;
            link.quote_id = quote_id;

            auto parsed = QuoteId::try_parse(quote_id);
            if (parsed && corpus.contains(*parsed)) {
                link.resolvable = true;
                std::ostringstream context;
                for (const auto& q : corpus.quote_with_context(*parsed, context_radius))
                    context << q.id.render() << " " << q.text << "\n";

                ChatRequest request;
                request.model_id = judge_model;
                request.temperature = 0.0;
                request.messages = render_credibility_prompt(
                    prompts, theme.title + ". " + theme.description, context.str());

                std::string verdict;
                for (int attempt = 0; attempt < 2; ++attempt) {
                    verdict = trim_copy(judge.complete_chat(request).content);
                    if (verdict == "CONSISTENT" || verdict == "INCONSISTENT") break;
                    if (attempt == 1)
                        throw ParseError("credibility judge answered '" + verdict +
                                         "', expected CONSISTENT or INCONSISTENT");
                    request.messages.push_back(
                        {"user", "Answer with exactly one word: CONSISTENT or INCONSISTENT."});
                }
                link.consistent = (verdict == "CONSISTENT");
            }
            report.links.push_back(link);
            ++report.total_links;
            if (link.consistent) ++report.consistent_links;
        }
    }
    if (report.total_links == 0) throw Error("credibility: themes cite no quote ids");
    report.score_c = static_cast<double>(report.consistent_links) / report.total_links;
    return report;
}

DependabilityReport dependability(const std::vector<ThemeSet>& run_outputs) {
    if (run_outputs.size() < 2) throw Error("dependability: need at least 2 runs");

    DependabilityReport report;
    double sum = 0.0;
    for (std::size_t a = 0; a < run_outputs.size(); ++a) {
        for (std::size_t b = a + 1; b < run_outputs.size(); ++b) {
            const std::string text_a = run_outputs[a].joined_text();
            const std::string text_b = run_outputs[b].joined_text();
            RunPairScore score;
            score.run_a = a;
            score.run_b = b;
            score.r1 = 0.5 * (directional_ngram_recall(text_a, text_b, 1) +
                              directional_ngram_recall(text_b, text_a, 1));
            score.r2 = 0.5 * (directional_ngram_recall(text_a, text_b, 2) +
                              directional_ngram_recall(text_b, text_a, 2));
            score.d_pair = 0.5 * (score.r1 + score.r2);
            sum += score.d_pair;
            report.run_pair_scores.push_back(score);
        }
    }
    report.score_d = sum / report.run_pair_scores.size();
    return report;
}

TransferabilityReport transferability(const Corpus& corpus, const ThemeRunner& runner,
                                      std::size_t validation_size) {
    if (corpus.size() <= validation_size)
        throw Error("transferability: corpus must have more transcripts than validation_size");

    TransferabilityReport report;
    double sum = 0.0;
    for (const auto& split : enumerate_splits(corpus, validation_size)) {
        SplitScore score;
        score.split = split;
        try {
            const std::string train_text = runner(split.train).joined_text();
            const std::string val_text = runner(split.validation).joined_text();
            // directional, train -> validation
            score.r1 = directional_ngram_recall(train_text, val_text, 1);
            score.r2 = directional_ngram_recall(train_text, val_text, 2);
        } catch (const std::exception& e) {
            if (!report.split_scores.empty())
                report.score_t = sum / report.split_scores.size();
            throw TransferabilityError(
                "transferability: pipeline failed on a split: " + std::string(e.what()),
                std::move(report));
        }
        score.t_split = 0.5 * (score.r1 + score.r2);
        sum += score.t_split;
        report.split_scores.push_back(score);
    }
    report.score_t = sum / report.split_scores.size();
    return report;
}

}  // namespace sftta
