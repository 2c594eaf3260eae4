#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sftta/corpus.hpp"
#include "sftta/gateway.hpp"
#include "sftta/pipeline.hpp"
#include "sftta/prompts.hpp"

namespace sftta {

struct ThemeLinkVerdict {
    std::size_t theme_index = 0;
    std::string quote_id;
    bool resolvable = false;
    bool consistent = false;  // unresolvable links are never consistent
};

struct CredibilityReport {
    std::size_t total_links = 0;
    std::size_t consistent_links = 0;
    double score_c = 0.0;  // consistent / total
    std::vector<ThemeLinkVerdict> links;
};

/// Every (theme, cited quote) link is resolved against the corpus;
/// unresolvable ids count as inconsistent (hallucinated citations),
/// resolvable ones are rated by the judge backend over the quote plus
/// one quote of surrounding context.
CredibilityReport credibility(const ThemeSet& themes, const Corpus& corpus, Backend& judge,
                              const PromptLibrary& prompts, const std::string& judge_model = "judge",
                              int context_radius = 1);

struct RunPairScore {
    std::size_t run_a = 0;
    std::size_t run_b = 0;
    double r1 = 0.0;
    double r2 = 0.0;
    double d_pair = 0.0;  // (r1 + r2) / 2
};

struct DependabilityReport {
    std::vector<RunPairScore> run_pair_scores;
    double score_d = 0.0;  // mean over unordered run pairs
};

/// Bidirectional distinct n-gram overlap (unigram + bigram) between the
/// theme texts of every unordered pair of runs.
DependabilityReport dependability(const std::vector<ThemeSet>& run_outputs);

struct SplitScore {
    CorpusSplit split;
    double r1 = 0.0;
    double r2 = 0.0;
    double t_split = 0.0;
};

struct TransferabilityReport {
    std::vector<SplitScore> split_scores;
    double score_t = 0.0;  // mean over all splits
};

using ThemeRunner = std::function<ThemeSet(const std::vector<std::string>& transcript_ids)>;

/// Raised when a split fails mid-sweep; carries the completed part.
class TransferabilityError : public Error {
public:
    TransferabilityError(const std::string& msg, TransferabilityReport partial)
        : Error(msg), partial_report(std::move(partial)) {}
    TransferabilityReport partial_report;
};

/// For every C(n, validation_size) split, generate themes on the train
/// and validation subsets and score directional train -> validation
/// overlap.
TransferabilityReport transferability(const Corpus& corpus, const ThemeRunner& runner,
                                      std::size_t validation_size = 2);

}  // namespace sftta
