#pragma once

#include <string>
#include <vector>

#include "sftta/gateway.hpp"
#include "sftta/metrics.hpp"
#include "sftta/prompts.hpp"
#include "sftta/stats.hpp"

namespace sftta {

struct ComparisonPair {
    std::string candidate;
    std::string baseline;
};

/// Judge every pair once with per-pair order seeds derived from `seed`
/// (seed + pair index, so presentation order alternates), unswap the
/// verdicts, and aggregate 𝒲 with its Wilson interval and exact
/// one-sided binomial p-value.
WinRateResult judge_win_rate(const std::vector<ComparisonPair>& pairs,
                             const std::string& criterion, Backend& judge,
                             const PromptLibrary& prompts, long seed,
                             const std::string& judge_model = "judge");

/// Helper pairing for two theme-set conditions: each candidate theme is
/// matched with the baseline theme of highest fuzzy score.
std::vector<ComparisonPair> build_pairs_by_best_fuzzy(const std::vector<std::string>& candidate,
                                                      const std::vector<std::string>& baseline);

}  // namespace sftta
