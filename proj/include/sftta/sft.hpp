#pragma once

#include <map>
#include <string>
#include <vector>

#include "sftta/corpus.hpp"
#include "sftta/gateway.hpp"
#include "sftta/prompts.hpp"

namespace sftta {

enum class SftSplit { train, validation };

struct ReferenceTheme {
    std::string theme_id;
    std::string text;
    SftSplit split = SftSplit::train;
};

/// Load reference themes from a JSON file of
/// [{"theme_id": str, "text": str, "split": "train"|"validation"}].
std::vector<ReferenceTheme> load_reference_themes(const std::string& path);

struct ParaphraseSet {
    std::string theme_id;
    std::vector<std::string> variants;  // pairwise distinct after normalization
    std::string generator_model;
    bool approved = false;
};

struct SftDatapoint {
    std::vector<ChatMessage> prompt_messages;
    std::string answer;
    std::string source_theme_id;
    std::size_t variant_index = 0;
};

struct SftScalingPlan {
    std::vector<std::size_t> sizes = {100, 200, 300, 600, 900};
    long sampling_seed = 0;

    void validate(std::size_t pool_size) const;  // strictly increasing, max <= pool
};

/// Generate `count` pairwise-distinct paraphrases of a theme; duplicate
/// outputs trigger targeted regeneration within a bounded retry budget.
ParaphraseSet paraphrase_theme(const ReferenceTheme& theme, std::size_t count, Backend& backend,
                               const PromptLibrary& prompts, const std::string& model_id,
                               int retry_budget = 5);

enum class PairingMode { single_theme, full_set };

/// One datapoint per (train theme, variant); validation themes are
/// excluded and must not appear in the input list. Prompts reuse the
/// theme-generation template over a rotating transcript of `corpus`.
std::vector<SftDatapoint> build_pairwise_dataset(
    const std::vector<ReferenceTheme>& train_themes,
    const std::map<std::string, ParaphraseSet>& paraphrases, const Corpus& corpus,
    const PromptLibrary& prompts, PairingMode mode = PairingMode::single_theme);

/// Nested stratified subsets: each smaller subset is contained in the
/// next larger, and per-theme counts stay within 1 of proportionality.
std::map<std::size_t, std::vector<SftDatapoint>> sample_scaling_subsets(
    const std::vector<SftDatapoint>& dataset, const SftScalingPlan& plan);

void export_jsonl(const std::vector<SftDatapoint>& datapoints, const std::string& path);
std::vector<SftDatapoint> import_jsonl(const std::string& path);

/// True when any validation-theme text (or variant of one) appears as
/// an answer in the exported file. Used as the split-hygiene check.
bool has_validation_leakage(const std::string& jsonl_path,
                            const std::vector<ReferenceTheme>& themes,
                            const std::map<std::string, ParaphraseSet>& paraphrases);

std::string normalize_variant(const std::string& text);  // lowercase, collapsed whitespace

}  // namespace sftta
