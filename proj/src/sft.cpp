#include "sftta/sft.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sftta/pipeline.hpp"

using nlohmann::json;

namespace sftta {

std::string normalize_variant(const std::string& text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<ReferenceTheme> load_reference_themes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open reference themes: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::vector<ReferenceTheme> out;
    for (const auto& jt : (j.is_array() ? j : j.at("themes"))) {
        ReferenceTheme t;
        t.theme_id = jt.at("theme_id").get<std::string>();
        t.text = jt.at("text").get<std::string>();
        const std::string split = jt.value("split", "train");
        if (split == "train")
            t.split = SftSplit::train;
        else if (split == "validation")
            t.split = SftSplit::validation;
        else
            throw ParseError("unknown split '" + split + "' for theme " + t.theme_id);
        out.push_back(std::move(t));
    }
    return out;
}

void SftScalingPlan::validate(std::size_t pool_size) const {
    if (sizes.empty()) throw Error("scaling plan: no sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw Error("scaling plan: sizes must be strictly increasing");
    if (sizes.back() > pool_size)
        throw Error("scaling plan: size " + std::to_string(sizes.back()) +
                    " exceeds available pool of " + std::to_string(pool_size) +
                    " (commission more paraphrase variants to go higher)");
}

ParaphraseSet paraphrase_theme(const ReferenceTheme& theme, std::size_t count, Backend& backend,
                               const PromptLibrary& prompts, const std::string& model_id,
                               int retry_budget) {
    if (count < 1) throw Error("paraphrase_theme: count must be >= 1");

    ParaphraseSet set;
    set.theme_id = theme.theme_id;
    set.generator_model = model_id;

    std::set<std::string> seen;
    seen.insert(normalize_variant(theme.text));  // a variant equal to the original is no variant
    int request_count = static_cast<int>(count);
    for (int attempt = 0; attempt <= retry_budget; ++attempt) {
        ChatRequest request;
        request.model_id = model_id;
        request.messages = render_paraphrase_prompt(prompts, theme.text, request_count);
        if (attempt > 0)
            request.messages.push_back(
                {"user", "Some earlier variants were duplicates (batch " + std::to_string(attempt) +
                             "). Produce fresh, previously unseen paraphrases."});
        const std::string content = backend.complete_chat(request).content;
        json arr = json::parse(content, nullptr, false);
        if (!arr.is_array()) throw ParseError("paraphrase output is not a JSON array");
        for (const auto& v : arr) {
            const std::string text = trim_copy(v.get<std::string>());
            if (text.empty()) continue;
            if (seen.insert(normalize_variant(text)).second) {
                set.variants.push_back(text);
                if (set.variants.size() == count) return set;
            }
        }
        request_count = static_cast<int>(count - set.variants.size());
    }
    throw Error("paraphrase_theme: could not reach " + std::to_string(count) +
                " distinct variants for " + theme.theme_id + " within the retry budget");
}

std::vector<SftDatapoint> build_pairwise_dataset(
    const std::vector<ReferenceTheme>& train_themes,
    const std::map<std::string, ParaphraseSet>& paraphrases, const Corpus& corpus,
    const PromptLibrary& prompts, PairingMode mode) {
    if (corpus.empty()) throw Error("build_pairwise_dataset: empty corpus");

    for (const auto& theme : train_themes)
        if (theme.split != SftSplit::train)
            throw Error("build_pairwise_dataset: validation theme '" + theme.theme_id +
                        "' passed in the train list");

    const auto identity = RoleIdentity::builtin(Role::qualitative_researcher);
    const auto criteria = CriteriaSet::default_eight();

    std::vector<SftDatapoint> out;
    std::size_t rotation = 0;
    for (const auto& theme : train_themes) {
        auto it = paraphrases.find(theme.theme_id);
        if (it == paraphrases.end())
            throw Error("build_pairwise_dataset: no paraphrase set for " + theme.theme_id);
        if (!it->second.approved)
            throw Error("build_pairwise_dataset: paraphrase set for " + theme.theme_id +
                        " is not human-approved");

        for (std::size_t v = 0; v < it->second.variants.size(); ++v) {
            const auto& transcript =
                corpus.transcripts()[rotation++ % corpus.transcripts().size()];
            SftDatapoint dp;
            dp.prompt_messages = render_generation_prompt(
                prompts, GenerationStage::theme_generation, identity, criteria,
                render_transcript_payload(transcript), 12);
            if (mode == PairingMode::single_theme) {
                dp.answer = it->second.variants[v];
            } else {
                // full-set answer: this variant slot for every train theme
                std::string joined;
                for (const auto& other : train_themes) {
                    const auto& set = paraphrases.at(other.theme_id);
                    joined += set.variants[v % set.variants.size()] + "\n";
                }
                dp.answer = joined;
            }
            dp.source_theme_id = theme.theme_id;
            dp.variant_index = v;
            if (dp.answer.empty()) throw Error("build_pairwise_dataset: empty answer");
            out.push_back(std::move(dp));
        }
    }
    if (out.empty()) throw Error("build_pairwise_dataset: no datapoints produced");
    return out;
}

std::map<std::size_t, std::vector<SftDatapoint>> sample_scaling_subsets(
    const std::vector<SftDatapoint>& dataset, const SftScalingPlan& plan) {
    plan.validate(dataset.size());

    // per-theme pools, each shuffled with the plan seed
    std::map<std::string, std::vector<std::size_t>> pools;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        pools[dataset[i].source_theme_id].push_back(i);
    std::mt19937_64 rng(static_cast<std::uint64_t>(plan.sampling_seed));
    for (auto& [theme_id, pool] : pools) std::shuffle(pool.begin(), pool.end(), rng);

    // master order: always draw from the theme with the lowest
    // taken/total ratio, so every prefix is proportional within 1 and
    // subsets nest by construction
    struct Cursor {
        const std::vector<std::size_t>* pool;
        std::size_t taken = 0;
    };
    std::vector<std::pair<std::string, Cursor>> cursors;
    for (auto& [theme_id, pool] : pools) cursors.push_back({theme_id, {&pool, 0}});

    std::vector<std::size_t> master;
    while (master.size() < dataset.size()) {
        double best_ratio = 2.0;
        std::size_t best = cursors.size();
        for (std::size_t c = 0; c < cursors.size(); ++c) {
            auto& cur = cursors[c].second;
            if (cur.taken == cur.pool->size()) continue;
            const double ratio = static_cast<double>(cur.taken) / cur.pool->size();
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best = c;
            }
        }
        auto& cur = cursors[best].second;
        master.push_back((*cur.pool)[cur.taken++]);
    }

    std::map<std::size_t, std::vector<SftDatapoint>> out;
    for (std::size_t size : plan.sizes) {
        std::vector<SftDatapoint>& subset = out[size];
        for (std::size_t i = 0; i < size; ++i) subset.push_back(dataset[master[i]]);
    }
    return out;
}

void export_jsonl(const std::vector<SftDatapoint>& datapoints, const std::string& path) {
    if (datapoints.empty()) throw Error("export_jsonl: no datapoints");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    for (const auto& dp : datapoints) {
        json messages = json::array();
        for (const auto& m : dp.prompt_messages)
            messages.push_back({{"role", m.role}, {"content", m.content}});
        messages.push_back({{"role", "assistant"}, {"content", dp.answer}});
        out << json{{"messages", messages}}.dump() << "\n";
    }
}

std::vector<SftDatapoint> import_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<SftDatapoint> out;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("messages"))
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad JSONL line");
        SftDatapoint dp;
        for (const auto& m : j["messages"]) {
            const std::string role = m.at("role").get<std::string>();
            const std::string content = m.at("content").get<std::string>();
            if (role == "assistant")
                dp.answer = content;
            else
                dp.prompt_messages.push_back({role, content});
        }
        if (dp.answer.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": no assistant answer");
        out.push_back(std::move(dp));
    }
    return out;
}

bool has_validation_leakage(const std::string& jsonl_path,
                            const std::vector<ReferenceTheme>& themes,
                            const std::map<std::string, ParaphraseSet>& paraphrases) {
    std::set<std::string> forbidden;
    for (const auto& theme : themes) {
        if (theme.split != SftSplit::validation) continue;
        forbidden.insert(normalize_variant(theme.text));
        auto it = paraphrases.find(theme.theme_id);
        if (it != paraphrases.end())
            for (const auto& v : it->second.variants) forbidden.insert(normalize_variant(v));
    }
    for (const auto& dp : import_jsonl(jsonl_path))
        if (forbidden.count(normalize_variant(dp.answer))) return true;
    return false;
}

}  // namespace sftta
