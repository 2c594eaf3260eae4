#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sftta/corpus.hpp"
#include "sftta/gateway.hpp"
#include "sftta/prompts.hpp"

namespace sftta {

struct AgentSpec {
    std::string agent_id;
    RoleIdentity identity;
    std::string model_id;
    bool is_fine_tuned = false;
};

struct PlacementConfig {
    std::vector<AgentSpec> coding_agents;
    std::vector<AgentSpec> theme_agents;
    int refinement_rounds = 3;
    bool human_gate = false;
    int target_theme_count = 12;

    void validate() const;  // non-empty stages, unique ids, <=1 SFT agent per stage

    nlohmann::json to_json() const;
    static PlacementConfig from_json(const nlohmann::json& j);

    /// Table-style presets: vanilla, vanilla_sft_only, sft_coding,
    /// sft_tg, sft_both.
    static PlacementConfig preset(const std::string& name, const std::string& base_model,
                                  const std::string& sft_model);
    static std::vector<std::string> preset_names();
};

struct Code {
    std::string label;
    std::string description;
    std::vector<std::string> quote_ids;
    std::string coder_id;
};

struct ThemeProvenance {
    std::string stage;  // theme_generation | aggregation | refinement
    std::string agent_id;
    int round = 0;
};

struct Theme {
    std::string title;
    std::string description;
    std::vector<std::string> supporting_quote_ids;
    std::vector<ThemeProvenance> provenance;
};

struct ThemeSet {
    std::vector<Theme> themes;

    bool empty() const { return themes.empty(); }
    std::size_t size() const { return themes.size(); }
    std::vector<std::string> titles() const;
    /// Concatenated "title. description" text, one theme per line.
    std::string joined_text() const;

    nlohmann::json to_json() const;
    static ThemeSet from_json(const nlohmann::json& j);
};

ThemeSet load_theme_set(const std::string& path);
void save_theme_set(const ThemeSet& themes, const std::string& path);

struct CritiqueVerdict {
    std::size_t theme_index = 0;
    std::string criterion;
    std::string verdict;  // pass | revise
    std::string rationale;
};

struct CritiqueReport {
    std::vector<CritiqueVerdict> verdicts;
    std::string as_text() const;
    nlohmann::json to_json() const;
};

enum class ReviewAction { keep, remove, extra_round };

struct ReviewDecision {
    std::size_t theme_index = 0;
    ReviewAction action = ReviewAction::keep;
};

struct ReviewOutcome {
    ThemeSet themes;
    std::vector<std::size_t> removed_indices;
    std::vector<std::size_t> extra_round_indices;  // schedule delta
};

/// Drop removed themes, log extras; indices refer to the input set and
/// duplicates are an error.
ReviewOutcome apply_review_decision(const ThemeSet& themes,
                                    const std::vector<ReviewDecision>& decisions);

struct RunManifest {
    std::string run_id;
    long seed = 0;
    PlacementConfig placement;
    std::string cassette_ref;

    nlohmann::json coding_codes;       // agent -> transcript -> codes
    nlohmann::json aggregated_codes;
    nlohmann::json candidate_themes;   // agent -> themes
    nlohmann::json round_artifacts;    // per round: critique, themes, human actions
    nlohmann::json human_actions;
    nlohmann::json final_themes;
    std::vector<std::string> warnings;

    /// Stable hash over the deterministic content (run_id and cassette
    /// path excluded, so replays of the same seed compare equal).
    std::string content_hash() const;

    nlohmann::json to_json() const;
    void save(const std::string& path) const;
};

/// Decisions source for the human-oversight gate; invoked after each
/// evaluation when placement.human_gate is on.
using ReviewProvider = std::function<std::vector<ReviewDecision>(const ThemeSet&, int round)>;

struct PipelineResult {
    ThemeSet themes;
    RunManifest manifest;
};

class Pipeline {
public:
    Pipeline(std::shared_ptr<Backend> backend, PromptLibrary prompts,
             CriteriaSet criteria = CriteriaSet::default_eight());

    std::map<std::string, std::vector<Code>> run_coding_stage(const Corpus& corpus,
                                                              const std::vector<AgentSpec>& agents,
                                                              RunManifest* manifest = nullptr);

    std::vector<Code> aggregate_codes(const std::vector<std::vector<Code>>& per_agent_codes,
                                      RunManifest* manifest = nullptr);

    std::map<std::string, ThemeSet> run_theme_generation(const std::vector<Code>& codes,
                                                         const std::vector<AgentSpec>& agents,
                                                         int theme_count,
                                                         RunManifest* manifest = nullptr);

    ThemeSet aggregate_themes(const std::map<std::string, ThemeSet>& candidates, int target_count,
                              RunManifest* manifest = nullptr);

    CritiqueReport evaluate_themes(const ThemeSet& themes);

    ThemeSet refine_themes(const ThemeSet& themes, const CritiqueReport& critique, int round);

    PipelineResult run_pipeline(const Corpus& corpus, const PlacementConfig& placement, long seed,
                                const ReviewProvider& review = nullptr);

    void set_generation_temperature(double t) { generation_temperature_ = t; }
    void set_evaluation_temperature(double t) { evaluation_temperature_ = t; }

private:
    ChatResponse call(const std::vector<ChatMessage>& messages, const std::string& model_id,
                      double temperature);

    std::shared_ptr<Backend> backend_;
    PromptLibrary prompts_;
    CriteriaSet criteria_;
    double generation_temperature_ = 0.7;
    double evaluation_temperature_ = 0.0;
    long seed_ = 0;
};

/// Transcript rendered one quote per line: `[P1_S001] (speaker) text`.
std::string render_transcript_payload(const Transcript& transcript);

std::vector<Code> parse_codes_json(const std::string& text, const std::string& coder_id);
nlohmann::json codes_to_json(const std::vector<Code>& codes);

}  // namespace sftta
