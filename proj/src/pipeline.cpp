#include "sftta/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;

namespace sftta {

// ------------------------------------------------------------ placement

void PlacementConfig::validate() const {
    if (coding_agents.empty()) throw ConfigError("placement: coding_agents must be non-empty");
    if (theme_agents.empty()) throw ConfigError("placement: theme_agents must be non-empty");
    if (refinement_rounds < 0) throw ConfigError("placement: refinement_rounds must be >= 0");
    if (target_theme_count < 1) throw ConfigError("placement: target_theme_count must be >= 1");
    std::set<std::string> ids;
    for (const auto* stage : {&coding_agents, &theme_agents}) {
        int fine_tuned = 0;
        for (const auto& a : *stage) {
            if (!ids.insert(a.agent_id).second)
                throw ConfigError("placement: duplicate agent_id " + a.agent_id);
            if (a.is_fine_tuned) ++fine_tuned;
        }
        if (fine_tuned > 1)
            throw ConfigError("placement: at most one fine-tuned agent per stage");
    }
}

namespace {

json agent_to_json(const AgentSpec& a) {
    return {{"agent_id", a.agent_id},
            {"role", role_name(a.identity.role)},
            {"model_id", a.model_id},
            {"is_fine_tuned", a.is_fine_tuned}};
}

Role role_from_name(const std::string& name) {
    if (name == "qualitative_researcher") return Role::qualitative_researcher;
    if (name == "layperson") return Role::layperson;
    if (name == "sft_agent") return Role::sft_agent;
    if (name == "judge") return Role::judge;
    throw ConfigError("unknown role: " + name);
}

AgentSpec agent_from_json(const json& j) {
    AgentSpec a;
    a.agent_id = j.at("agent_id").get<std::string>();
    a.identity = RoleIdentity::builtin(role_from_name(j.at("role").get<std::string>()));
    a.model_id = j.at("model_id").get<std::string>();
    a.is_fine_tuned = j.value("is_fine_tuned", false);
    return a;
}

}  // namespace

json PlacementConfig::to_json() const {
    json j;
    j["coding_agents"] = json::array();
    for (const auto& a : coding_agents) j["coding_agents"].push_back(agent_to_json(a));
    j["theme_agents"] = json::array();
    for (const auto& a : theme_agents) j["theme_agents"].push_back(agent_to_json(a));
    j["refinement_rounds"] = refinement_rounds;
    j["human_gate"] = human_gate;
    j["target_theme_count"] = target_theme_count;
    return j;
}

PlacementConfig PlacementConfig::from_json(const json& j) {
    PlacementConfig p;
    for (const auto& a : j.at("coding_agents")) p.coding_agents.push_back(agent_from_json(a));
    for (const auto& a : j.at("theme_agents")) p.theme_agents.push_back(agent_from_json(a));
    p.refinement_rounds = j.value("refinement_rounds", 3);
    p.human_gate = j.value("human_gate", false);
    p.target_theme_count = j.value("target_theme_count", 12);
    p.validate();
    return p;
}

std::vector<std::string> PlacementConfig::preset_names() {
    return {"vanilla", "vanilla_sft_only", "sft_coding", "sft_tg", "sft_both"};
}

PlacementConfig PlacementConfig::preset(const std::string& name, const std::string& base_model,
                                        const std::string& sft_model) {
    auto agent = [&](const std::string& id, Role role, bool sft) {
        return AgentSpec{id, RoleIdentity::builtin(role), sft ? sft_model : base_model, sft};
    };
    auto stage = [&](const std::string& prefix, bool with_sft) {
        std::vector<AgentSpec> agents{
            agent(prefix + "_researcher", Role::qualitative_researcher, false),
            agent(prefix + "_layperson", Role::layperson, false)};
        if (with_sft) agents.push_back(agent(prefix + "_sft", Role::sft_agent, true));
        return agents;
    };

    PlacementConfig p;
    if (name == "vanilla") {
        p.coding_agents = stage("coding", false);
        p.theme_agents = stage("theme", false);
    } else if (name == "vanilla_sft_only") {
        p.coding_agents = {agent("coding_sft", Role::sft_agent, true)};
        p.theme_agents = {agent("theme_sft", Role::sft_agent, true)};
    } else if (name == "sft_coding") {
        p.coding_agents = stage("coding", true);
        p.theme_agents = stage("theme", false);
    } else if (name == "sft_tg") {
        p.coding_agents = stage("coding", false);
        p.theme_agents = stage("theme", true);
    } else if (name == "sft_both") {
        p.coding_agents = stage("coding", true);
        p.theme_agents = stage("theme", true);
    } else {
        throw ConfigError("unknown placement preset: " + name);
    }
    p.validate();
    return p;
}

// --------------------------------------------------------------- themes

std::vector<std::string> ThemeSet::titles() const {
    std::vector<std::string> out;
    for (const auto& t : themes) out.push_back(t.title);
    return out;
}

std::string ThemeSet::joined_text() const {
    std::string out;
    for (const auto& t : themes) {
        out += t.title;
        if (!t.description.empty()) out += ". " + t.description;
        out += "\n";
    }
    return out;
}

json ThemeSet::to_json() const {
    json arr = json::array();
    for (const auto& t : themes) {
        json jt{{"title", t.title},
                {"description", t.description},
                {"quote_ids", t.supporting_quote_ids}};
        json prov = json::array();
        for (const auto& p : t.provenance)
            prov.push_back({{"stage", p.stage}, {"agent_id", p.agent_id}, {"round", p.round}});
        jt["provenance"] = prov;
        arr.push_back(jt);
    }
    return json{{"themes", arr}};
}

ThemeSet ThemeSet::from_json(const json& j) {
    ThemeSet set;
    const json& arr = j.is_array() ? j : j.at("themes");
    for (const auto& jt : arr) {
        Theme t;
        t.title = jt.at("title").get<std::string>();
        t.description = jt.value("description", "");
        for (const auto& q : jt.value("quote_ids", json::array()))
            t.supporting_quote_ids.push_back(q.get<std::string>());
        for (const auto& p : jt.value("provenance", json::array()))
            t.provenance.push_back({p.value("stage", ""), p.value("agent_id", ""),
                                    p.value("round", 0)});
        if (t.title.empty()) throw ParseError("theme with empty title");
        set.themes.push_back(std::move(t));
    }
    return set;
}

ThemeSet load_theme_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open theme set file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return ThemeSet::from_json(j);
}

void save_theme_set(const ThemeSet& themes, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write theme set file: " + path);
    out << themes.to_json().dump(2) << "\n";
}

std::string CritiqueReport::as_text() const {
    std::ostringstream out;
    for (const auto& v : verdicts)
        out << "theme " << v.theme_index + 1 << " / " << v.criterion << ": " << v.verdict
            << (v.rationale.empty() ? "" : " (" + v.rationale + ")") << "\n";
    return out.str();
}

json CritiqueReport::to_json() const {
    json arr = json::array();
    for (const auto& v : verdicts)
        arr.push_back({{"theme_index", v.theme_index},
                       {"criterion", v.criterion},
                       {"verdict", v.verdict},
                       {"rationale", v.rationale}});
    return arr;
}

ReviewOutcome apply_review_decision(const ThemeSet& themes,
                                    const std::vector<ReviewDecision>& decisions) {
    std::set<std::size_t> seen;
    std::set<std::size_t> removed;
    ReviewOutcome outcome;
    for (const auto& d : decisions) {
        if (d.theme_index >= themes.size())
            throw Error("review decision index out of range: " + std::to_string(d.theme_index));
        if (!seen.insert(d.theme_index).second)
            throw Error("duplicate review decision for theme index " +
                        std::to_string(d.theme_index));
        if (d.action == ReviewAction::remove) {
            removed.insert(d.theme_index);
            outcome.removed_indices.push_back(d.theme_index);
        } else if (d.action == ReviewAction::extra_round) {
            outcome.extra_round_indices.push_back(d.theme_index);
        }
    }
    for (std::size_t i = 0; i < themes.size(); ++i)
        if (!removed.count(i)) outcome.themes.themes.push_back(themes.themes[i]);
    return outcome;
}

// -------------------------------------------------------------- manifest

json RunManifest::to_json() const {
    json j;
    j["run_id"] = run_id;
    j["seed"] = seed;
    j["placement"] = placement.to_json();
    j["cassette_ref"] = cassette_ref;
    j["coding_codes"] = coding_codes;
    j["aggregated_codes"] = aggregated_codes;
    j["candidate_themes"] = candidate_themes;
    j["round_artifacts"] = round_artifacts;
    j["human_actions"] = human_actions;
    j["final_themes"] = final_themes;
    j["warnings"] = warnings;
    j["content_hash"] = content_hash();
    return j;
}

std::string RunManifest::content_hash() const {
    json j;
    j["seed"] = seed;
    j["placement"] = placement.to_json();
    j["coding_codes"] = coding_codes;
    j["aggregated_codes"] = aggregated_codes;
    j["candidate_themes"] = candidate_themes;
    j["round_artifacts"] = round_artifacts;
    j["human_actions"] = human_actions;
    j["final_themes"] = final_themes;
    j["warnings"] = warnings;
    return fnv1a64_hex(j.dump());
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    out << to_json().dump(2) << "\n";
}

// -------------------------------------------------------------- parsing

namespace {

// agents may wrap JSON in fences or surrounding prose
json extract_json_array(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_array()) return j;
    auto b = text.find('[');
    auto e = text.rfind(']');
    if (b == std::string::npos || e == std::string::npos || e <= b)
        throw ParseError("no JSON array in agent output");
    j = json::parse(text.substr(b, e - b + 1), nullptr, false);
    if (!j.is_array()) throw ParseError("agent output is not a JSON array");
    return j;
}

ThemeSet parse_themes_json(const std::string& text) {
    ThemeSet set;
    for (const auto& jt : extract_json_array(text)) {
        Theme t;
        t.title = jt.value("title", "");
        t.description = jt.value("description", "");
        for (const auto& q : jt.value("quote_ids", json::array()))
            t.supporting_quote_ids.push_back(q.get<std::string>());
        if (t.title.empty()) throw ParseError("theme with empty title in agent output");
        set.themes.push_back(std::move(t));
    }
    if (set.empty()) throw ParseError("agent returned zero themes");
    return set;
}

}  // namespace

std::vector<Code> parse_codes_json(const std::string& text, const std::string& coder_id) {
    std::vector<Code> codes;
    for (const auto& jc : extract_json_array(text)) {
        Code c;
        c.label = jc.value("label", "");
        c.description = jc.value("description", "");
        for (const auto& q : jc.value("quote_ids", json::array()))
            c.quote_ids.push_back(q.get<std::string>());
        c.coder_id = coder_id;
        if (c.label.empty()) throw ParseError("code with empty label in agent output");
        codes.push_back(std::move(c));
    }
    return codes;
}

json codes_to_json(const std::vector<Code>& codes) {
    json arr = json::array();
    for (const auto& c : codes)
        arr.push_back({{"label", c.label},
                       {"description", c.description},
                       {"quote_ids", c.quote_ids},
                       {"coder_id", c.coder_id}});
    return arr;
}

std::string render_transcript_payload(const Transcript& transcript) {
    std::ostringstream out;
    for (const auto& q : transcript.quotes)
        out << q.id.render() << " (" << q.speaker << ") " << q.text << "\n";
    return out.str();
}

// -------------------------------------------------------------- pipeline

Pipeline::Pipeline(std::shared_ptr<Backend> backend, PromptLibrary prompts, CriteriaSet criteria)
    : backend_(std::move(backend)), prompts_(std::move(prompts)), criteria_(std::move(criteria)) {}

ChatResponse Pipeline::call(const std::vector<ChatMessage>& messages, const std::string& model_id,
                            double temperature) {
    ChatRequest request;
    request.model_id = model_id;
    request.messages = messages;
    request.temperature = temperature;
    request.seed = seed_;
    return backend_->complete_chat(request);
}

std::map<std::string, std::vector<Code>> Pipeline::run_coding_stage(
    const Corpus& corpus, const std::vector<AgentSpec>& agents, RunManifest* manifest) {
    if (agents.empty()) throw Error("run_coding_stage: no agents");
    if (corpus.empty()) throw Error("run_coding_stage: empty corpus");

    std::map<std::string, std::vector<Code>> by_transcript;
    for (const auto& transcript : corpus.transcripts()) {
        const std::string payload = render_transcript_payload(transcript);
        std::size_t successes = 0;
        for (const auto& agent : agents) {
            auto messages = render_generation_prompt(prompts_, GenerationStage::coding,
                                                     agent.identity, criteria_, payload, 0);
            std::vector<Code> codes;
            bool parsed = false;
            for (int attempt = 0; attempt < 2 && !parsed; ++attempt) {
                try {
                    codes = parse_codes_json(
                        call(messages, agent.model_id, generation_temperature_).content,
                        agent.agent_id);
                    parsed = true;
                } catch (const ParseError&) {
                    if (attempt == 0)
                        messages.push_back({"user",
                                            "Your previous answer was not a valid JSON array of "
                                            "codes. Answer with only the JSON array."});
                }
            }
            if (!parsed) {
                if (manifest)
                    manifest->warnings.push_back("coding: agent " + agent.agent_id +
                                                 " unparseable twice on " +
                                                 transcript.transcript_id +
                                                 "; contribution empty");
                continue;
            }
            ++successes;
            for (auto& c : codes) {
                for (const auto& qid : c.quote_ids) {
                    auto parsed_id = QuoteId::try_parse(qid);
                    if (!parsed_id || !corpus.contains(*parsed_id)) {
                        if (manifest)
                            manifest->warnings.push_back("coding: code '" + c.label +
                                                         "' cites invalid quote id " + qid);
                    }
                }
                by_transcript[transcript.transcript_id].push_back(c);
            }
            if (manifest)
                manifest->coding_codes[agent.agent_id][transcript.transcript_id] =
                    codes_to_json(codes);
        }
        if (successes == 0)
            throw Error("run_coding_stage: every agent failed on transcript " +
                        transcript.transcript_id);
    }
    return by_transcript;
}

std::vector<Code> Pipeline::aggregate_codes(const std::vector<std::vector<Code>>& per_agent_codes,
                                            RunManifest* manifest) {
    json combined = json::array();
    std::set<std::string> input_ids;
    for (const auto& list : per_agent_codes) {
        for (const auto& c : list) {
            combined.push_back({{"label", c.label},
                                {"description", c.description},
                                {"quote_ids", c.quote_ids}});
            input_ids.insert(c.quote_ids.begin(), c.quote_ids.end());
        }
    }
    if (combined.empty()) throw Error("aggregate_codes: no input codes");

    auto messages = render_code_aggregation_prompt(prompts_, combined.dump(2));
    std::vector<Code> aggregated;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            aggregated = parse_codes_json(
                call(messages, "aggregator", generation_temperature_).content,
                "code_aggregator");
            break;
        } catch (const ParseError&) {
            if (attempt == 1) throw;
            messages.push_back({"user",
                                "Your previous answer was not a valid JSON array of codes. "
                                "Answer with only the JSON array."});
        }
    }

    // quote-conservation: the aggregate may not cite ids absent from the input
    for (auto& c : aggregated) {
        auto end = std::remove_if(c.quote_ids.begin(), c.quote_ids.end(),
                                  [&](const std::string& q) { return !input_ids.count(q); });
        if (end != c.quote_ids.end()) {
            if (manifest)
                manifest->warnings.push_back("aggregate_codes: dropped uncited quote ids from '" +
                                             c.label + "'");
            c.quote_ids.erase(end, c.quote_ids.end());
        }
    }
    if (manifest) manifest->aggregated_codes = codes_to_json(aggregated);
    return aggregated;
}

std::map<std::string, ThemeSet> Pipeline::run_theme_generation(const std::vector<Code>& codes,
                                                               const std::vector<AgentSpec>& agents,
                                                               int theme_count,
                                                               RunManifest* manifest) {
    if (codes.empty()) throw Error("run_theme_generation: no codes");
    if (agents.empty()) throw Error("run_theme_generation: no agents");

    json payload = json::array();
    for (const auto& c : codes)
        payload.push_back(
            {{"label", c.label}, {"description", c.description}, {"quote_ids", c.quote_ids}});

    std::map<std::string, ThemeSet> out;
    for (const auto& agent : agents) {
        auto messages = render_generation_prompt(prompts_, GenerationStage::theme_generation,
                                                 agent.identity, criteria_, payload.dump(2),
                                                 theme_count);
        ThemeSet themes;
        bool parsed = false;
        for (int attempt = 0; attempt < 2 && !parsed; ++attempt) {
            try {
                themes = parse_themes_json(
                    call(messages, agent.model_id, generation_temperature_).content);
                parsed = true;
            } catch (const ParseError&) {
                if (attempt == 0)
                    messages.push_back({"user",
                                        "Your previous answer was not a valid JSON array of "
                                        "themes. Answer with only the JSON array."});
            }
        }
        if (!parsed) {
            if (manifest)
                manifest->warnings.push_back("theme_generation: agent " + agent.agent_id +
                                             " unparseable twice; contribution empty");
            continue;
        }
        for (auto& t : themes.themes)
            t.provenance.push_back({"theme_generation", agent.agent_id, 0});
        if (manifest) manifest->candidate_themes[agent.agent_id] = themes.to_json();
        out.emplace(agent.agent_id, std::move(themes));
    }
    if (out.empty()) throw Error("run_theme_generation: every agent failed");
    return out;
}

ThemeSet Pipeline::aggregate_themes(const std::map<std::string, ThemeSet>& candidates,
                                    int target_count, RunManifest* manifest) {
    if (candidates.empty()) throw Error("aggregate_themes: no candidates");
    if (target_count < 1) throw Error("aggregate_themes: target_count must be >= 1");

    json combined = json::array();
    std::vector<std::string> contributing;
    for (const auto& [agent_id, set] : candidates) {
        contributing.push_back(agent_id);
        for (const auto& t : set.themes)
            combined.push_back({{"title", t.title},
                                {"description", t.description},
                                {"quote_ids", t.supporting_quote_ids},
                                {"agent_id", agent_id}});
    }

    auto messages = render_theme_aggregation_prompt(prompts_, combined.dump(2), target_count);
    ThemeSet aggregated;
    bool retried = false;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            aggregated =
                parse_themes_json(call(messages, "aggregator", generation_temperature_).content);
        } catch (const ParseError&) {
            if (attempt == 1) throw;
            retried = true;
            messages.push_back({"user",
                                "Your previous answer was not a valid JSON array of themes. "
                                "Answer with only the JSON array."});
            continue;
        }
        if (static_cast<int>(aggregated.size()) == target_count) break;
        if (attempt == 1)
            throw Error("aggregate_themes: got " + std::to_string(aggregated.size()) +
                        " themes, need exactly " + std::to_string(target_count) +
                        " after corrective re-prompt");
        retried = true;
        messages.push_back({"user",
                            "You returned " + std::to_string(aggregated.size()) +
                                " themes. Return the JSON array again with exactly " +
                                std::to_string(target_count) + " themes."});
    }

    for (auto& t : aggregated.themes) {
        for (const auto& agent_id : contributing)
            t.provenance.push_back({"theme_generation", agent_id, 0});
        t.provenance.push_back({"aggregation", "theme_aggregator", 0});
    }
    if (manifest) {
        manifest->round_artifacts["aggregation"] = aggregated.to_json();
        if (retried) manifest->warnings.push_back("aggregate_themes: corrective re-prompt issued");
    }
    return aggregated;
}

CritiqueReport Pipeline::evaluate_themes(const ThemeSet& themes) {
    if (themes.empty()) throw Error("evaluate_themes: empty theme set");
    auto messages =
        render_evaluation_prompt(prompts_, themes.to_json()["themes"].dump(2), criteria_);

    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::string content =
            call(messages, "evaluation_agent", evaluation_temperature_).content;
        try {
            CritiqueReport report;
            for (const auto& jv : extract_json_array(content)) {
                CritiqueVerdict v;
                v.theme_index = jv.at("theme_index").get<std::size_t>();
                v.criterion = jv.at("criterion").get<std::string>();
                v.verdict = jv.at("verdict").get<std::string>();
                v.rationale = jv.value("rationale", "");
                if (v.verdict != "pass" && v.verdict != "revise")
                    throw ParseError("verdict must be pass or revise");
                report.verdicts.push_back(std::move(v));
            }
            if (report.verdicts.empty()) throw ParseError("empty critique");
            return report;
        } catch (const ParseError&) {
            if (attempt == 1) throw;
            messages.push_back({"user",
                                "Your previous answer was not valid. Answer with only the JSON "
                                "array of verdict objects."});
        }
    }
    throw ParseError("evaluate_themes: unreachable");
}

ThemeSet Pipeline::refine_themes(const ThemeSet& themes, const CritiqueReport& critique,
                                 int round) {
    if (themes.empty()) throw Error("refine_themes: empty theme set");
    auto messages = render_refinement_prompt(prompts_, themes.to_json()["themes"].dump(2),
                                             themes.titles(), critique.as_text());

    ThemeSet refined;
    for (int attempt = 0; attempt < 2; ++attempt) {
        try {
            refined = parse_themes_json(
                call(messages, "refinement_agent", generation_temperature_).content);
        } catch (const ParseError&) {
            if (attempt == 1) throw;
            messages.push_back({"user",
                                "Your previous answer was not a valid JSON array of themes. "
                                "Answer with only the JSON array."});
            continue;
        }
        if (refined.size() == themes.size()) break;
        if (attempt == 1)
            throw Error("refine_themes: theme count drifted from " +
                        std::to_string(themes.size()) + " to " + std::to_string(refined.size()) +
                        " after retry");
        messages.push_back({"user",
                            "You changed the number of themes. Return the JSON array again with "
                            "exactly " + std::to_string(themes.size()) + " themes."});
    }

    for (std::size_t i = 0; i < refined.size(); ++i) {
        refined.themes[i].provenance = themes.themes[i].provenance;
        refined.themes[i].provenance.push_back({"refinement", "refinement_agent", round});
    }
    return refined;
}

PipelineResult Pipeline::run_pipeline(const Corpus& corpus, const PlacementConfig& placement,
                                      long seed, const ReviewProvider& review) {
    if (corpus.empty()) throw Error("run_pipeline: empty corpus");
    placement.validate();
    seed_ = seed;

    PipelineResult result;
    RunManifest& manifest = result.manifest;
    manifest.seed = seed;
    manifest.placement = placement;
    manifest.coding_codes = json::object();
    manifest.candidate_themes = json::object();
    manifest.round_artifacts = json::object();
    manifest.human_actions = json::array();

    auto by_transcript = run_coding_stage(corpus, placement.coding_agents, &manifest);
    std::vector<std::vector<Code>> per_agent;
    for (auto& [tid, codes] : by_transcript) per_agent.push_back(codes);
    auto codes = aggregate_codes(per_agent, &manifest);

    auto candidates = run_theme_generation(codes, placement.theme_agents,
                                           placement.target_theme_count, &manifest);
    ThemeSet themes = aggregate_themes(candidates, placement.target_theme_count, &manifest);

    int total_rounds = placement.refinement_rounds;
    for (int round = 1; round <= total_rounds; ++round) {
        json round_record;
        CritiqueReport critique = evaluate_themes(themes);
        round_record["critique"] = critique.to_json();

        if (placement.human_gate && review) {
            auto decisions = review(themes, round);
            auto outcome = apply_review_decision(themes, decisions);
            json actions = json::array();
            for (const auto& d : decisions) {
                const char* action = d.action == ReviewAction::keep ? "keep"
                                     : d.action == ReviewAction::remove ? "remove"
                                                                        : "extra_round";
                actions.push_back({{"round", round},
                                   {"theme_index", d.theme_index},
                                   {"action", action}});
            }
            for (const auto& a : actions) manifest.human_actions.push_back(a);
            round_record["human_actions"] = actions;
            if (!outcome.extra_round_indices.empty()) {
                ++total_rounds;
                manifest.warnings.push_back("human gate requested an extra refinement round at round " +
                                            std::to_string(round));
            }
            themes = outcome.themes;
            if (themes.empty()) throw Error("run_pipeline: human gate removed every theme");
        }

        themes = refine_themes(themes, critique, round);
        round_record["themes"] = themes.to_json();
        manifest.round_artifacts["round_" + std::to_string(round)] = round_record;
    }

    manifest.final_themes = themes.to_json();
    result.themes = std::move(themes);
    return result;
}

}  // namespace sftta
