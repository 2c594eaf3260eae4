#include "sftta/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "sftta/corpus.hpp"
#include "sftta/error.hpp"

namespace fs = std::filesystem;

namespace sftta {

std::string role_name(Role role) {
    switch (role) {
        case Role::qualitative_researcher: return "qualitative_researcher";
        case Role::layperson: return "layperson";
        case Role::sft_agent: return "sft_agent";
        case Role::judge: return "judge";
    }
    return "unknown";
}

RoleIdentity RoleIdentity::builtin(Role role) {
    RoleIdentity id;
    id.role = role;
    switch (role) {
        case Role::qualitative_researcher:
            id.persona_text =
                "You are an expert qualitative researcher trained in the six-phase inductive "
                "thematic analysis framework: familiarization with the data, generating initial "
                "codes, searching for themes, reviewing themes, defining and naming themes, and "
                "producing the report.";
            break;
        case Role::layperson:
            id.persona_text =
                "You are a thoughtful layperson with no qualitative-analysis training. You read "
                "interview material closely and describe, in plain language, the patterns that "
                "stand out to you.";
            break;
        case Role::sft_agent:
            id.persona_text =
                "You are an analyst whose judgment has been shaped by worked examples of this "
                "exact analysis task. Apply that learned style directly to the material.";
            break;
        case Role::judge:
            id.persona_text =
                "You are an impartial judge of theme quality. You compare outputs strictly "
                "against the stated criterion and never explain yourself.";
            break;
    }
    return id;
}

CriteriaSet::CriteriaSet(std::vector<Criterion> criteria) : criteria_(std::move(criteria)) {
    std::set<std::string> names;
    for (const auto& c : criteria_)
        if (!names.insert(c.name).second)
            throw Error("CriteriaSet: duplicate criterion name: " + c.name);
}

CriteriaSet CriteriaSet::default_eight() {
    return CriteriaSet({
        {"Uniqueness", "Each theme represents a distinct idea."},
        {"Actionability",
         "Each theme can inform interventions, support strategies, or policy decisions."},
        {"Specificity", "Each theme is concrete and not overly general."},
        {"Condition Relevance", "The theme clearly relates to the target condition."},
        {"Segment Focus",
         "The theme captures the perspective of the specified participant group."},
        {"Clarity", "The theme is easily understandable."},
        {"Plausibility", "The theme is thematically consistent and reasonable for this topic."},
        {"Overall Quality", "The theme demonstrates high conceptual and linguistic quality."},
    });
}

std::string CriteriaSet::as_tagged_block() const {
    std::ostringstream out;
    out << "<criteria>\n";
    for (const auto& c : criteria_) out << c.name << ": " << c.definition << "\n";
    out << "</criteria>";
    return out.str();
}

std::string CriteriaSet::names_csv() const {
    std::string out;
    for (const auto& c : criteria_) {
        if (!out.empty()) out += ", ";
        out += c.name;
    }
    return out;
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
    for (const auto& name : required_placeholders)
        if (!values.count(name))
            throw Error("template " + template_id + ": unbound placeholder {" + name + "}");

    // single pass, so braces inside substituted values are inert
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            auto close = body.find('}', i);
            if (close != std::string::npos) {
                const std::string name = body.substr(i + 1, close - i - 1);
                auto it = values.find(name);
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
                if (required_placeholders.count(name))
                    throw Error("template " + template_id + ": unbound placeholder {" + name + "}");
            }
        }
        out += body[i++];
    }
    return out;
}

namespace {

std::map<std::string, std::string> builtin_bodies() {
    std::map<std::string, std::string> t;

    t["generation_system"] =
        "{persona}\n\n"
        "Work through the analysis as an explicit chain of thought, phase by phase: first "
        "familiarize yourself with the material, then derive initial codes, then search for "
        "candidate themes, review them against the data, define and name each one, and only "
        "then write the final output.\n\n"
        "Every output you produce will be evaluated against the following criteria:\n"
        "{criteria_block}\n";

    t["coding_user"] =
        "Read the interview transcript below and produce initial codes.\n"
        "<transcript>\n{payload}\n</transcript>\n\n"
        "Answer with a JSON array of objects, each "
        "{\"label\": str, \"description\": str, \"quote_ids\": [str]}. Every code must cite the "
        "quote IDs of its supporting segments.";

    t["theme_generation_user"] =
        "Synthesize the consolidated codes below into themes.\n"
        "<codes>\n{payload}\n</codes>\n\n"
        "Produce exactly {theme_count} themes. Cite the supporting quote IDs for every theme.\n"
        "Answer with a JSON array of objects, each "
        "{\"title\": str, \"description\": str, \"quote_ids\": [str]}.";

    t["code_aggregation_user"] =
        "Several independent coders produced the code lists below. Consolidate them into a "
        "single list: merge duplicates, keep every distinct idea, and never cite a quote ID "
        "that does not appear in the input.\n"
        "<codes>\n{codes_json}\n</codes>\n\n"
        "Answer with a JSON array of objects, each "
        "{\"label\": str, \"description\": str, \"quote_ids\": [str]}.";

    t["theme_aggregation_user"] =
        "Several independent analysts proposed the candidate themes below. Consolidate them "
        "into a final set of exactly {theme_count} themes, merging overlapping candidates and "
        "preserving their supporting quote IDs.\n"
        "<themes>\n{candidates_json}\n</themes>\n\n"
        "Answer with a JSON array of exactly {theme_count} objects, each "
        "{\"title\": str, \"description\": str, \"quote_ids\": [str]}.";

    t["evaluation_user"] =
        "Evaluate each theme below against each criterion.\n"
        "<themes>\n{themes_json}\n</themes>\n"
        "{criteria_block}\n\n"
        "For every (theme, criterion) pair give a verdict of pass or revise with a short "
        "rationale. Answer with a JSON array of objects, each "
        "{\"theme_index\": int, \"criterion\": str, \"verdict\": \"pass\"|\"revise\", "
        "\"rationale\": str}.";

    t["refinement_user"] =
        "Revise each theme below in place. Keep the same number of themes, keep every theme's "
        "supporting quote-ID citations, and improve wording or focus where the critique asks "
        "for it.\n"
        "Themes under revision: {theme_titles}\n"
        "<themes>\n{themes_json}\n</themes>\n"
        "{critique_section}"
        "Answer with a JSON array of the same length, each object "
        "{\"title\": str, \"description\": str, \"quote_ids\": [str]}.";

    t["paraphrase_user"] =
        "Produce exactly {count} paraphrases of the text below. Each must preserve the meaning, "
        "and all of them must be pairwise distinct.\n"
        "<text>{text}</text>\n"
        "Answer with a JSON array of {count} strings.";

    t["judge_system"] =
        "{persona}\n"
        "You will see two candidate outputs labelled A and B. Decide which better satisfies "
        "the criterion. Answer with the single token A or B and nothing else.";

    t["judge_user"] =
        "Criterion: {criterion}\n\n"
        "A:\n{first}\n\n"
        "B:\n{second}\n\n"
        "Which is better? Answer with the single token A or B.";

    t["credibility_user"] =
        "A theme cites an interview quote as supporting evidence. Decide whether the quote is "
        "consistent with the theme.\n"
        "Theme: {theme_text}\n"
        "Quote (with surrounding context):\n{quote_context}\n\n"
        "Answer with the single word CONSISTENT or INCONSISTENT.";

    return t;
}

std::set<std::string> scan_placeholders(const std::string& body) {
    static const std::regex re(R"(\{([a-z_]+)\})");
    std::set<std::string> names;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), re);
         it != std::sregex_iterator(); ++it)
        names.insert((*it)[1].str());
    return names;
}

}  // namespace

PromptLibrary::PromptLibrary() {
    for (auto& [id, body] : builtin_bodies())
        templates_[id] = PromptTemplate{id, body, scan_placeholders(body)};
}

PromptLibrary::PromptLibrary(const std::string& template_directory) : PromptLibrary() {
    if (template_directory.empty()) return;
    if (!fs::is_directory(template_directory))
        throw ConfigError("template directory not found: " + template_directory);
    for (const auto& entry : fs::directory_iterator(template_directory)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string id = entry.path().stem().string();
        templates_[id] = PromptTemplate{id, buf.str(), scan_placeholders(buf.str())};
    }
}

const PromptTemplate& PromptLibrary::get(const std::string& template_id) const {
    auto it = templates_.find(template_id);
    if (it == templates_.end()) throw Error("unknown prompt template: " + template_id);
    return it->second;
}

std::vector<ChatMessage> render_generation_prompt(const PromptLibrary& lib, GenerationStage stage,
                                                  const RoleIdentity& identity,
                                                  const CriteriaSet& criteria,
                                                  const std::string& payload, int theme_count) {
    if (trim_copy(payload).empty()) throw Error("generation prompt: empty payload");
    if (identity.persona_text.empty()) throw Error("generation prompt: empty persona");
    if (stage == GenerationStage::theme_generation && theme_count < 1)
        throw Error("generation prompt: theme_count must be >= 1");

    const std::string system = lib.get("generation_system")
                                   .render({{"persona", identity.persona_text},
                                            {"criteria_block", criteria.as_tagged_block()}});
    std::string user;
    if (stage == GenerationStage::coding) {
        user = lib.get("coding_user").render({{"payload", payload}});
    } else {
        user = lib.get("theme_generation_user")
                   .render({{"payload", payload},
                            {"theme_count", std::to_string(theme_count)}});
    }
    return {{"system", system}, {"user", user}};
}

std::vector<ChatMessage> render_code_aggregation_prompt(const PromptLibrary& lib,
                                                        const std::string& codes_json) {
    const auto researcher = RoleIdentity::builtin(Role::qualitative_researcher);
    return {{"system", researcher.persona_text},
            {"user", lib.get("code_aggregation_user").render({{"codes_json", codes_json}})}};
}

std::vector<ChatMessage> render_theme_aggregation_prompt(const PromptLibrary& lib,
                                                         const std::string& candidates_json,
                                                         int target_count) {
    const auto researcher = RoleIdentity::builtin(Role::qualitative_researcher);
    return {{"system", researcher.persona_text},
            {"user", lib.get("theme_aggregation_user")
                         .render({{"candidates_json", candidates_json},
                                  {"theme_count", std::to_string(target_count)}})}};
}

std::vector<ChatMessage> render_evaluation_prompt(const PromptLibrary& lib,
                                                  const std::string& themes_json,
                                                  const CriteriaSet& criteria) {
    const auto judge = RoleIdentity::builtin(Role::qualitative_researcher);
    return {{"system", judge.persona_text},
            {"user", lib.get("evaluation_user")
                         .render({{"themes_json", themes_json},
                                  {"criteria_block", criteria.as_tagged_block()}})}};
}

std::vector<ChatMessage> render_refinement_prompt(const PromptLibrary& lib,
                                                  const std::string& themes_json,
                                                  const std::vector<std::string>& theme_titles,
                                                  const std::string& critique) {
    if (theme_titles.empty()) throw Error("refinement prompt: no themes");
    std::string titles;
    for (const auto& t : theme_titles) {
        if (!titles.empty()) titles += "; ";
        titles += t;
    }
    std::string critique_section;
    if (!trim_copy(critique).empty())
        critique_section = "Critique to address:\n" + critique + "\n\n";
    const auto researcher = RoleIdentity::builtin(Role::qualitative_researcher);
    return {{"system", researcher.persona_text},
            {"user", lib.get("refinement_user")
                         .render({{"themes_json", themes_json},
                                  {"theme_titles", titles},
                                  {"critique_section", critique_section}})}};
}

std::vector<ChatMessage> render_paraphrase_prompt(const PromptLibrary& lib,
                                                  const std::string& text, int count) {
    if (count < 1) throw Error("paraphrase prompt: count must be >= 1");
    return {{"user", lib.get("paraphrase_user")
                         .render({{"text", text}, {"count", std::to_string(count)}})}};
}

std::vector<ChatMessage> render_credibility_prompt(const PromptLibrary& lib,
                                                   const std::string& theme_text,
                                                   const std::string& quote_context) {
    return {{"user", lib.get("credibility_user")
                         .render({{"theme_text", theme_text},
                                  {"quote_context", quote_context}})}};
}

JudgePrompt render_judge_prompt(const PromptLibrary& lib, const std::string& theme_a,
                                const std::string& theme_b, const std::string& criterion,
                                long order_seed) {
    if (trim_copy(theme_a).empty() || trim_copy(theme_b).empty())
        throw Error("judge prompt: both candidates must be non-empty");
    JudgePrompt out;
    out.swapped = (order_seed & 1L) != 0;
    const std::string& first = out.swapped ? theme_b : theme_a;
    const std::string& second = out.swapped ? theme_a : theme_b;
    const auto judge = RoleIdentity::builtin(Role::judge);
    out.messages = {{"system", lib.get("judge_system").render({{"persona", judge.persona_text}})},
                    {"user", lib.get("judge_user")
                                 .render({{"criterion", criterion},
                                          {"first", first},
                                          {"second", second}})}};
    return out;
}

bool verdict_is_a_win(const std::string& verdict, bool swapped) {
    const std::string v = trim_copy(verdict);
    if (v != "A" && v != "B") throw ParseError("judge verdict must be the single token A or B");
    const bool first_won = (v == "A");
    return swapped ? !first_won : first_won;
}

}  // namespace sftta
