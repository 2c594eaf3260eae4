#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sftta/gateway.hpp"

namespace sftta {

enum class Role { qualitative_researcher, layperson, sft_agent, judge };

std::string role_name(Role role);

struct RoleIdentity {
    Role role = Role::qualitative_researcher;
    std::string persona_text;  // non-empty

    static RoleIdentity builtin(Role role);
};

struct Criterion {
    std::string name;
    std::string definition;
};

class CriteriaSet {
public:
    CriteriaSet() = default;
    explicit CriteriaSet(std::vector<Criterion> criteria);  // names must be unique

    /// The eight theme-quality criteria used throughout the pipeline.
    static CriteriaSet default_eight();

    const std::vector<Criterion>& criteria() const { return criteria_; }
    std::size_t size() const { return criteria_.size(); }

    std::string as_tagged_block() const;  // <criteria> name: definition ... </criteria>
    std::string names_csv() const;

private:
    std::vector<Criterion> criteria_;
};

struct PromptTemplate {
    std::string template_id;
    std::string body;  // text with {placeholder} markers
    std::set<std::string> required_placeholders;

    /// Substitute all placeholders; throws on any unbound marker.
    std::string render(const std::map<std::string, std::string>& values) const;
};

/// Holds every template body; defaults are compiled in and any file in
/// the template directory with the matching id overrides them.
class PromptLibrary {
public:
    PromptLibrary();
    explicit PromptLibrary(const std::string& template_directory);

    const PromptTemplate& get(const std::string& template_id) const;

private:
    std::map<std::string, PromptTemplate> templates_;
};

enum class GenerationStage { coding, theme_generation };

std::vector<ChatMessage> render_generation_prompt(const PromptLibrary& lib, GenerationStage stage,
                                                  const RoleIdentity& identity,
                                                  const CriteriaSet& criteria,
                                                  const std::string& payload, int theme_count);

std::vector<ChatMessage> render_code_aggregation_prompt(const PromptLibrary& lib,
                                                        const std::string& codes_json);

std::vector<ChatMessage> render_theme_aggregation_prompt(const PromptLibrary& lib,
                                                         const std::string& candidates_json,
                                                         int target_count);

std::vector<ChatMessage> render_evaluation_prompt(const PromptLibrary& lib,
                                                  const std::string& themes_json,
                                                  const CriteriaSet& criteria);

std::vector<ChatMessage> render_refinement_prompt(const PromptLibrary& lib,
                                                  const std::string& themes_json,
                                                  const std::vector<std::string>& theme_titles,
                                                  const std::string& critique);

std::vector<ChatMessage> render_paraphrase_prompt(const PromptLibrary& lib,
                                                  const std::string& text, int count);

std::vector<ChatMessage> render_credibility_prompt(const PromptLibrary& lib,
                                                   const std::string& theme_text,
                                                   const std::string& quote_context);

struct JudgePrompt {
    std::vector<ChatMessage> messages;
    bool swapped = false;  // true when (b, a) order was presented
};

/// A/B order decided by the parity of order_seed (even keeps (a, b)),
/// so experiments replay exactly.
JudgePrompt render_judge_prompt(const PromptLibrary& lib, const std::string& theme_a,
                                const std::string& theme_b, const std::string& criterion,
                                long order_seed);

/// Map a presented-order verdict back to the caller's (a, b) order.
/// `verdict` must be "A" or "B".
bool verdict_is_a_win(const std::string& verdict, bool swapped);

}  // namespace sftta
