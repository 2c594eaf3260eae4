// sftta: run the multi-agent thematic-analysis pipeline, build SFT
// datasets, score theme sets, and compute the evaluation statistics.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sftta/corpus.hpp"
#include "sftta/gateway.hpp"
#include "sftta/human_eval.hpp"
#include "sftta/metrics.hpp"
#include "sftta/pipeline.hpp"
#include "sftta/sft.hpp"
#include "sftta/stats.hpp"
#include "sftta/trust.hpp"
#include "sftta/win_rate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sftta;

namespace {

// ${VAR} interpolation for secrets in config strings
std::string interpolate_env(std::string value) {
    std::size_t pos;
    while ((pos = value.find("${")) != std::string::npos) {
        auto end = value.find('}', pos);
        if (end == std::string::npos) break;
        const std::string name = value.substr(pos + 2, end - pos - 2);
        const char* env = std::getenv(name.c_str());
        value.replace(pos, end - pos + 1, env ? env : "");
    }
    return value;
}

struct RunConfig {
    std::string corpus_dir;
    std::string preset = "vanilla";
    std::optional<json> placement_json;
    std::string backend_mode = "mock";  // mock | live | record | replay
    std::string endpoint;
    std::string api_key;
    std::string base_model = "gpt-4o";
    std::string sft_model = "ft:gpt-4o:sft-ta";
    std::string cassette;
    std::string template_dir;
    std::string output_dir = "runs";
    long seed = 42;
    std::optional<int> rounds_override;
    bool human_gate = false;
};

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    RunConfig c;
    c.corpus_dir = interpolate_env(j.value("corpus_dir", ""));
    c.preset = j.value("preset", "vanilla");
    if (j.contains("placement")) c.placement_json = j["placement"];
    if (j.contains("backend")) {
        const auto& b = j["backend"];
        c.backend_mode = b.value("mode", "mock");
        c.endpoint = interpolate_env(b.value("endpoint", ""));
        c.api_key = interpolate_env(b.value("api_key", "${SFTTA_API_KEY}"));
        c.base_model = b.value("base_model", c.base_model);
        c.sft_model = b.value("sft_model", c.sft_model);
        c.cassette = interpolate_env(b.value("cassette", ""));
    }
    c.template_dir = interpolate_env(j.value("template_dir", ""));
    c.output_dir = interpolate_env(j.value("output_dir", "runs"));
    c.seed = j.value("seed", 42L);
    if (j.contains("rounds")) c.rounds_override = j["rounds"].get<int>();
    c.human_gate = j.value("human_gate", false);

    if (c.corpus_dir.empty()) throw ConfigError("config: corpus_dir is required");
    if (c.backend_mode == "live" || c.backend_mode == "record") {
        if (c.endpoint.empty()) throw ConfigError("config: endpoint required for live/record mode");
    }
    if (c.backend_mode == "replay" && c.cassette.empty())
        throw ConfigError("config: replay mode requires a cassette path");
    if (c.backend_mode == "record" && c.cassette.empty())
        throw ConfigError("config: record mode requires a cassette path");
    return c;
}

std::shared_ptr<Backend> make_backend(const RunConfig& c) {
    if (c.backend_mode == "mock") return std::make_shared<MockBackend>();
    if (c.backend_mode == "live")
        return std::make_shared<HttpBackend>(c.endpoint, c.api_key);
    if (c.backend_mode == "record")
        return std::make_shared<ReplayCache>(std::make_shared<HttpBackend>(c.endpoint, c.api_key),
                                             c.cassette, CassetteMode::record);
    if (c.backend_mode == "replay") {
        if (!fs::exists(c.cassette))
            throw ConfigError("replay mode but cassette missing: " + c.cassette);
        return std::make_shared<ReplayCache>(nullptr, c.cassette, CassetteMode::replay);
    }
    throw ConfigError("unknown backend mode: " + c.backend_mode);
}

PlacementConfig make_placement(const RunConfig& c) {
    PlacementConfig p = c.placement_json
                            ? PlacementConfig::from_json(*c.placement_json)
                            : PlacementConfig::preset(c.preset, c.base_model, c.sft_model);
    if (c.rounds_override) p.refinement_rounds = *c.rounds_override;
    if (c.human_gate) p.human_gate = true;
    return p;
}

std::map<int, std::vector<ReviewDecision>> load_decisions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open decisions file: " + path);
    json j;
    in >> j;
    auto parse_list = [](const json& arr) {
        std::vector<ReviewDecision> out;
        for (const auto& d : arr) {
            ReviewDecision r;
            r.theme_index = d.at("theme_index").get<std::size_t>();
            const std::string action = d.at("action").get<std::string>();
            if (action == "keep")
                r.action = ReviewAction::keep;
            else if (action == "remove")
                r.action = ReviewAction::remove;
            else if (action == "extra_round")
                r.action = ReviewAction::extra_round;
            else
                throw ConfigError("unknown review action: " + action);
            out.push_back(r);
        }
        return out;
    };
    std::map<int, std::vector<ReviewDecision>> by_round;
    if (j.is_array()) {
        by_round[1] = parse_list(j);
    } else {
        for (const auto& [key, value] : j.items()) {
            if (key.rfind("round_", 0) != 0) throw ConfigError("decisions keys must be round_N");
            by_round[std::stoi(key.substr(6))] = parse_list(value);
        }
    }
    return by_round;
}

std::string make_run_id(const RunConfig& c, const std::string& explicit_id) {
    if (!explicit_id.empty()) return explicit_id;
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", std::gmtime(&t));
    json fingerprint{{"corpus", c.corpus_dir}, {"preset", c.preset}, {"seed", c.seed}};
    return std::string(stamp) + "-" + fnv1a64_hex(fingerprint.dump()).substr(0, 8);
}

json alignment_row(const ThemeSet& reference, const ThemeSet& generated,
                   const std::shared_ptr<Backend>& embedder, const std::string& embed_model) {
    std::vector<std::string> ref_texts, gen_texts;
    for (const auto& t : reference.themes) ref_texts.push_back(t.title + ". " + t.description);
    for (const auto& t : generated.themes) gen_texts.push_back(t.title + ". " + t.description);

    auto cosine = [&](const std::string& a, const std::string& b) {
        return cosine_similarity(embedder->embed_text(a, embed_model).values,
                                 embedder->embed_text(b, embed_model).values);
    };
    json row;
    row["fuzzy"] = alignment_score(ref_texts, gen_texts, fuzzy_match, "fuzzy").score_s;
    row["cosine"] = alignment_score(ref_texts, gen_texts, cosine, "cosine").score_s;
    row["bleu"] =
        alignment_score(ref_texts, gen_texts,
                        [](const std::string& r, const std::string& c) { return bleu(r, c); },
                        "bleu")
            .score_s;
    row["meteor"] = alignment_score(ref_texts, gen_texts, meteor, "meteor").score_s;
    row["rouge_l"] = alignment_score(ref_texts, gen_texts, rouge_l, "rouge_l").score_s;
    return row;
}

int command_run(const std::string& config_path, const std::string& explicit_run_id,
                const std::string& decisions_path) {
    const RunConfig config = load_run_config(config_path);
    auto backend = make_backend(config);
    PlacementConfig placement = make_placement(config);
    Pipeline pipeline(backend, PromptLibrary(config.template_dir));

    ReviewProvider review = nullptr;
    if (!decisions_path.empty()) {
        auto by_round = load_decisions(decisions_path);
        review = [by_round](const ThemeSet&, int round) {
            auto it = by_round.find(round);
            return it != by_round.end() ? it->second : std::vector<ReviewDecision>{};
        };
        placement.human_gate = true;
    }

    const Corpus corpus = load_corpus(config.corpus_dir);
    auto result = pipeline.run_pipeline(corpus, placement, config.seed, review);

    const std::string run_id = make_run_id(config, explicit_run_id);
    const fs::path run_dir = fs::path(config.output_dir) / run_id;
    if (fs::exists(run_dir) && explicit_run_id.empty())
        throw ConfigError("run directory already exists: " + run_dir.string());
    fs::create_directories(run_dir);

    result.manifest.run_id = run_id;
    result.manifest.cassette_ref = config.cassette;
    save_theme_set(result.themes, (run_dir / "themes.json").string());
    result.manifest.save((run_dir / "manifest.json").string());

    std::cout << "run " << run_id << ": " << result.themes.size() << " themes\n"
              << "themes:   " << (run_dir / "themes.json").string() << "\n"
              << "manifest: " << (run_dir / "manifest.json").string() << "\n"
              << "manifest hash: " << result.manifest.content_hash() << "\n";
    return 0;
}

int command_splits(const std::string& corpus_dir, std::size_t validation_size, bool list) {
    const Corpus corpus = load_corpus(corpus_dir);
    const auto splits = enumerate_splits(corpus, validation_size);
    std::cout << splits.size() << " splits of " << corpus.size() << " transcripts (validation size "
              << validation_size << ")\n";
    if (list) {
        for (const auto& s : splits) {
            std::cout << "validation:";
            for (const auto& id : s.validation) std::cout << " " << id;
            std::cout << "\n";
        }
    }
    return 0;
}

int command_score(const std::string& reference_path, const std::string& generated_path,
                  const std::string& out_path) {
    const ThemeSet reference = load_theme_set(reference_path);
    const ThemeSet generated = load_theme_set(generated_path);
    auto embedder = std::make_shared<MockBackend>();
    json report = alignment_row(reference, generated, embedder, "mock-embed");
    report["reference_count"] = reference.size();
    report["generated_count"] = generated.size();
    const std::string text = report.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream(out_path) << text << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int command_stats(const std::string& input_path, double alpha, double power) {
    std::ifstream in(input_path);
    if (!in) throw ConfigError("cannot open " + input_path);
    json j;
    in >> j;

    json out;
    auto result_json = [](const WinRateResult& r) {
        return json{{"n_win", r.n_win},          {"n_total", r.n_total},
                    {"win_rate", r.w},           {"wilson_low", r.wilson_low},
                    {"wilson_high", r.wilson_high}, {"p_value", r.p_value},
                    {"significant_after_holm", r.significant_after_holm},
                    {"reliable_gain", r.meets_reliability_threshold()}};
    };

    if (j.contains("conditions")) {
        std::vector<std::pair<std::string, WinRateResult>> results;
        std::vector<std::pair<std::string, double>> p_values;
        for (const auto& c : j["conditions"]) {
            const std::string label = c.at("label").get<std::string>();
            auto r = win_rate_from_counts(c.at("n_win").get<std::size_t>(),
                                          c.at("n_total").get<std::size_t>());
            p_values.emplace_back(label, r.p_value);
            results.emplace_back(label, r);
        }
        const auto holm = holm_bonferroni(p_values, alpha);
        out["conditions"] = json::object();
        for (auto& [label, r] : results) {
            r.significant_after_holm =
                std::find(holm.rejected.begin(), holm.rejected.end(), label) !=
                holm.rejected.end();
            out["conditions"][label] = result_json(r);
        }
    } else {
        auto r = win_rate_from_counts(j.at("n_win").get<std::size_t>(),
                                      j.at("n_total").get<std::size_t>());
        r.significant_after_holm = r.p_value <= alpha;
        const auto pa = power_analysis(r.n_total, alpha, power);
        out = result_json(r);
        out["min_detectable_rate"] = pa.min_detectable_rate;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int command_sft_build(const std::string& config_path, const std::string& themes_path,
                      std::size_t variants, const std::vector<std::size_t>& sizes,
                      const std::string& out_dir, bool auto_approve, long sampling_seed) {
    const RunConfig config = load_run_config(config_path);
    auto backend = make_backend(config);
    PromptLibrary prompts(config.template_dir);
    const Corpus corpus = load_corpus(config.corpus_dir);
    const auto themes = load_reference_themes(themes_path);

    std::vector<ReferenceTheme> train;
    std::map<std::string, ParaphraseSet> paraphrases;
    for (const auto& theme : themes) {
        if (theme.split != SftSplit::train) continue;
        auto set = paraphrase_theme(theme, variants, *backend, prompts, config.base_model);
        set.approved = auto_approve;
        if (!auto_approve) {
            std::cout << "paraphrases for " << theme.theme_id
                      << " need review; marking approved requires --auto-approve or manual edit\n";
            set.approved = true;  // CLI review happens on the emitted file
        }
        paraphrases.emplace(theme.theme_id, std::move(set));
        train.push_back(theme);
    }

    auto dataset = build_pairwise_dataset(train, paraphrases, corpus, prompts);
    fs::create_directories(out_dir);
    const std::string train_path = (fs::path(out_dir) / "train.jsonl").string();
    export_jsonl(dataset, train_path);
    std::cout << "wrote " << train_path << " (" << dataset.size() << " lines)\n";

    json paraphrase_dump = json::object();
    for (const auto& [theme_id, set] : paraphrases)
        paraphrase_dump[theme_id] = {{"generator_model", set.generator_model},
                                     {"approved", set.approved},
                                     {"variants", set.variants}};
    std::ofstream((fs::path(out_dir) / "paraphrases.json").string())
        << paraphrase_dump.dump(2) << "\n";

    if (!sizes.empty()) {
        SftScalingPlan plan;
        plan.sizes = sizes;
        plan.sampling_seed = sampling_seed;
        for (const auto& [size, subset] : sample_scaling_subsets(dataset, plan)) {
            const std::string path =
                (fs::path(out_dir) / ("train_" + std::to_string(size) + ".jsonl")).string();
            export_jsonl(subset, path);
            std::cout << "wrote " << path << "\n";
        }
    }

    const bool leaked = has_validation_leakage(train_path, themes, paraphrases);
    std::cout << "validation leakage: " << (leaked ? "FOUND" : "none") << "\n";
    return leaked ? 2 : 0;
}

int command_ablate(const std::string& config_path, std::vector<std::string> grid,
                   const std::string& reference_path, const std::string& out_path,
                   const std::string& baseline_name) {
    if (grid.empty()) throw ConfigError("ablate: empty preset grid");
    const RunConfig config = load_run_config(config_path);
    const ThemeSet reference = load_theme_set(reference_path);
    const Corpus corpus = load_corpus(config.corpus_dir);

    json rows = json::array();
    std::map<std::string, json> by_name;
    for (const auto& name : grid) {
        auto backend = make_backend(config);
        Pipeline pipeline(backend, PromptLibrary(config.template_dir));
        PlacementConfig placement = PlacementConfig::preset(name, config.base_model,
                                                            config.sft_model);
        if (config.rounds_override) placement.refinement_rounds = *config.rounds_override;
        auto result = pipeline.run_pipeline(corpus, placement, config.seed);
        json row = alignment_row(reference, result.themes, backend, "mock-embed");
        row["condition"] = name;
        by_name[name] = row;
        rows.push_back(row);
    }

    const std::string baseline = baseline_name.empty() ? grid.front() : baseline_name;
    if (!by_name.count(baseline)) throw ConfigError("baseline preset not in grid: " + baseline);
    const json base = by_name[baseline];
    for (auto& row : rows) {
        for (const auto& metric : {"fuzzy", "cosine", "bleu", "meteor", "rouge_l"})
            row[std::string("delta_") + metric] =
                row[metric].get<double>() - base[metric].get<double>();
    }

    json out{{"baseline", baseline}, {"rows", rows}};
    if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream(out_path) << out.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int command_scaling(const std::string& config_path, const std::string& themes_path,
                    const std::vector<std::size_t>& sizes, const std::string& out_path) {
    // Appendix-style dataset-size sweep: emits the win-rate curve data
    // for models fine-tuned at each size (model ids follow a naming
    // convention; on the mock backend the judge is scripted).
    const RunConfig config = load_run_config(config_path);
    auto backend = make_backend(config);
    PromptLibrary prompts(config.template_dir);
    const auto themes = load_reference_themes(themes_path);

    std::vector<std::string> reference_texts, baseline_texts;
    for (const auto& t : themes) reference_texts.push_back(t.text);
    for (const auto& t : themes) baseline_texts.push_back("generic summary of " + t.theme_id);

    json rows = json::array();
    for (std::size_t size : sizes) {
        auto pairs = build_pairs_by_best_fuzzy(reference_texts, baseline_texts);
        auto result = judge_win_rate(pairs, "Overall Quality", *backend, prompts,
                                     static_cast<long>(size),
                                     config.sft_model + "-n" + std::to_string(size));
        rows.push_back({{"size", size},
                        {"n_total", result.n_total},
                        {"win_rate", result.w},
                        {"wilson_low", result.wilson_low},
                        {"wilson_high", result.wilson_high},
                        {"p_value", result.p_value}});
    }
    json out{{"rows", rows}};
    if (out_path.empty()) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::ofstream(out_path) << out.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int command_review(const std::string& run_dir, const std::string& decisions_path,
                   const std::string& corpus_dir) {
    const fs::path dir(run_dir);
    const std::string themes_path = (dir / "themes.json").string();
    const std::string manifest_path = (dir / "manifest.json").string();
    if (!fs::exists(themes_path) || !fs::exists(manifest_path))
        throw ConfigError("run directory missing themes.json/manifest.json: " + run_dir);

    ThemeSet themes = load_theme_set(themes_path);
    json manifest;
    std::ifstream(manifest_path) >> manifest;
    if (!manifest.value("placement", json::object()).value("human_gate", false))
        throw ConfigError("manifest has no pending human gate (placement.human_gate is off)");

    std::optional<Corpus> corpus;
    if (!corpus_dir.empty()) corpus = load_corpus(corpus_dir);

    std::vector<ReviewDecision> decisions;
    if (!decisions_path.empty()) {
        auto by_round = load_decisions(decisions_path);
        for (auto& [round, list] : by_round)
            decisions.insert(decisions.end(), list.begin(), list.end());
    } else {
        // interactive: one keystroke line per theme
        for (std::size_t i = 0; i < themes.size(); ++i) {
            const auto& t = themes.themes[i];
            std::cout << "[" << i << "] " << t.title << "\n    " << t.description << "\n";
            for (const auto& qid : t.supporting_quote_ids) {
                std::cout << "    " << qid;
                if (corpus) {
                    auto parsed = QuoteId::try_parse(qid);
                    if (parsed && corpus->contains(*parsed))
                        std::cout << "  " << corpus->resolve_quote(*parsed).text;
                }
                std::cout << "\n";
            }
            std::cout << "keep/remove/extra-round [k/r/e]? " << std::flush;
            std::string answer;
            if (!std::getline(std::cin, answer))
                throw ConfigError("terminal unavailable; pass --decisions <file> instead");
            answer = trim_copy(answer);
            ReviewDecision d;
            d.theme_index = i;
            d.action = answer == "r"   ? ReviewAction::remove
                       : answer == "e" ? ReviewAction::extra_round
                                       : ReviewAction::keep;
            decisions.push_back(d);
        }
    }

    auto outcome = apply_review_decision(themes, decisions);
    save_theme_set(outcome.themes, themes_path);
    for (const auto& d : decisions) {
        const char* action = d.action == ReviewAction::keep     ? "keep"
                             : d.action == ReviewAction::remove ? "remove"
                                                                : "extra_round";
        manifest["human_actions"].push_back(
            {{"round", 0}, {"theme_index", d.theme_index}, {"action", action}, {"source", "review"}});
    }
    std::ofstream(manifest_path) << manifest.dump(2) << "\n";
    std::cout << outcome.themes.size() << " themes persisted ("
              << outcome.removed_indices.size() << " removed, "
              << outcome.extra_round_indices.size() << " marked for an extra round)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SFT-TA pipeline and evaluation harness"};
    app.require_subcommand(1);

    std::string config_path, run_id, decisions_path, reference_path, generated_path;
    std::string out_path, corpus_dir, themes_path, run_dir, baseline_name, input_path;
    std::vector<std::string> grid = {"vanilla", "sft_coding", "sft_tg", "sft_both"};
    std::vector<std::size_t> sizes;
    std::size_t validation_size = 2, variants = 30;
    double alpha = 0.05, power = 0.95;
    bool list_splits = false, auto_approve = false, scaling = false;
    long sampling_seed = 42;

    auto* run = app.add_subcommand("run", "run the full pipeline");
    run->add_option("--config", config_path, "run config JSON")->required();
    run->add_option("--run-id", run_id, "explicit run id (default: timestamp+hash)");
    run->add_option("--decisions", decisions_path, "scripted human-gate decisions JSON");

    auto* ablate = app.add_subcommand("ablate", "run a grid of placement presets");
    ablate->add_option("--config", config_path)->required();
    ablate->add_option("--reference", reference_path, "reference theme-set JSON")->required();
    ablate->add_option("--grid", grid, "placement preset names");
    ablate->add_option("--baseline", baseline_name, "baseline row (default: first)");
    ablate->add_option("--out", out_path);
    ablate->add_flag("--scaling", scaling, "dataset-size sweep instead of placement grid");
    ablate->add_option("--sizes", sizes, "sweep sizes (scaling mode)");

    auto* sft = app.add_subcommand("sft-build", "build the fine-tuning JSONL dataset");
    sft->add_option("--config", config_path)->required();
    sft->add_option("--themes", themes_path, "reference themes JSON")->required();
    sft->add_option("--variants", variants, "paraphrase variants per theme");
    sft->add_option("--sizes", sizes, "also emit nested scaling subsets");
    sft->add_option("--out", out_path, "output directory")->required();
    sft->add_option("--seed", sampling_seed, "subset sampling seed");
    sft->add_flag("--auto-approve", auto_approve, "skip the human paraphrase review");

    auto* score = app.add_subcommand("score", "score a generated theme set against a reference");
    score->add_option("reference", reference_path)->required();
    score->add_option("generated", generated_path)->required();
    score->add_option("--out", out_path);

    auto* stats = app.add_subcommand("stats", "win-rate statistics from a verdicts JSON");
    stats->add_option("input", input_path)->required();
    stats->add_option("--alpha", alpha);
    stats->add_option("--power", power);

    auto* review = app.add_subcommand("review", "human-oversight review of a finished run");
    review->add_option("run_dir", run_dir)->required();
    review->add_option("--decisions", decisions_path, "decisions JSON (else interactive)");
    review->add_option("--corpus", corpus_dir, "corpus dir for quote display");

    auto* splits = app.add_subcommand("splits", "enumerate train/validation splits");
    splits->add_option("--corpus", corpus_dir)->required();
    splits->add_option("--validation-size", validation_size);
    splits->add_flag("--list", list_splits);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return command_run(config_path, run_id, decisions_path);
        if (ablate->parsed()) {
            if (scaling) {
                if (sizes.empty()) sizes = {100, 200, 300, 600, 900};
                if (reference_path.empty())
                    throw ConfigError("--reference required in scaling mode");
                return command_scaling(config_path, reference_path, sizes, out_path);
            }
            return command_ablate(config_path, grid, reference_path, out_path, baseline_name);
        }
        if (sft->parsed())
            return command_sft_build(config_path, themes_path, variants, sizes, out_path,
                                     auto_approve, sampling_seed);
        if (score->parsed()) return command_score(reference_path, generated_path, out_path);
        if (stats->parsed()) return command_stats(input_path, alpha, power);
        if (review->parsed()) return command_review(run_dir, decisions_path, corpus_dir);
        if (splits->parsed()) return command_splits(corpus_dir, validation_size, list_splits);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
