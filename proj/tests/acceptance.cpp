// Acceptance suite: one pass/fail line per criterion, exit 0 only when
// every criterion holds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "sftta/corpus.hpp"
#include "sftta/gateway.hpp"
#include "sftta/human_eval.hpp"
#include "sftta/metrics.hpp"
#include "sftta/pipeline.hpp"
#include "sftta/sft.hpp"
#include "sftta/stats.hpp"
#include "sftta/trust.hpp"

namespace fs = std::filesystem;
using namespace sftta;

namespace {

const std::string kCorpusDir = std::string(SFTTA_SOURCE_DIR) + "/data/corpus";
const std::string kThemesPath = std::string(SFTTA_SOURCE_DIR) + "/data/reference_themes.json";

struct Runner {
    int failures = 0;

    void criterion(int number, const std::string& label,
                   const std::function<void(std::vector<std::string>&)>& body) {
        std::vector<std::string> problems;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(problems);
        } catch (const std::exception& e) {
            problems.push_back(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (problems.empty()) {
            std::printf("PASS  criterion %d: %s (%.2fs)\n", number, label.c_str(), seconds);
        } else {
            ++failures;
            std::printf("FAIL  criterion %d: %s (%.2fs)\n", number, label.c_str(), seconds);
            for (const auto& p : problems) std::printf("      - %s\n", p.c_str());
        }
    }
};

void expect(std::vector<std::string>& problems, bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
}

void expect_near(std::vector<std::string>& problems, double got, double want, double tol,
                 const std::string& what) {
    if (std::abs(got - want) > tol) {
        std::ostringstream msg;
        msg << what << ": got " << got << ", want " << want << " within " << tol;
        problems.push_back(msg.str());
    }
}

double round3(double v) { return std::floor(v * 1000.0 + 0.5) / 1000.0; }

double elapsed(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
    Runner runner;

    runner.criterion(1, "metric oracle suite", [](std::vector<std::string>& problems) {
        const auto start = std::chrono::steady_clock::now();
        expect_near(problems, fuzzy_match("kitten", "sitting"), 1.0 - 3.0 / 7.0, 1e-9,
                    "fuzzy(kitten,sitting)");
        expect_near(problems, bleu("a b c d", "a b c d e"), std::pow(0.2, 0.25), 1e-6,
                    "bleu hand-derived case");
        expect_near(problems, meteor("a b c", "a b c"), 1.0 - 0.5 / 27.0, 1e-6,
                    "meteor identical 3 tokens");
        expect_near(problems, meteor("managing stress", "handling stress"), 0.25, 1e-6,
                    "meteor partial match");
        expect_near(problems, rouge_l("challenges following diagnosis",
                                      "struggles after diagnosis"),
                    1.0 / 3.0, 1e-6, "rouge_l hand-derived case");
        expect_near(problems, rouge_l("a b c", "a b c"), 1.0, 1e-9, "rouge_l identity");
        expect(problems, elapsed(start) < 1.0, "metric suite exceeded 1 s");
    });

    runner.criterion(2, "alignment score", [](std::vector<std::string>& problems) {
        std::vector<std::string> h, g;
        for (int i = 0; i < 12; ++i) h.push_back("theme about topic " + std::to_string(i));
        g = h;
        std::shuffle(g.begin(), g.end(), std::mt19937(3));
        const auto report = alignment_score(h, g, fuzzy_match, "fuzzy");
        std::size_t cells = 0;
        for (const auto& row : report.pairwise) cells += row.size();
        expect(problems, cells == 144, "12x12 alignment must compute exactly 144 values");
        expect_near(problems, report.score_s, 1.0, 1e-12, "S on a permutation of H");

        std::mt19937 rng(42);
        std::uniform_real_distribution<double> val(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<std::vector<double>> m(5, std::vector<double>(7));
            for (auto& row : m)
                for (auto& x : row) x = val(rng);
            std::vector<std::string> refs, gens;
            for (int i = 0; i < 5; ++i) refs.push_back("r" + std::to_string(i));
            for (int j = 0; j < 7; ++j) gens.push_back("g" + std::to_string(j));
            auto metric = [&m](const std::string& r, const std::string& gen) {
                return m[std::stoul(r.substr(1))][std::stoul(gen.substr(1))];
            };
            double oracle = 0.0;
            for (const auto& row : m) oracle += *std::max_element(row.begin(), row.end());
            oracle /= m.size();
            if (std::abs(alignment_score(refs, gens, metric).score_s - oracle) > 1e-12) {
                problems.push_back("row-max oracle mismatch in trial " + std::to_string(trial));
                break;
            }
        }
    });

    runner.criterion(3, "dependability and transferability", [](std::vector<std::string>& problems) {
        ThemeSet fixed;
        fixed.themes.push_back({"care coordination", "", {}, {}});
        const auto identical = dependability({fixed, fixed, fixed});
        expect_near(problems, identical.score_d, 1.0, 0.0, "D of identical runs");

        ThemeSet run_a, run_b;
        run_a.themes.push_back({"a b c", "", {}, {}});
        run_b.themes.push_back({"c b d", "", {}, {}});
        const auto pair = dependability({run_a, run_b}).run_pair_scores.at(0);
        expect(problems, pair.r1 == 2.0 / 3.0, "fixture R1 must equal 2/3 exactly");
        expect(problems, pair.r2 == 0.0, "fixture R2 must equal 0 exactly");
        expect(problems, pair.d_pair == 1.0 / 3.0, "fixture D must equal 1/3 exactly");

        const Corpus corpus = load_corpus(kCorpusDir);
        expect(problems, enumerate_splits(corpus, 2).size() == 36,
               "enumerate_splits(9,2) must yield 36 splits");
    });

    runner.criterion(4, "statistics stack", [](std::vector<std::string>& problems) {
        const auto start = std::chrono::steady_clock::now();
        const auto w = wilson_interval(0.5, 100);
        expect_near(problems, w.low, 0.4038, 5e-4, "Wilson lower bound");
        expect_near(problems, w.high, 0.5962, 5e-4, "Wilson upper bound");

        expect(problems, binomial_test_one_sided(8, 10) == 56.0 / 1024.0,
               "binomial(8,10) must equal 56/1024 exactly");

        const auto holm = holm_bonferroni({{"p=0.01", 0.01}, {"p=0.03", 0.03}, {"p=0.04", 0.04}});
        expect(problems, holm.rejected == std::vector<std::string>{"p=0.01"},
               "Holm fixture must reject exactly the 0.01 hypothesis");

        const double rate = min_detectable_rate(100, 0.05, 0.95);
        expect(problems, rate >= 0.68 && rate <= 0.72,
               "min_detectable_rate(100,.05,.95) outside [0.68,0.72]: " + std::to_string(rate));
        expect(problems, elapsed(start) < 5.0, "statistics suite exceeded 5 s");
    });

    runner.criterion(5, "pipeline determinism on the synthetic corpus",
                     [](std::vector<std::string>& problems) {
        const auto start = std::chrono::steady_clock::now();
        const Corpus corpus = load_corpus(kCorpusDir);
        const auto placement = PlacementConfig::preset("vanilla", "base-model", "sft-model");

        Pipeline p1(std::make_shared<MockBackend>(), PromptLibrary());
        Pipeline p2(std::make_shared<MockBackend>(), PromptLibrary());
        const auto r1 = p1.run_pipeline(corpus, placement, 7);
        const auto r2 = p2.run_pipeline(corpus, placement, 7);

        expect(problems, r1.themes.size() == 12,
               "pipeline must emit exactly 12 themes, got " + std::to_string(r1.themes.size()));
        for (const auto& t : r1.themes.themes) {
            for (const auto& qid : t.supporting_quote_ids) {
                auto parsed = QuoteId::try_parse(qid);
                if (!parsed || !corpus.contains(*parsed)) {
                    problems.push_back("unresolvable cited quote id: " + qid);
                }
            }
        }
        expect(problems, r1.manifest.content_hash() == r2.manifest.content_hash(),
               "manifest hash must be identical across same-seed runs");
        expect(problems, elapsed(start) < 10.0, "pipeline run exceeded 10 s");
    });

    runner.criterion(6, "ablation grid and delta arithmetic",
                     [](std::vector<std::string>& problems) {
        const Corpus corpus = load_corpus(kCorpusDir);
        const std::vector<std::string> grid{"vanilla", "sft_coding", "sft_tg", "sft_both"};
        std::vector<std::string> reference;
        {
            Pipeline p(std::make_shared<MockBackend>(), PromptLibrary());
            const auto base = p.run_pipeline(
                corpus, PlacementConfig::preset("vanilla", "base", "ft"), 7);
            for (const auto& t : base.themes.themes)
                reference.push_back(t.title + ". " + t.description);
        }

        std::map<std::string, double> scores;
        for (const auto& name : grid) {
            Pipeline p(std::make_shared<MockBackend>(), PromptLibrary());
            const auto result =
                p.run_pipeline(corpus, PlacementConfig::preset(name, "base", "ft"), 7);
            std::vector<std::string> generated;
            for (const auto& t : result.themes.themes)
                generated.push_back(t.title + ". " + t.description);
            scores[name] = alignment_score(reference, generated, fuzzy_match).score_s;
        }
        expect(problems, scores.size() == 4, "grid must produce 4 preset rows");
        const double baseline = scores.at("vanilla");
        expect_near(problems, baseline, 1.0, 1e-12, "baseline row scores 1.0 against itself");
        for (const auto& [name, s] : scores) {
            const double delta = s - baseline;
            expect(problems, delta <= 1e-12, "delta above the self-aligned baseline: " + name);
            expect(problems, s >= 0.0 && s <= 1.0, "score out of range for " + name);
        }

        // published delta fixtures
        expect(problems, round3(0.560 - 0.457) == 0.103, "Table 1 delta must be +.103");
        expect(problems, round_half_up_2(5.00 - 4.00) == 1.00, "coverage delta must be +1.00");
        expect(problems, round_half_up_2(4.28 - 2.80) == 1.48,
               "actionability delta must be +1.48");
    });

    runner.criterion(7, "SFT dataset builder", [](std::vector<std::string>& problems) {
        const Corpus corpus = load_corpus(kCorpusDir);
        const auto themes = load_reference_themes(kThemesPath);
        const PromptLibrary prompts;
        MockBackend backend;

        std::vector<ReferenceTheme> train;
        std::map<std::string, ParaphraseSet> paraphrases;
        for (const auto& theme : themes) {
            if (theme.split != SftSplit::train) continue;
            auto set = paraphrase_theme(theme, 30, backend, prompts, "gen");
            set.approved = true;
            paraphrases.emplace(theme.theme_id, std::move(set));
            train.push_back(theme);
        }
        expect(problems, train.size() == 10, "reference data must hold 10 train themes");

        const auto dataset = build_pairwise_dataset(train, paraphrases, corpus, prompts);
        expect(problems, dataset.size() == 300,
               "10 x 30 must yield 300 datapoints, got " + std::to_string(dataset.size()));

        const fs::path path = fs::temp_directory_path() / "sftta_acceptance.jsonl";
        export_jsonl(dataset, path.string());
        std::ifstream in(path.string());
        std::size_t lines = 0;
        for (std::string line; std::getline(in, line);) ++lines;
        expect(problems, lines == 300, "JSONL file must have exactly 300 lines");
        expect(problems, !has_validation_leakage(path.string(), themes, paraphrases),
               "validation leakage check must find zero occurrences");

        // byte-equal round trip
        const fs::path second = fs::temp_directory_path() / "sftta_acceptance2.jsonl";
        export_jsonl(import_jsonl(path.string()), second.string());
        std::ifstream f1(path.string(), std::ios::binary), f2(second.string(), std::ios::binary);
        std::stringstream b1, b2;
        b1 << f1.rdbuf();
        b2 << f2.rdbuf();
        expect(problems, b1.str() == b2.str(), "export/import must round-trip byte-equal");
        fs::remove(path);
        fs::remove(second);

        SftScalingPlan plan;
        plan.sizes = {100, 200, 300};
        const auto subsets = sample_scaling_subsets(dataset, plan);
        auto keys = [](const std::vector<SftDatapoint>& dps) {
            std::multiset<std::string> out;
            for (const auto& dp : dps) out.insert(dp.source_theme_id + "|" + dp.answer);
            return out;
        };
        const auto s100 = keys(subsets.at(100)), s200 = keys(subsets.at(200)),
                   s300 = keys(subsets.at(300));
        expect(problems, std::includes(s200.begin(), s200.end(), s100.begin(), s100.end()),
               "subset 100 must nest inside 200");
        expect(problems, std::includes(s300.begin(), s300.end(), s200.begin(), s200.end()),
               "subset 200 must nest inside 300");
        for (const auto& [size, subset] : subsets) {
            std::map<std::string, std::size_t> per_theme;
            for (const auto& dp : subset) ++per_theme[dp.source_theme_id];
            for (const auto& [id, n] : per_theme) {
                if (std::abs(static_cast<double>(n) - size / 10.0) > 1.0)
                    problems.push_back("subset " + std::to_string(size) +
                                       " not stratified for theme " + id);
            }
        }
    });

    runner.criterion(8, "property suites", [](std::vector<std::string>& problems) {
        const auto start = std::chrono::steady_clock::now();

        // Levenshtein axioms against the brute-force oracle
        std::function<std::size_t(const std::string&, const std::string&)> oracle =
            [&](const std::string& a, const std::string& b) -> std::size_t {
            if (a.empty()) return b.size();
            if (b.empty()) return a.size();
            return std::min({oracle(a.substr(1), b) + 1, oracle(a, b.substr(1)) + 1,
                             oracle(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1)});
        };
        std::mt19937 rng(9);
        auto random_string = [&rng]() {
            std::uniform_int_distribution<std::size_t> len(0, 7);
            std::uniform_int_distribution<int> ch(0, 2);
            std::string s;
            for (std::size_t i = 0, n = len(rng); i < n; ++i)
                s += static_cast<char>('a' + ch(rng));
            return s;
        };
        for (int i = 0; i < 150; ++i) {
            const std::string a = random_string(), b = random_string(), c = random_string();
            const std::size_t ab = levenshtein(a, b);
            if (ab != oracle(a, b)) problems.push_back("levenshtein oracle mismatch");
            if (levenshtein(a, a) != 0) problems.push_back("levenshtein identity violated");
            if (ab != levenshtein(b, a)) problems.push_back("levenshtein symmetry violated");
            if (ab > levenshtein(a, c) + levenshtein(c, b))
                problems.push_back("levenshtein triangle inequality violated");
        }

        // Wilson containment sweep
        for (std::size_t n = 1; n <= 500; n += 3) {
            for (int i = 0; i <= 100; ++i) {
                const double p_hat = i / 100.0;
                const auto w = wilson_interval(p_hat, n);
                if (w.low < 0.0 || w.high > 1.0 || w.low > p_hat + 1e-12 ||
                    w.high < p_hat - 1e-12) {
                    problems.push_back("Wilson containment violated at n=" + std::to_string(n));
                    break;
                }
            }
        }

        // Holm rejections contain Bonferroni rejections
        std::uniform_real_distribution<double> pval(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> m(1, 8);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<std::pair<std::string, double>> ps;
            const std::size_t count = m(rng);
            for (std::size_t i = 0; i < count; ++i)
                ps.push_back({"p" + std::to_string(i), pval(rng)});
            const auto holm = holm_bonferroni(ps, 0.05);
            for (const auto& [label, value] : ps) {
                if (value <= 0.05 / count &&
                    std::find(holm.rejected.begin(), holm.rejected.end(), label) ==
                        holm.rejected.end()) {
                    problems.push_back("Holm lost a Bonferroni rejection");
                    break;
                }
            }
        }

        // alignment monotonicity under generated-set extension
        std::vector<std::string> refs{"stress at home", "support from doctors", "cost of care"};
        std::vector<std::string> gens{"stress", "support"};
        double prev = alignment_score(refs, gens, fuzzy_match).score_s;
        for (int i = 0; i < 20; ++i) {
            gens.push_back("candidate " + std::to_string(i) + " " + random_string());
            const double next = alignment_score(refs, gens, fuzzy_match).score_s;
            if (next < prev - 1e-12) problems.push_back("alignment monotonicity violated");
            prev = next;
        }

        // judge order randomization: exactly half of 1000 sequential seeds swap
        const PromptLibrary lib;
        int swapped = 0;
        for (long seed = 0; seed < 1000; ++seed)
            if (render_judge_prompt(lib, "a", "b", "Overall Quality", seed).swapped) ++swapped;
        expect(problems, swapped == 500,
               "judge parity must be exactly 0.5, got " + std::to_string(swapped) + "/1000");

        expect(problems, elapsed(start) < 30.0, "property suites exceeded 30 s");
    });

    if (runner.failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", runner.failures);
    return 1;
}
