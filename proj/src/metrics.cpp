#include "sftta/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "sftta/error.hpp"

namespace sftta {

std::vector<char32_t> to_codepoints(const std::string& utf8) {
    std::vector<char32_t> out;
    std::size_t i = 0;
    while (i < utf8.size()) {
        unsigned char c = utf8[i];
        char32_t cp = 0;
        std::size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1F;
            len = 2;
        } else if ((c >> 4) == 0xE) {
            cp = c & 0x0F;
            len = 3;
        } else if ((c >> 3) == 0x1E) {
            cp = c & 0x07;
            len = 4;
        } else {
            cp = 0xFFFD;  // stray continuation byte
        }
        for (std::size_t k = 1; k < len && i + k < utf8.size(); ++k)
            cp = (cp << 6) | (utf8[i + k] & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (char32_t cp : to_codepoints(text)) {
        bool word = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
                    (cp >= '0' && cp <= '9') || cp >= 0x80;
        if (!word) {
            flush();
            continue;
        }
        if (cp >= 'A' && cp <= 'Z') cp += 32;
        // re-encode codepoint as UTF-8
        if (cp < 0x80) {
            current += static_cast<char>(cp);
        } else if (cp < 0x800) {
            current += static_cast<char>(0xC0 | (cp >> 6));
            current += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            current += static_cast<char>(0xE0 | (cp >> 12));
            current += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            current += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            current += static_cast<char>(0xF0 | (cp >> 18));
            current += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            current += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            current += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }
    flush();
    return tokens;
}

std::size_t levenshtein(const std::string& s1, const std::string& s2) {
    const auto a = to_codepoints(s1);
    const auto b = to_codepoints(s2);
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double fuzzy_match(const std::string& s1, const std::string& s2) {
    const std::size_t n1 = to_codepoints(s1).size();
    const std::size_t n2 = to_codepoints(s2).size();
    const std::size_t longest = std::max(n1, n2);
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(s1, s2)) / static_cast<double>(longest);
}

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& tokens, int n) {
    std::map<Ngram, std::size_t> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

std::set<Ngram> ngram_set(const std::vector<std::string>& tokens, int n) {
    std::set<Ngram> out;
    if (static_cast<int>(tokens.size()) < n) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        out.insert(Ngram(tokens.begin() + i, tokens.begin() + i + n));
    return out;
}

// Light suffix stemming, longest suffix first; stems shorter than 3
// characters are left alone.
std::string stem(const std::string& token) {
    static const std::vector<std::string> suffixes = {"ing", "ed", "es", "ly", "s"};
    for (const auto& suf : suffixes) {
        if (token.size() > suf.size() + 2 && token.ends_with(suf))
            return token.substr(0, token.size() - suf.size());
    }
    return token;
}

}  // namespace

double bleu(const std::string& reference, const std::string& candidate, int max_n, double eps) {
    const auto ref = tokenize(reference);
    const auto cand = tokenize(candidate);
    if (cand.empty()) return 0.0;

    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto cand_counts = ngram_counts(cand, n);
        const auto ref_counts = ngram_counts(ref, n);
        std::size_t total = 0, clipped = 0;
        for (const auto& [gram, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) clipped += std::min(count, it->second);
        }
        double precision = total > 0 ? static_cast<double>(clipped) / total : 0.0;
        if (precision <= 0.0) precision = eps;
        log_sum += std::log(precision);
    }
    double geo_mean = std::exp(log_sum / max_n);

    double bp = 1.0;
    if (cand.size() < ref.size())
        bp = std::exp(1.0 - static_cast<double>(ref.size()) / cand.size());
    return std::clamp(bp * geo_mean, 0.0, 1.0);
}

double meteor(const std::string& reference, const std::string& candidate) {
    const auto ref = tokenize(reference);
    const auto cand = tokenize(candidate);
    if (ref.empty() || cand.empty()) return 0.0;

    // alignment: cand position -> ref position, exact pass then stemmed pass
    std::vector<long> match_of_cand(cand.size(), -1);
    std::vector<bool> ref_used(ref.size(), false);
    auto pass = [&](bool stemmed) {
        for (std::size_t ci = 0; ci < cand.size(); ++ci) {
            if (match_of_cand[ci] >= 0) continue;
            const std::string c = stemmed ? stem(cand[ci]) : cand[ci];
            for (std::size_t ri = 0; ri < ref.size(); ++ri) {
                if (ref_used[ri]) continue;
                const std::string r = stemmed ? stem(ref[ri]) : ref[ri];
                if (c == r) {
                    match_of_cand[ci] = static_cast<long>(ri);
                    ref_used[ri] = true;
                    break;
                }
            }
        }
    };
    pass(false);
    pass(true);

    std::size_t matches = 0;
    for (long m : match_of_cand)
        if (m >= 0) ++matches;
    if (matches == 0) return 0.0;

    const double p = static_cast<double>(matches) / cand.size();
    const double r = static_cast<double>(matches) / ref.size();
    const double alpha = 0.9;
    const double f = p * r / (alpha * p + (1.0 - alpha) * r);

    // chunks: maximal runs adjacent in both candidate and reference
    std::size_t chunks = 0;
    long prev_ref = -2;
    bool in_chunk = false;
    for (std::size_t ci = 0; ci < cand.size(); ++ci) {
        if (match_of_cand[ci] < 0) {
            in_chunk = false;
            prev_ref = -2;
            continue;
        }
        if (!in_chunk || match_of_cand[ci] != prev_ref + 1) ++chunks;
        in_chunk = true;
        prev_ref = match_of_cand[ci];
    }

    const double gamma = 0.5, beta = 3.0;
    const double penalty =
        gamma * std::pow(static_cast<double>(chunks) / matches, beta);
    return f * (1.0 - penalty);
}

double rouge_l(const std::string& reference, const std::string& candidate) {
    const auto ref = tokenize(reference);
    const auto cand = tokenize(candidate);
    if (ref.empty() || cand.empty()) return 0.0;

    std::vector<std::size_t> prev(cand.size() + 1, 0), cur(cand.size() + 1, 0);
    for (std::size_t i = 1; i <= ref.size(); ++i) {
        for (std::size_t j = 1; j <= cand.size(); ++j) {
            if (ref[i - 1] == cand[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    const double lcs = static_cast<double>(prev[cand.size()]);
    if (lcs == 0.0) return 0.0;
    const double p = lcs / cand.size();
    const double r = lcs / ref.size();
    return 2.0 * p * r / (p + r);
}

double directional_ngram_recall(const std::string& a, const std::string& b, int n) {
    const auto grams_a = ngram_set(tokenize(a), n);
    if (grams_a.empty()) return 0.0;
    const auto grams_b = ngram_set(tokenize(b), n);
    std::size_t shared = 0;
    for (const auto& g : grams_a)
        if (grams_b.count(g)) ++shared;
    return static_cast<double>(shared) / grams_a.size();
}

double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) throw Error("cosine_similarity: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw Error("cosine_similarity: zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

AlignmentReport alignment_score(const std::vector<std::string>& references,
                                const std::vector<std::string>& generated,
                                const PairMetric& metric, const std::string& metric_name) {
    if (references.empty() || generated.empty())
        throw Error("alignment_score: empty theme set");

    AlignmentReport report;
    report.metric_name = metric_name;
    report.pairwise.resize(references.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < references.size(); ++i) {
        auto& row = report.pairwise[i];
        row.resize(generated.size());
        BestMatch best{i, 0, -1.0};
        for (std::size_t j = 0; j < generated.size(); ++j) {
            row[j] = metric(references[i], generated[j]);
            if (row[j] > best.score) {  // ties keep the lowest index
                best.score = row[j];
                best.generated_index = j;
            }
        }
        report.per_reference_best.push_back(best);
        sum += best.score;
    }
    report.score_s = sum / references.size();
    return report;
}

}  // namespace sftta
