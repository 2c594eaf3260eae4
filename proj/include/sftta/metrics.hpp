#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sftta {

/// Lowercased word tokens: runs of letters/digits, punctuation stripped.
/// Operates on Unicode scalar values (non-ASCII codepoints count as letters).
std::vector<std::string> tokenize(const std::string& text);

/// UTF-8 string decoded to Unicode scalar values.
std::vector<char32_t> to_codepoints(const std::string& utf8);

/// Minimum single-character edit count over Unicode scalar values.
std::size_t levenshtein(const std::string& s1, const std::string& s2);

/// 1 - lev(s1,s2)/max(|s1|,|s2|); 1.0 when both empty.
double fuzzy_match(const std::string& s1, const std::string& s2);

/// Geometric mean of smoothed modified n-gram precisions times brevity
/// penalty. Zero precisions are floored at eps.
double bleu(const std::string& reference, const std::string& candidate, int max_n = 4,
            double eps = 1e-9);

/// Harmonic F-mean (alpha 0.9) of unigram precision/recall over
/// exact-then-stemmed matches, times 1 - 0.5*(chunks/matches)^3.
double meteor(const std::string& reference, const std::string& candidate);

/// LCS-based F1 over tokens.
double rouge_l(const std::string& reference, const std::string& candidate);

/// |ngrams(a) ∩ ngrams(b)| / |ngrams(a)| over distinct token n-gram
/// sets; 0 when a has no n-grams.
double directional_ngram_recall(const std::string& a, const std::string& b, int n);

double cosine_similarity(const std::vector<double>& u, const std::vector<double>& v);

using PairMetric = std::function<double(const std::string&, const std::string&)>;

struct BestMatch {
    std::size_t reference_index = 0;
    std::size_t generated_index = 0;  // argmax, lowest index on ties
    double score = 0.0;
};

struct AlignmentReport {
    std::string metric_name;
    std::vector<std::vector<double>> pairwise;  // |H| x |G|
    std::vector<BestMatch> per_reference_best;
    double score_s = 0.0;  // mean of row maxima
};

/// Best-match alignment: full |H|x|G| matrix, S = mean over references
/// of the row maximum.
AlignmentReport alignment_score(const std::vector<std::string>& references,
                                const std::vector<std::string>& generated,
                                const PairMetric& metric,
                                const std::string& metric_name = "metric");

}  // namespace sftta
