#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sftta/error.hpp"

namespace sftta {

/// Identifier of one participant sentence, rendered as `[P{p}_S{sss}]`
/// with the sentence index zero-padded to three digits.
struct QuoteId {
    int participant = 0;  // >= 1
    int sentence = 0;     // >= 1

    std::string render() const;
    static QuoteId parse(const std::string& text);  // throws ParseError
    static std::optional<QuoteId> try_parse(const std::string& text);

    auto operator<=>(const QuoteId&) const = default;
};

struct Quote {
    QuoteId id;
    std::string speaker;
    std::string text;  // non-empty after trimming
};

struct Transcript {
    std::string transcript_id;
    std::vector<Quote> quotes;  // source order, ids unique

    const Quote* find(const QuoteId& id) const;
};

struct CorpusSplit {
    std::vector<std::string> train;       // sorted transcript ids
    std::vector<std::string> validation;  // sorted transcript ids

    bool operator==(const CorpusSplit&) const = default;
};

class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Transcript> transcripts);

    const std::vector<Transcript>& transcripts() const { return transcripts_; }
    std::size_t size() const { return transcripts_.size(); }
    bool empty() const { return transcripts_.empty(); }

    const Transcript& transcript(const std::string& transcript_id) const;

    /// Global quote lookup. Throws ParseError on malformed id text,
    /// NotFoundError when the id does not resolve anywhere.
    const Quote& resolve_quote(const std::string& quote_id_text) const;
    const Quote& resolve_quote(const QuoteId& id) const;

    /// Resolve plus surrounding quotes from the same transcript
    /// (context_radius quotes either side), for credibility judging.
    std::vector<Quote> quote_with_context(const QuoteId& id, int context_radius) const;

    bool contains(const QuoteId& id) const;

    /// Corpus restricted to the given transcript ids.
    Corpus subset(const std::vector<std::string>& transcript_ids) const;

private:
    std::vector<Transcript> transcripts_;
    std::map<QuoteId, std::pair<std::size_t, std::size_t>> index_;  // id -> (transcript, quote)
};

/// Parse one transcript JSON document. Quotes without explicit ids get
/// sequential per-participant sentence numbers in reading order.
Transcript parse_transcript(const std::string& json_text, const std::string& fallback_id = "");

/// Load every *.json under `directory`; any parse error aborts naming
/// the offending file.
Corpus load_corpus(const std::string& directory);

/// All C(n, validation_size) train/validation partitions in
/// lexicographic order of the validation id combination.
std::vector<CorpusSplit> enumerate_splits(const Corpus& corpus, std::size_t validation_size);
std::vector<CorpusSplit> enumerate_splits(std::vector<std::string> transcript_ids,
                                          std::size_t validation_size);

std::string trim_copy(const std::string& s);

}  // namespace sftta
