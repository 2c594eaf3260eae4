#include "sftta/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace sftta {

std::string trim_copy(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string QuoteId::render() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "[P%d_S%03d]", participant, sentence);
    return buf;
}

std::optional<QuoteId> QuoteId::try_parse(const std::string& text) {
    // [P{digits}_S{digits}] with no extra characters
    const std::string t = trim_copy(text);
    if (t.size() < 7 || t.front() != '[' || t.back() != ']') return std::nullopt;
    std::size_t i = 1;
    if (t[i] != 'P') return std::nullopt;
    ++i;
    std::size_t p_start = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == p_start) return std::nullopt;
    if (i + 1 >= t.size() || t[i] != '_' || t[i + 1] != 'S') return std::nullopt;
    i += 2;
    std::size_t s_start = i;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
    if (i == s_start || i + 1 != t.size()) return std::nullopt;
    QuoteId id;
    id.participant = std::stoi(t.substr(p_start, t.find('_') - p_start));
    id.sentence = std::stoi(t.substr(s_start, t.size() - 1 - s_start));
    if (id.participant < 1 || id.sentence < 1) return std::nullopt;
    return id;
}

QuoteId QuoteId::parse(const std::string& text) {
    auto id = try_parse(text);
    if (!id) throw ParseError("invalid quote id: '" + text + "'");
    return *id;
}

const Quote* Transcript::find(const QuoteId& id) const {
    for (const auto& q : quotes)
        if (q.id == id) return &q;
    return nullptr;
}

Corpus::Corpus(std::vector<Transcript> transcripts) : transcripts_(std::move(transcripts)) {
    std::set<std::string> tids;
    for (std::size_t t = 0; t < transcripts_.size(); ++t) {
        if (!tids.insert(transcripts_[t].transcript_id).second)
            throw ParseError("duplicate transcript id: " + transcripts_[t].transcript_id);
        for (std::size_t q = 0; q < transcripts_[t].quotes.size(); ++q) {
            const auto& id = transcripts_[t].quotes[q].id;
            if (!index_.emplace(id, std::make_pair(t, q)).second)
                throw ParseError("quote id " + id.render() + " is not globally unique across corpus");
        }
    }
}

const Transcript& Corpus::transcript(const std::string& transcript_id) const {
    for (const auto& t : transcripts_)
        if (t.transcript_id == transcript_id) return t;
    throw NotFoundError("unknown transcript: " + transcript_id);
}

const Quote& Corpus::resolve_quote(const QuoteId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw NotFoundError("quote not found: " + id.render());
    return transcripts_[it->second.first].quotes[it->second.second];
}

const Quote& Corpus::resolve_quote(const std::string& quote_id_text) const {
    return resolve_quote(QuoteId::parse(quote_id_text));
}

bool Corpus::contains(const QuoteId& id) const { return index_.count(id) > 0; }

std::vector<Quote> Corpus::quote_with_context(const QuoteId& id, int context_radius) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw NotFoundError("quote not found: " + id.render());
    const auto& quotes = transcripts_[it->second.first].quotes;
    long pos = static_cast<long>(it->second.second);
    long lo = std::max(0L, pos - context_radius);
    long hi = std::min(static_cast<long>(quotes.size()) - 1, pos + context_radius);
    return {quotes.begin() + lo, quotes.begin() + hi + 1};
}

Corpus Corpus::subset(const std::vector<std::string>& transcript_ids) const {
    std::vector<Transcript> out;
    for (const auto& tid : transcript_ids) out.push_back(transcript(tid));
    return Corpus(std::move(out));
}

Transcript parse_transcript(const std::string& json_text, const std::string& fallback_id) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("transcript is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("quotes") || !doc["quotes"].is_array())
        throw ParseError("transcript document missing 'quotes' array");

    Transcript t;
    t.transcript_id = doc.value("transcript_id", fallback_id);
    if (t.transcript_id.empty()) throw ParseError("transcript_id missing and no fallback given");
    if (doc["quotes"].empty()) throw ParseError("transcript '" + t.transcript_id + "' has no quotes");

    std::set<QuoteId> seen;
    std::map<int, int> next_sentence;  // participant -> next sequential index
    int next_participant = 1;
    std::map<std::string, int> speaker_participant;

    for (const auto& jq : doc["quotes"]) {
        Quote q;
        q.speaker = jq.value("speaker", "");
        q.text = trim_copy(jq.value("text", ""));
        if (q.text.empty()) throw ParseError("empty quote text in transcript " + t.transcript_id);

        if (jq.contains("quote_id") && !jq["quote_id"].is_null()) {
            q.id = QuoteId::parse(jq["quote_id"].get<std::string>());
            next_sentence[q.id.participant] =
                std::max(next_sentence[q.id.participant], q.id.sentence + 1);
        } else {
            // sequential per-participant numbering in reading order
            auto [it, inserted] = speaker_participant.emplace(q.speaker, next_participant);
            if (inserted) ++next_participant;
            int p = it->second;
            int& s = next_sentence[p];
            if (s == 0) s = 1;
            q.id = QuoteId{p, s++};
        }
        if (!seen.insert(q.id).second)
            throw ParseError("duplicate quote id " + q.id.render() + " in transcript " +
                             t.transcript_id);
        t.quotes.push_back(std::move(q));
    }
    return t;
}

Corpus load_corpus(const std::string& directory) {
    if (!fs::is_directory(directory)) throw ConfigError("not a directory: " + directory);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("no *.json transcripts in " + directory);

    std::vector<Transcript> transcripts;
    for (const auto& path : files) {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            transcripts.push_back(parse_transcript(buf.str(), path.stem().string()));
        } catch (const Error& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    return Corpus(std::move(transcripts));
}

std::vector<CorpusSplit> enumerate_splits(std::vector<std::string> ids, std::size_t k) {
    std::sort(ids.begin(), ids.end());
    const std::size_t n = ids.size();
    if (k < 1 || k >= n)
        throw ConfigError("validation_size must satisfy 1 <= k < transcript count");

    std::vector<CorpusSplit> out;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        CorpusSplit split;
        std::size_t next = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (next < k && pick[next] == i) {
                split.validation.push_back(ids[i]);
                ++next;
            } else {
                split.train.push_back(ids[i]);
            }
        }
        out.push_back(std::move(split));
        // advance combination
        long j = static_cast<long>(k) - 1;
        while (j >= 0 && pick[j] == n - k + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (std::size_t i = j + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
    }
    return out;
}

std::vector<CorpusSplit> enumerate_splits(const Corpus& corpus, std::size_t validation_size) {
    std::vector<std::string> ids;
    for (const auto& t : corpus.transcripts()) ids.push_back(t.transcript_id);
    return enumerate_splits(std::move(ids), validation_size);
}

}  // namespace sftta
