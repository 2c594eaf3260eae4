#include "sftta/gateway.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sftta/corpus.hpp"
#include "sftta/metrics.hpp"

using sftta::trim_copy;

using nlohmann::json;

namespace sftta {

void ChatRequest::validate() const {
    if (messages.empty()) throw Error("ChatRequest: messages must be non-empty");
    const auto& first = messages.front().role;
    if (first != "system" && first != "user")
        throw Error("ChatRequest: first message role must be system or user");
    if (temperature < 0.0) throw Error("ChatRequest: temperature must be >= 0");
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

std::string cache_key(const ChatRequest& request) {
    json j;
    j["model"] = request.model_id;
    j["messages"] = json::array();
    for (const auto& m : request.messages)
        j["messages"].push_back({{"role", m.role}, {"content", m.content}});
    j["temperature"] = request.temperature;
    if (request.seed) j["seed"] = *request.seed;
    return fnv1a64_hex(j.dump());
}

// ---------------------------------------------------------------- mock

namespace {

std::string extract_tag(const std::string& text, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    auto b = text.find(open);
    if (b == std::string::npos) return "";
    b += open.size();
    auto e = text.find(close, b);
    if (e == std::string::npos) return "";
    return text.substr(b, e - b);
}

std::vector<std::string> extract_quote_ids(const std::string& text) {
    static const std::regex re(R"(\[P\d+_S\d+\])");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
         it != std::sregex_iterator(); ++it) {
        if (seen.insert(it->str()).second) out.push_back(it->str());
    }
    return out;
}

std::optional<int> extract_exact_count(const std::string& text, const std::string& noun) {
    const std::regex re("exactly ([0-9]+) " + noun);
    std::smatch m;
    if (std::regex_search(text, m, re)) return std::stoi(m[1].str());
    return std::nullopt;
}

std::string whole_prompt(const ChatRequest& request) {
    std::string all;
    for (const auto& m : request.messages) all += m.content + "\n";
    return all;
}

// Rule-based synthesis: structurally valid agent output derived only
// from the request text, salted with a prompt hash so distinct agent
// personas yield distinct (but reproducible) content.
std::string synthesize(const ChatRequest& request) {
    const std::string all = whole_prompt(request);
    const std::string salt = fnv1a64_hex(request.model_id + "|" +
                                         (request.messages.empty() ? ""
                                                                   : request.messages[0].content))
                                 .substr(0, 6);

    if (all.find("Answer with the single token") != std::string::npos) return "A";
    if (all.find("CONSISTENT or INCONSISTENT") != std::string::npos) return "CONSISTENT";

    if (auto n = extract_exact_count(all, "paraphrase")) {
        const std::string original = trim_copy(extract_tag(all, "text"));
        json variants = json::array();
        for (int i = 1; i <= *n; ++i)
            variants.push_back(original + " (rephrasing " + std::to_string(i) + ")");
        return variants.dump(2);
    }

    const std::string transcript = extract_tag(all, "transcript");
    const std::string codes_blob = extract_tag(all, "codes");
    const std::string themes_blob = extract_tag(all, "themes");
    const std::string criteria_blob = extract_tag(all, "criteria");

    // evaluation: one pass verdict per (theme, criterion)
    if (!themes_blob.empty() && !criteria_blob.empty() &&
        all.find("verdict") != std::string::npos) {
        json themes = json::parse(themes_blob, nullptr, false);
        json verdicts = json::array();
        std::vector<std::string> criteria;
        std::istringstream lines(criteria_blob);
        for (std::string line; std::getline(lines, line);) {
            line = trim_copy(line);
            if (!line.empty()) criteria.push_back(line.substr(0, line.find(':')));
        }
        const std::size_t n_themes = themes.is_array() ? themes.size() : 0;
        for (std::size_t t = 0; t < n_themes; ++t)
            for (const auto& c : criteria)
                verdicts.push_back({{"theme_index", t},
                                    {"criterion", trim_copy(c)},
                                    {"verdict", "pass"},
                                    {"rationale", "meets the criterion"}});
        return verdicts.dump(2);
    }

    // refinement: return the themes unchanged (count preserved)
    if (!themes_blob.empty() && all.find("Revise") != std::string::npos) {
        json themes = json::parse(themes_blob, nullptr, false);
        if (themes.is_array()) return themes.dump(2);
    }

    // theme generation / theme aggregation from codes or candidate themes
    if (auto n = extract_exact_count(all, "theme")) {
        json source = json::parse(!themes_blob.empty() ? themes_blob : codes_blob, nullptr, false);
        if (!source.is_array() || source.empty()) source = json::array();

        if (!themes_blob.empty()) {
            // aggregation: first n distinct-titled candidates, fillers if short
            json out = json::array();
            std::set<std::string> titles;
            for (const auto& cand : source) {
                if (static_cast<int>(out.size()) >= *n) break;
                std::string title = cand.value("title", "");
                if (title.empty() || !titles.insert(title).second) continue;
                out.push_back(cand);
            }
            int filler = 1;
            while (static_cast<int>(out.size()) < *n) {
                out.push_back({{"title", "Residual pattern " + std::to_string(filler++)},
                               {"description", "Remaining material not covered above."},
                               {"quote_ids", json::array()}});
            }
            return out.dump(2);
        }

        // generation: bucket codes round-robin into n themes
        json out = json::array();
        for (int t = 0; t < *n; ++t) {
            json quote_ids = json::array();
            std::string label, description;
            for (std::size_t i = t; i < source.size(); i += *n) {
                if (label.empty()) label = source[i].value("label", "pattern");
                description += source[i].value("description", "");
                description += " ";
                for (const auto& q : source[i].value("quote_ids", json::array()))
                    quote_ids.push_back(q);
            }
            if (label.empty()) label = "pattern";
            out.push_back({{"title", "Theme " + std::to_string(t + 1) + " (" + salt + "): " + label},
                           {"description", trim_copy(description.empty() ? "No codes." : description)},
                           {"quote_ids", quote_ids}});
        }
        return out.dump(2);
    }

    // code aggregation: merge duplicate labels, union quote ids
    if (!codes_blob.empty()) {
        json source = json::parse(codes_blob, nullptr, false);
        json out = json::array();
        std::map<std::string, std::size_t> by_label;
        if (source.is_array()) {
            for (const auto& code : source) {
                const std::string label = code.value("label", "");
                auto it = by_label.find(label);
                if (it == by_label.end()) {
                    by_label[label] = out.size();
                    out.push_back(code);
                } else {
                    auto& ids = out[it->second]["quote_ids"];
                    std::set<std::string> seen(ids.begin(), ids.end());
                    for (const auto& q : code.value("quote_ids", json::array()))
                        if (seen.insert(q.get<std::string>()).second) ids.push_back(q);
                }
            }
        }
        return out.dump(2);
    }

    // coding: group transcript quotes into codes of up to three quotes
    if (!transcript.empty()) {
        const auto ids = extract_quote_ids(transcript);
        json out = json::array();
        for (std::size_t i = 0; i < ids.size(); i += 3) {
            json quote_ids = json::array();
            for (std::size_t k = i; k < std::min(i + 3, ids.size()); ++k)
                quote_ids.push_back(ids[k]);
            out.push_back(
                {{"label", "code-" + salt + "-" + std::to_string(i / 3 + 1)},
                 {"description", "Recurring idea across " + std::to_string(quote_ids.size()) +
                                     " quotes starting at " + ids[i]},
                 {"quote_ids", quote_ids}});
        }
        return out.dump(2);
    }

    return "OK";
}

}  // namespace

ChatResponse MockBackend::complete_chat(const ChatRequest& request) {
    request.validate();
    std::string content;
    {
        std::lock_guard lock(mutex_);
        if (!queue_.empty()) {
            content = queue_.front();
            queue_.pop_front();
        } else {
            const std::string all = whole_prompt(request);
            for (const auto& [pattern, response] : rules_) {
                if (all.find(pattern) != std::string::npos) {
                    content = response;
                    break;
                }
            }
        }
    }
    if (content.empty()) {
        if (!synthesize_) throw TransportError("mock backend: no scripted response matches");
        content = synthesize(request);
    }
    ChatResponse resp;
    resp.content = content;
    resp.backend_id = backend_id();
    resp.usage.prompt_tokens = whole_prompt(request).size() / 4;
    resp.usage.completion_tokens = content.size() / 4;
    return resp;
}

EmbeddingVector MockBackend::embed_text(const std::string& text, const std::string& model_id) {
    if (trim_copy(text).empty()) throw Error("embed_text: empty text");
    // hashed bag of lowercased tokens, L2-normalized
    std::vector<double> v(kEmbeddingDim, 0.0);
    for (const auto& token : tokenize(text)) v[fnv1a64(token) % kEmbeddingDim] += 1.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return {std::move(v), model_id.empty() ? "mock-embed" : model_id};
}

void MockBackend::push_response(std::string content) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(content));
}

void MockBackend::add_rule(std::string pattern, std::string content) {
    std::lock_guard lock(mutex_);
    rules_.emplace_back(std::move(pattern), std::move(content));
}

// ---------------------------------------------------------------- http

HttpBackend::HttpBackend(std::string base_url, std::string api_key, RetryPolicy retry)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), retry_(retry) {}

std::string HttpBackend::post_json(const std::string& path, const std::string& body) {
    std::string last_error;
    for (int attempt = 0; attempt < retry_.max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(retry_.base_delay_ms << (attempt - 1)));
        httplib::Client client(base_url_);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            throw TransportError("authentication failure (HTTP " + std::to_string(res->status) + ")");
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("backend error HTTP " + std::to_string(res->status) + ": " +
                                 res->body);
        return res->body;
    }
    throw TransportError("backend unreachable after " + std::to_string(retry_.max_attempts) +
                         " attempts: " + last_error);
}

ChatResponse HttpBackend::complete_chat(const ChatRequest& request) {
    request.validate();
    json body;
    body["model"] = request.model_id;
    body["messages"] = json::array();
    for (const auto& m : request.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    body["temperature"] = request.temperature;
    if (request.seed) body["seed"] = *request.seed;
    if (request.max_tokens) body["max_tokens"] = *request.max_tokens;

    const std::string raw = post_json("/v1/chat/completions", body.dump());
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || j["choices"].empty())
        throw TransportError("malformed chat completion payload");
    ChatResponse resp;
    resp.content = j["choices"][0]["message"].value("content", "");
    resp.backend_id = backend_id();
    if (j.contains("usage")) {
        resp.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0);
        resp.usage.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
    return resp;
}

EmbeddingVector HttpBackend::embed_text(const std::string& text, const std::string& model_id) {
    if (trim_copy(text).empty()) throw Error("embed_text: empty text");
    json body{{"model", model_id}, {"input", text}};
    const std::string raw = post_json("/v1/embeddings", body.dump());
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.contains("data") || j["data"].empty())
        throw TransportError("malformed embeddings payload");
    EmbeddingVector v;
    v.model_id = model_id;
    for (const auto& x : j["data"][0]["embedding"]) v.values.push_back(x.get<double>());
    if (v.values.empty()) throw TransportError("empty embedding vector");
    return v;
}

// ------------------------------------------------------------- cassette

ReplayCache::ReplayCache(std::shared_ptr<Backend> inner, std::string cassette_path,
                         CassetteMode mode)
    : inner_(std::move(inner)), path_(std::move(cassette_path)), mode_(mode) {
    if (mode_ == CassetteMode::record && !inner_)
        throw ConfigError("record mode requires an inner backend");
    std::ifstream in(path_);
    for (std::string line; std::getline(in, line);) {
        if (trim_copy(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("corrupt cassette line in " + path_);
        entries_[j.at("key").get<std::string>()] = j.at("content").get<std::string>();
    }
    if (mode_ == CassetteMode::replay && entries_.empty() && !std::ifstream(path_).good())
        throw ConfigError("replay mode but cassette missing: " + path_);
}

std::string ReplayCache::backend_id() const {
    return inner_ ? "cassette(" + inner_->backend_id() + ")" : "cassette";
}

std::string ReplayCache::lookup_or_fetch(const std::string& key,
                                         const std::function<std::string()>& fetch) {
    {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    if (mode_ == CassetteMode::replay)
        throw TransportError("cassette miss in replay mode: " + key);
    const std::string content = fetch();
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, content);
    if (inserted) {
        std::ofstream out(path_, std::ios::app);
        out << json{{"key", key}, {"content", content}}.dump() << "\n";
    }
    return it->second;
}

ChatResponse ReplayCache::complete_chat(const ChatRequest& request) {
    request.validate();
    const std::string key = cache_key(request);
    bool was_cached = false;
    {
        std::lock_guard lock(mutex_);
        was_cached = entries_.count(key) > 0;
    }
    ChatResponse resp;
    resp.content = lookup_or_fetch(key, [&] { return inner_->complete_chat(request).content; });
    resp.backend_id = backend_id();
    resp.cached = was_cached;
    return resp;
}

EmbeddingVector ReplayCache::embed_text(const std::string& text, const std::string& model_id) {
    if (trim_copy(text).empty()) throw Error("embed_text: empty text");
    const std::string key = "emb:" + fnv1a64_hex(model_id + "\x1f" + text);
    const std::string content =
        lookup_or_fetch(key, [&] {
            json j = json::array();
            for (double x : inner_->embed_text(text, model_id).values) j.push_back(x);
            return j.dump();
        });
    EmbeddingVector v;
    v.model_id = model_id;
    for (const auto& x : json::parse(content)) v.values.push_back(x.get<double>());
    return v;
}

}  // namespace sftta
