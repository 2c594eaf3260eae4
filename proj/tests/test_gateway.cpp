#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sftta/gateway.hpp"

namespace fs = std::filesystem;
using namespace sftta;

namespace {

ChatRequest simple_request(const std::string& content, double temperature = 0.7) {
    ChatRequest r;
    r.model_id = "m";
    r.messages = {{"user", content}};
    r.temperature = temperature;
    return r;
}

}  // namespace

TEST_CASE("ChatRequest validation") {
    ChatRequest r;
    r.model_id = "m";
    CHECK_THROWS_AS(r.validate(), Error);  // no messages
    r.messages = {{"assistant", "hi"}};
    CHECK_THROWS_AS(r.validate(), Error);  // bad leading role
    r.messages = {{"system", "s"}, {"user", "u"}};
    CHECK_NOTHROW(r.validate());
}

TEST_CASE("cache_key is stable and sensitive to every request field") {
    const auto a = simple_request("hello");
    CHECK(cache_key(a) == cache_key(simple_request("hello")));
    CHECK(cache_key(a) != cache_key(simple_request("other")));
    CHECK(cache_key(a) != cache_key(simple_request("hello", 0.0)));
    auto seeded = simple_request("hello");
    seeded.seed = 5;
    CHECK(cache_key(a) != cache_key(seeded));
    auto model = simple_request("hello");
    model.model_id = "m2";
    CHECK(cache_key(a) != cache_key(model));
}

TEST_CASE("fnv1a64 hashing is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64_hex("x").size() == 16);
    CHECK(fnv1a64_hex("x") == fnv1a64_hex("x"));
}

TEST_CASE("mock chat: queue takes precedence, then rules, then synthesis") {
    MockBackend mock;
    mock.add_rule("weather", "sunny");
    mock.push_response("queued");
    CHECK(mock.complete_chat(simple_request("weather report")).content == "queued");
    CHECK(mock.complete_chat(simple_request("weather report")).content == "sunny");
    CHECK(mock.complete_chat(simple_request("Answer with the single token A or B.")).content ==
          "A");
}

TEST_CASE("mock chat is deterministic and errors with synthesis disabled") {
    MockBackend mock;
    const auto req = simple_request("Answer with the single word CONSISTENT or INCONSISTENT.");
    CHECK(mock.complete_chat(req).content == mock.complete_chat(req).content);
    mock.set_synthesis(false);
    CHECK_THROWS_AS(mock.complete_chat(simple_request("anything else")), TransportError);
}

TEST_CASE("mock embeddings are order-insensitive token multiset hashes") {
    MockBackend mock;
    const auto ab = mock.embed_text("a b", "e");
    const auto ba = mock.embed_text("b a", "e");
    CHECK(ab.values == ba.values);
    CHECK(ab.values.size() == MockBackend::kEmbeddingDim);

    double norm = 0.0;
    for (double v : ab.values) norm += v * v;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0));

    // repeated tokens change the multiset, so the vector differs
    CHECK(mock.embed_text("a a b", "e").values != ab.values);
}

TEST_CASE("replay cache records and replays a cassette") {
    const fs::path cassette = fs::temp_directory_path() / "sftta_test_cassette.jsonl";
    fs::remove(cassette);

    const auto req = simple_request("Answer with the single token A or B.");
    {
        ReplayCache recorder(std::make_shared<MockBackend>(), cassette.string(),
                             CassetteMode::record);
        const auto first = recorder.complete_chat(req);
        CHECK(first.content == "A");
        CHECK_FALSE(first.cached);
        CHECK(recorder.complete_chat(req).cached);
        CHECK(recorder.size() >= 1);
    }

    ReplayCache replayer(nullptr, cassette.string(), CassetteMode::replay);
    const auto replayed = replayer.complete_chat(req);
    CHECK(replayed.content == "A");
    CHECK(replayed.cached);
    CHECK_THROWS_AS(replayer.complete_chat(simple_request("never recorded")), Error);
    fs::remove(cassette);
}

TEST_CASE("replay mode requires an existing cassette") {
    CHECK_THROWS_AS(
        ReplayCache(nullptr, (fs::temp_directory_path() / "missing_cassette.jsonl").string(),
                    CassetteMode::replay),
        Error);
}
