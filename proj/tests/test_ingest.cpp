#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "convoarg/errors.hpp"
#include "convoarg/ingest.hpp"
#include "convoarg/rng.hpp"
#include "json.hpp"

using namespace convoarg;

namespace {

std::string line(const std::string& id, const std::string& conv, const std::string& author,
                 const nlohmann::json& parent, const std::string& body, std::int64_t ts,
                 std::int64_t score) {
    return nlohmann::json{{"id", id},        {"conversation_id", conv}, {"author", author},
                          {"parent_id", parent}, {"body", body},        {"timestamp", ts},
                          {"score", score}}
        .dump();
}

bool is_name_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
}

}  // namespace

TEST_CASE("parse_conversation assigns ordinals in timestamp order") {
    const auto c = parse_conversation({
        line("a", "c1", "alice", nullptr, "root", 100, 5),
        line("b", "c1", "bob", "a", "reply", 200, 1),
        line("c", "c1", "carol", "b", "reply", 300, -2),
    });
    REQUIRE(c.posts.size() == 3);
    CHECK(c.conversation_id == "c1");
    CHECK(c.posts[0].post_id == "a");
    CHECK(c.posts[1].post_id == "b");
    CHECK(c.posts[2].post_id == "c");
    CHECK(c.posts[0].ordinal == 0);
    CHECK(c.posts[1].ordinal == 1);
    CHECK(c.posts[2].ordinal == 2);
    CHECK(c.posts[2].score == -2);
}

TEST_CASE("parse_conversation rejects dangling parents") {
    CHECK_THROWS_AS(parse_conversation({
                        line("a", "c1", "alice", nullptr, "root", 100, 0),
                        line("b", "c1", "bob", "zzz", "reply", 200, 0),
                    }),
                    DanglingParent);
}

TEST_CASE("equal timestamps keep input order") {
    const auto c = parse_conversation({
        line("first", "c1", "alice", nullptr, "x", 100, 0),
        line("second", "c1", "bob", nullptr, "y", 100, 0),
        line("third", "c1", "carol", nullptr, "z", 100, 0),
    });
    CHECK(c.posts[0].post_id == "first");
    CHECK(c.posts[1].post_id == "second");
    CHECK(c.posts[2].post_id == "third");
}

TEST_CASE("parse_conversation rejects malformed input") {
    CHECK_THROWS_AS(parse_conversation({"{not json"}), MalformedLine);
    CHECK_THROWS_AS(parse_conversation({"[1,2]"}), MalformedLine);
    CHECK_THROWS_AS(parse_conversation({R"({"id":"a","conversation_id":"c"})"}), MalformedLine);
    CHECK_THROWS_AS(parse_conversation({}), MalformedLine);
    // duplicate ids cannot be normalized
    CHECK_THROWS_AS(parse_conversation({
                        line("a", "c1", "alice", nullptr, "x", 100, 0),
                        line("a", "c1", "bob", nullptr, "y", 200, 0),
                    }),
                    MalformedLine);
}

TEST_CASE("parse_conversation rejects mixed conversations") {
    CHECK_THROWS_AS(parse_conversation({
                        line("a", "c1", "alice", nullptr, "x", 100, 0),
                        line("b", "c2", "bob", nullptr, "y", 200, 0),
                    }),
                    MixedConversation);
}

TEST_CASE("parent posted later than its child is rejected") {
    CHECK_THROWS_AS(parse_conversation({
                        line("a", "c1", "alice", "b", "child first", 100, 0),
                        line("b", "c1", "bob", nullptr, "parent later", 200, 0),
                    }),
                    DanglingParent);
}

TEST_CASE("extract_mentions matches the three marker forms") {
    const auto m1 = extract_mentions("u/alice you are wrong");
    REQUIRE(m1.size() == 1);
    CHECK(m1[0].username == "alice");
    CHECK(m1[0].char_offset == 0);

    const auto m2 = extract_mentions("@bob and @carol agree");
    REQUIRE(m2.size() == 2);
    CHECK(m2[0].username == "bob");
    CHECK(m2[0].char_offset == 0);
    CHECK(m2[1].username == "carol");
    CHECK(m2[1].char_offset == 9);

    CHECK(extract_mentions("nothing here").empty());

    const auto m3 = extract_mentions("see /u/dave now");
    REQUIRE(m3.size() == 1);
    CHECK(m3[0].username == "dave");
    CHECK(m3[0].char_offset == 4);
}

TEST_CASE("extract_mentions requires a token boundary") {
    CHECK(extract_mentions("you/alice").empty());       // 'u/' inside a word
    CHECK(extract_mentions("mail a@b.org").empty());    // '@' inside a token
    const auto m = extract_mentions("@@bob");
    REQUIRE(m.size() == 1);
    CHECK(m[0].username == "bob");
    CHECK(m[0].char_offset == 1);
    CHECK(extract_mentions("u/ nothing").empty());      // marker without a name
    CHECK(extract_mentions("ends with u/").empty());
}

TEST_CASE("mention offsets index into the body and match the grammar") {
    Rng rng = make_rng(7);
    const std::string alphabet = "ab u/@_-0/u@@  cu";
    for (int it = 0; it < 500; ++it) {
        std::string body;
        const auto len = uniform_int(rng, 0, 40);
        for (std::uint64_t i = 0; i < len; ++i) {
            body += alphabet[uniform_index(rng, alphabet.size())];
        }
        for (const auto& m : extract_mentions(body)) {
            REQUIRE(m.char_offset < body.size());
            CHECK(!m.username.empty());
            for (char c : m.username) CHECK(is_name_char(c));
            // the matched text starts with one of the three markers
            const std::string at = body.substr(m.char_offset, 3);
            const bool marker = at.rfind("/u/", 0) == 0 || at.rfind("u/", 0) == 0 || at[0] == '@';
            CHECK(marker);
        }
    }
}

TEST_CASE("validate_thread flags structural violations") {
    Conversation good = parse_conversation({
        line("a", "c1", "alice", nullptr, "x", 100, 0),
        line("b", "c1", "bob", "a", "y", 200, 0),
        line("c", "c1", "carol", "b", "z", 300, 0),
    });
    CHECK(validate_thread(good).empty());

    Conversation bad = good;
    bad.posts[1].parent_id = "c";  // parent has a larger ordinal
    const auto report = validate_thread(bad);
    REQUIRE(report.size() == 1);
    CHECK(report[0].post_id == "b");
    CHECK(report[0].rule == "parent_not_earlier");

    Conversation empty;
    empty.conversation_id = "c9";
    const auto empty_report = validate_thread(empty);
    REQUIRE(empty_report.size() == 1);
    CHECK(empty_report[0].rule == "empty");
}

TEST_CASE("parsing is deterministic and always yields a valid thread") {
    Rng rng = make_rng(11);
    for (int it = 0; it < 200; ++it) {
        const int n = 1 + static_cast<int>(uniform_int(rng, 0, 7));
        std::vector<std::string> lines;
        for (int i = 0; i < n; ++i) {
            nlohmann::json parent = nullptr;
            if (i > 0 && uniform_real(rng) < 0.6) {
                parent = "p" + std::to_string(uniform_index(rng, static_cast<std::size_t>(i)));
            }
            lines.push_back(line("p" + std::to_string(i), "conv", "user" +
                                     std::to_string(uniform_index(rng, 3)),
                                 parent, "body " + std::to_string(i),
                                 1000 + static_cast<std::int64_t>(i / 2) * 10,  // frequent ties
                                 static_cast<std::int64_t>(uniform_int(rng, 0, 20)) - 10));
        }
        const auto c1 = parse_conversation(lines);
        const auto c2 = parse_conversation(lines);
        CHECK(to_canonical_jsonl(c1) == to_canonical_jsonl(c2));
        CHECK(validate_thread(c1).empty());
    }
}

TEST_CASE("parse_corpus splits by conversation in first-seen order") {
    const auto convs = parse_corpus({
        line("a", "c1", "alice", nullptr, "x", 100, 0),
        line("q", "c2", "zoe", nullptr, "x", 50, 0),
        line("b", "c1", "bob", "a", "y", 200, 0),
    });
    REQUIRE(convs.size() == 2);
    CHECK(convs[0].conversation_id == "c1");
    CHECK(convs[0].posts.size() == 2);
    CHECK(convs[1].conversation_id == "c2");
}
