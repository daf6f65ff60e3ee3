#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "convoarg/argraph.hpp"
#include "convoarg/errors.hpp"
#include "convoarg/rng.hpp"
#include "oracles.hpp"

using namespace convoarg;

namespace {

Post make_post(const std::string& id, const std::string& author, int ordinal,
               std::optional<std::string> parent = std::nullopt, std::string body = "") {
    Post p;
    p.post_id = id;
    p.conversation_id = "c";
    p.author_id = author;
    p.parent_id = std::move(parent);
    p.body = std::move(body);
    p.timestamp = 1000 + ordinal;
    p.ordinal = ordinal;
    return p;
}

Conversation chain_aba() {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "A", 0), make_post("p2", "B", 1, "p1"),
               make_post("p3", "A", 2, "p2")};
    return c;
}

using Edge = std::pair<std::string, std::string>;
using Triple = std::tuple<std::string, std::string, std::string>;

std::set<Triple> defence_set(const std::vector<DefenceEdge>& edges) {
    std::set<Triple> s;
    for (const auto& e : edges) s.emplace(e.source, e.target, e.witness);
    return s;
}

}  // namespace

TEST_CASE("resolve_target: reply to a different author wins") {
    const auto c = chain_aba();
    CHECK(resolve_target(c.posts[1], c) == "p1");
    CHECK(resolve_target(c.posts[2], c) == "p2");
}

TEST_CASE("resolve_target: first post and self-replies yield nothing") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "A", 0), make_post("p2", "A", 1, "p1")};
    CHECK(!resolve_target(c.posts[0], c));
    CHECK(!resolve_target(c.posts[1], c));  // continuation, no fall-through
}

TEST_CASE("resolve_target: mention picks the user's latest prior post") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "alice", 0),
               make_post("p2", "bob", 1),
               make_post("p3", "alice", 2),
               make_post("p4", "carol", 3, std::nullopt, "u/alice you are wrong")};
    CHECK(resolve_target(c.posts[3], c) == "p3");
}

TEST_CASE("resolve_target: reply precedence over mention") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "alice", 0), make_post("p2", "bob", 1),
               make_post("p3", "carol", 2, "p1", "@bob listen")};
    CHECK(resolve_target(c.posts[2], c) == "p1");
}

TEST_CASE("resolve_target: unresolvable mention falls through to the previous author") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "alice", 0),
               make_post("p2", "bob", 1, std::nullopt, "@ghost anyone?")};
    CHECK(resolve_target(c.posts[1], c) == "p1");

    // self-mention falls through as well
    Conversation c2;
    c2.conversation_id = "c";
    c2.posts = {make_post("p1", "alice", 0),
                make_post("p2", "bob", 1, std::nullopt, "@bob thinking aloud")};
    CHECK(resolve_target(c2.posts[1], c2) == "p1");

    // only the first mention counts
    Conversation c3;
    c3.conversation_id = "c";
    c3.posts = {make_post("p1", "alice", 0), make_post("p2", "bob", 1),
                make_post("p3", "carol", 2, std::nullopt, "@ghost and @alice too")};
    CHECK(resolve_target(c3.posts[2], c3) == "p2");
}

TEST_CASE("build_graph on the three-post chain") {
    const auto g = build_graph(chain_aba());
    REQUIRE(g.attack_edges.size() == 2);
    CHECK(g.attack_edges[0] == Edge("p2", "p1"));
    CHECK(g.attack_edges[1] == Edge("p3", "p2"));
    REQUIRE(g.defence_edges.size() == 1);
    CHECK(g.defence_edges[0].source == "p3");
    CHECK(g.defence_edges[0].target == "p1");
    CHECK(g.defence_edges[0].witness == "p2");
    // the defence is a self-defence of author A, which is retained
    CHECK(g.author_of.at("p3") == g.author_of.at("p1"));
}

TEST_CASE("build_graph: self-reply thread produces no edges") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "A", 0), make_post("p2", "A", 1, "p1")};
    const auto g = build_graph(c);
    CHECK(g.attack_edges.empty());
    CHECK(g.defence_edges.empty());
    CHECK(g.nodes.size() == 2);
}

TEST_CASE("build_graph on a four-post chain keeps the witness rule") {
    Conversation c;
    c.conversation_id = "c";
    c.posts = {make_post("p1", "A", 0), make_post("p2", "B", 1, "p1"),
               make_post("p3", "C", 2, "p2"), make_post("p4", "B", 3, "p3")};
    const auto g = build_graph(c);
    REQUIRE(g.attack_edges.size() == 3);
    CHECK(defence_set(g.defence_edges) ==
          std::set<Triple>{{"p3", "p1", "p2"}, {"p4", "p2", "p3"}});
    for (const auto& d : g.defence_edges) {
        CHECK(g.author_of.at(d.witness) != g.author_of.at(d.target));
    }
}

TEST_CASE("build_graph rejects invalid conversations") {
    Conversation c = chain_aba();
    c.posts[1].ordinal = 5;
    CHECK_THROWS_AS(build_graph(c), InvalidConversation);
}

TEST_CASE("defence_closure on explicit edge sets") {
    CHECK(defence_closure({}).empty());

    const auto one = defence_closure({{"x", "y"}, {"y", "z"}});
    CHECK(defence_set(one) == std::set<Triple>{{"x", "z", "y"}});

    const auto two = defence_closure({{"x", "y"}, {"y", "z"}, {"w", "y"}});
    CHECK(defence_set(two) == std::set<Triple>{{"x", "z", "y"}, {"w", "z", "y"}});
}

namespace {

// Random conversations with planted mentions; the planted first mention is
// recorded separately so the oracle does not depend on the lexer.
struct GeneratedCase {
    Conversation conv;
    std::vector<std::string> first_mention;
};

GeneratedCase random_conversation(Rng& rng) {
    GeneratedCase out;
    out.conv.conversation_id = "c";
    const int n = 1 + static_cast<int>(uniform_int(rng, 0, 9));
    const int n_authors = 1 + static_cast<int>(uniform_int(rng, 0, 3));
    const std::vector<std::string> authors = {"alice", "bob", "carol", "dave"};
    for (int i = 0; i < n; ++i) {
        const std::string author = authors[uniform_index(rng, static_cast<std::size_t>(n_authors))];
        std::optional<std::string> parent;
        std::string mention;
        if (i > 0 && uniform_real(rng) < 0.5) {
            parent = "p" + std::to_string(uniform_index(rng, static_cast<std::size_t>(i)));
        }
        std::string body = "body " + std::to_string(i);
        if (uniform_real(rng) < 0.4) {
            mention = authors[uniform_index(rng, authors.size())];  // may be self or absent
            body = "u/" + mention + " " + body;
        }
        out.conv.posts.push_back(make_post("p" + std::to_string(i), author, i, parent, body));
        out.first_mention.push_back(mention);
    }
    return out;
}

}  // namespace

TEST_CASE("build_graph matches the brute-force rule oracle on random threads") {
    Rng rng = make_rng(2024);
    for (int it = 0; it < 400; ++it) {
        const auto gen = random_conversation(rng);
        const auto& c = gen.conv;
        const auto g = build_graph(c);

        std::vector<std::pair<std::size_t, std::size_t>> expected_attacks;
        for (std::size_t i = 0; i < c.posts.size(); ++i) {
            if (auto t = oracle::attack_target(c, i, gen.first_mention[i])) {
                expected_attacks.emplace_back(i, *t);
            }
        }
        std::set<Edge> expected;
        for (const auto& [a, b] : expected_attacks) {
            expected.emplace(c.posts[a].post_id, c.posts[b].post_id);
        }
        CHECK(std::set<Edge>(g.attack_edges.begin(), g.attack_edges.end()) == expected);

        std::set<Triple> expected_defences;
        for (const auto& [a, t, b] :
             oracle::defence_triples(c.posts.size(), expected_attacks)) {
            expected_defences.emplace(c.posts[a].post_id, c.posts[t].post_id, c.posts[b].post_id);
        }
        CHECK(defence_set(g.defence_edges) == expected_defences);

        // structural invariants
        std::set<std::string> attack_sources, defence_sources;
        for (const auto& [s, t] : g.attack_edges) {
            CHECK(s != t);
            CHECK(g.author_of.at(s) != g.author_of.at(t));
            CHECK(attack_sources.insert(s).second);  // out-degree <= 1
        }
        for (const auto& d : g.defence_edges) {
            CHECK(g.author_of.at(d.witness) != g.author_of.at(d.target));
            CHECK(defence_sources.insert(d.source).second);
        }
    }
}

TEST_CASE("build_graph is invariant under re-serialization") {
    Rng rng = make_rng(5);
    for (int it = 0; it < 50; ++it) {
        const auto gen = random_conversation(rng);
        const auto g1 = build_graph(gen.conv);
        const auto reparsed = parse_conversation(conversation_to_lines(gen.conv));
        const auto g2 = build_graph(reparsed);
        CHECK(graph_to_json(g1) == graph_to_json(g2));
    }
}

TEST_CASE("graph JSON round-trips") {
    const auto g = build_graph(chain_aba());
    const auto back = graph_from_json(graph_to_json(g));
    CHECK(back.nodes == g.nodes);
    CHECK(back.attack_edges == g.attack_edges);
    CHECK(defence_set(back.defence_edges) == defence_set(g.defence_edges));
    CHECK(back.author_of.at("p2") == "B");
}
