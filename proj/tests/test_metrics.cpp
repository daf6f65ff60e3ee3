#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "convoarg/metrics.hpp"
#include "convoarg/rng.hpp"
#include "oracles.hpp"

using namespace convoarg;

namespace {

Digraph random_digraph(Rng& rng, int max_nodes) {
    const int n = 1 + static_cast<int>(uniform_int(rng, 0, static_cast<std::uint64_t>(max_nodes - 1)));
    Digraph g(n);
    const double p = uniform_real(rng);
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u != v && uniform_real(rng) < p) g.add_edge(u, v);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("single node scores") {
    Digraph g(1);
    CHECK(betweenness(g)[0] == 0.0);
    const auto eig = eigenvector_centrality(g);
    CHECK(eig.converged);
    CHECK(eig.scores[0] == doctest::Approx(1.0));
    CHECK(harmonic_closeness(g)[0] == 0.0);
}

TEST_CASE("directed path x->y->z") {
    Digraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    const auto cb = betweenness(g);
    CHECK(cb[0] == 0.0);
    CHECK(cb[1] == doctest::Approx(1.0));  // the only s-t path through an interior node
    CHECK(cb[2] == 0.0);
    const auto cl = harmonic_closeness(g);
    CHECK(cl[0] == doctest::Approx(1.5));  // 1/1 + 1/2
    CHECK(cl[2] == 0.0);
}

TEST_CASE("three-post example graph has zero betweenness everywhere") {
    // p2->p1, p3->p2, p3->p1: the shortcut bypasses p2
    Digraph g(3);
    g.add_edge(1, 0);
    g.add_edge(2, 1);
    g.add_edge(2, 0);
    for (double v : betweenness(g)) CHECK(v == 0.0);
}

TEST_CASE("betweenness is zero on graphs with fewer than 3 nodes") {
    Digraph g(2);
    g.add_edge(0, 1);
    for (double v : betweenness(g)) CHECK(v == 0.0);
}

TEST_CASE("two-node eigenvector fixed point") {
    Digraph g(2);
    g.add_edge(0, 1);
    const auto eig = eigenvector_centrality(g);
    REQUIRE(eig.converged);
    // closed form: x_a = 0.5/1.425 with the dangling node feeding back uniformly
    CHECK(eig.scores[0] == doctest::Approx(0.35087719298245614).epsilon(1e-9));
    CHECK(eig.scores[1] == doctest::Approx(0.6491228070175439).epsilon(1e-9));
    CHECK(eig.scores[1] > eig.scores[0]);
    CHECK(eig.scores[0] + eig.scores[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto dense = oracle::pagerank_dense(g);
    CHECK(eig.scores[0] == doctest::Approx(dense[0]).epsilon(1e-8));
}

TEST_CASE("symmetric two-cycle splits evenly") {
    Digraph g(2);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    const auto eig = eigenvector_centrality(g);
    CHECK(eig.scores[0] == doctest::Approx(0.5));
    CHECK(eig.scores[1] == doctest::Approx(0.5));
}

TEST_CASE("complete directed triangle closeness") {
    Digraph g(3);
    for (int u = 0; u < 3; ++u) {
        for (int v = 0; v < 3; ++v) {
            if (u != v) g.add_edge(u, v);
        }
    }
    for (double v : harmonic_closeness(g)) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("all three measures match brute force on random digraphs") {
    Rng rng = make_rng(91);
    for (int it = 0; it < 200; ++it) {
        const Digraph g = random_digraph(rng, 8);
        const auto cb = betweenness(g);
        const auto cb_oracle = oracle::betweenness(g);
        const auto cl = harmonic_closeness(g);
        const auto cl_oracle = oracle::harmonic_closeness(g);
        const auto eig = eigenvector_centrality(g);
        const auto eig_oracle = oracle::pagerank_dense(g);
        double sum = 0.0;
        for (int v = 0; v < g.n; ++v) {
            CHECK(cb[v] == doctest::Approx(cb_oracle[v]).epsilon(1e-6));
            CHECK(cl[v] == doctest::Approx(cl_oracle[v]).epsilon(1e-6));
            CHECK(std::abs(eig.scores[v] - eig_oracle[v]) < 1e-6);
            CHECK(eig.scores[v] >= 0.0);
            CHECK(cb[v] >= 0.0);
            sum += eig.scores[v];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("eigenvector scores are invariant to node input order") {
    Rng rng = make_rng(92);
    for (int it = 0; it < 40; ++it) {
        const Digraph g = random_digraph(rng, 8);
        std::vector<int> perm(g.n);
        for (int i = 0; i < g.n; ++i) perm[i] = i;
        shuffle(perm, rng);
        Digraph h(g.n);
        for (int u = 0; u < g.n; ++u) {
            for (int v : g.adj[u]) h.add_edge(perm[u], perm[v]);
        }
        const auto a = eigenvector_centrality(g);
        const auto b = eigenvector_centrality(h);
        for (int v = 0; v < g.n; ++v) {
            CHECK(std::abs(a.scores[v] - b.scores[perm[v]]) < 1e-8);
        }
    }
}

TEST_CASE("harmonic closeness never decreases when an edge is added") {
    Rng rng = make_rng(93);
    for (int it = 0; it < 60; ++it) {
        Digraph g = random_digraph(rng, 8);
        if (g.n < 2) continue;
        const auto before = harmonic_closeness(g);
        // add one random non-loop edge (possibly parallel, which is a no-op distance-wise)
        const int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(g.n)));
        int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(g.n)));
        if (v == u) v = (v + 1) % g.n;
        g.add_edge(u, v);
        const auto after = harmonic_closeness(g);
        for (int i = 0; i < g.n; ++i) CHECK(after[i] >= before[i] - 1e-12);
    }
}

TEST_CASE("combined digraph collapses attack and defence edges") {
    ArgGraph g;
    g.conversation_id = "c";
    g.nodes = {"p1", "p2", "p3"};
    g.author_of = {{"p1", "A"}, {"p2", "B"}, {"p3", "A"}};
    g.attack_edges = {{"p2", "p1"}, {"p3", "p2"}};
    g.defence_edges = {{"p3", "p1", "p2"}, {"p3", "p1", "p2"}};  // duplicate collapses
    const Digraph d = combined_digraph(g);
    std::size_t edges = 0;
    for (const auto& out : d.adj) edges += out.size();
    CHECK(edges == 3);

    const CentralityScores s = compute_centralities(g);
    CHECK(s.nodes.size() == 3);
    CHECK(s.eigenvector_converged);
    CHECK(s.betweenness_of("p2") == 0.0);  // p3->p1 shortcut exists
    CHECK(s.closeness_of("p3") == doctest::Approx(2.0));  // reaches both at distance 1
}
