#include "convoarg/metrics.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace convoarg {

std::vector<double> betweenness(const Digraph& g) {
    const int n = g.n;
    std::vector<double> cb(n, 0.0);
    std::vector<int> dist(n), stack_order;
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> preds(n);
    stack_order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        stack_order.clear();

        dist[s] = 0;
        sigma[s] = 1.0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            stack_order.push_back(v);
            for (int w : g.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = stack_order.rbegin(); it != stack_order.rend(); ++it) {
            const int w = *it;
            for (int v : preds[w]) {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) cb[w] += delta[w];
        }
    }
    return cb;
}

PowerIterationResult eigenvector_centrality(const Digraph& g, double damping, double tol,
                                            int max_iter) {
    PowerIterationResult res;
    const int n = g.n;
    if (n == 0) return res;

    std::vector<double> x(n, 1.0 / n), next(n);
    for (int iter = 1; iter <= max_iter; ++iter) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v) {
            if (g.adj[v].empty()) dangling += x[v];
        }
        const double base = (1.0 - damping) / n + damping * dangling / n;
        std::fill(next.begin(), next.end(), base);
        for (int v = 0; v < n; ++v) {
            if (g.adj[v].empty()) continue;
            const double share = damping * x[v] / static_cast<double>(g.adj[v].size());
            for (int w : g.adj[v]) next[w] += share;
        }
        double change = 0.0;
        for (int v = 0; v < n; ++v) change += std::abs(next[v] - x[v]);
        x.swap(next);
        res.iterations = iter;
        if (change < tol) {
            res.converged = true;
            break;
        }
        res.converged = false;
    }
    double total = 0.0;
    for (double v : x) total += v;
    if (total > 0.0) {
        for (double& v : x) v /= total;
    }
    res.scores = std::move(x);
    return res;
}

std::vector<double> harmonic_closeness(const Digraph& g) {
    const int n = g.n;
    std::vector<double> scores(n, 0.0);
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::deque<int> queue{s};
        double sum = 0.0;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            if (v != s) sum += 1.0 / dist[v];
            for (int w : g.adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        scores[s] = sum;
    }
    return scores;
}

Digraph combined_digraph(const ArgGraph& g) {
    std::unordered_map<std::string, int> index;
    index.reserve(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], static_cast<int>(i));

    Digraph d(static_cast<int>(g.nodes.size()));
    std::set<std::pair<int, int>> seen;
    auto add = [&](const std::string& s, const std::string& t) {
        const int u = index.at(s), v = index.at(t);
        if (u == v) return;
        if (seen.emplace(u, v).second) d.add_edge(u, v);
    };
    for (const auto& [s, t] : g.attack_edges) add(s, t);
    for (const auto& e : g.defence_edges) add(e.source, e.target);
    return d;
}

std::size_t CentralityScores::index_of(const std::string& id) const {
    if (index_.empty()) {
        for (std::size_t i = 0; i < nodes.size(); ++i) index_.emplace(nodes[i], i);
    }
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node '" + id + "'");
    return it->second;
}

CentralityScores compute_centralities(const ArgGraph& g) {
    const Digraph d = combined_digraph(g);
    CentralityScores s;
    s.nodes = g.nodes;
    s.betweenness = betweenness(d);
    auto eig = eigenvector_centrality(d);
    s.eigenvector = std::move(eig.scores);
    s.eigenvector_converged = eig.converged;
    s.closeness = harmonic_closeness(d);
    return s;
}

}  // namespace convoarg
