#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "convoarg/argraph.hpp"

namespace convoarg {

/// Simple directed graph with integer nodes 0..n-1.
struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    explicit Digraph(int nodes = 0) : n(nodes), adj(nodes) {}
    void add_edge(int u, int v) { adj[u].push_back(v); }
};

struct PowerIterationResult {
    std::vector<double> scores;
    int iterations = 0;
    bool converged = true;
};

/// Brandes betweenness on the directed, unweighted graph: fractional counts
/// of shortest s-t paths passing through each interior node.
std::vector<double> betweenness(const Digraph& g);

/// Damped in-link power iteration (PageRank family): uniform teleport,
/// dangling mass spread uniformly, L1-normalized. Hitting the iteration cap
/// flags the result instead of throwing.
PowerIterationResult eigenvector_centrality(const Digraph& g, double damping = 0.85,
                                            double tol = 1e-9, int max_iter = 1000);

/// Harmonic closeness: sum over u != v of 1/d(v, u), unreachable contributing
/// zero. Well-defined on the disconnected graphs conversations produce.
std::vector<double> harmonic_closeness(const Digraph& g);

/// Attack and defence edges collapsed to a simple directed edge set over the
/// graph's node order (duplicates and self-loops dropped).
Digraph combined_digraph(const ArgGraph& g);

struct CentralityScores {
    std::vector<std::string> nodes;  // ArgGraph node order
    std::vector<double> betweenness;
    std::vector<double> eigenvector;
    std::vector<double> closeness;
    bool eigenvector_converged = true;

    double betweenness_of(const std::string& id) const { return betweenness[index_of(id)]; }
    double eigenvector_of(const std::string& id) const { return eigenvector[index_of(id)]; }
    double closeness_of(const std::string& id) const { return closeness[index_of(id)]; }
    std::size_t index_of(const std::string& id) const;

  private:
    mutable std::unordered_map<std::string, std::size_t> index_;
};

/// All three measures on the combined attack+defence digraph.
CentralityScores compute_centralities(const ArgGraph& g);

}  // namespace convoarg
