#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace spinflow {

/// Undirected simple graph on nodes 0..n-1. Adjacency is stored as one
/// bitmask per node, which caps the supported size at 32 nodes (the exact
/// pipeline stops at 20 anyway).
class Graph {
public:
    static constexpr int max_nodes = 32;

    Graph() = default;
    Graph(int n, std::vector<std::pair<int, int>> edge_list);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Bitmask of the neighbors of v.
    std::uint32_t neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const;
    std::vector<int> degree_sequence() const;

    /// Equality is node count plus edge-set equality (order independent).
    bool operator==(const Graph& other) const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;  // normalized i<j, sorted, unique
    std::vector<std::uint32_t> adj_;
};

/// The 10-node, 18-edge Krackhardt kite; node 9 is the tail leaf.
Graph krackhardt_kite();

/// Simple path 0-1-...-n-1.
Graph path_graph(int n);

bool is_connected(const Graph& g);

/// Canonical adjacency rows (lexicographically minimal over the relabelings
/// explored by refinement + backtracking). Two graphs are isomorphic iff
/// their canonical forms are equal. Exact for the tool's scale (n <= 12).
std::vector<std::uint32_t> canonical_form(const Graph& g);

bool are_isomorphic(const Graph& g1, const Graph& g2);

struct EnsembleOptions {
    /// Total rejection-sampling attempt budget is attempts_per_graph * count.
    std::uint64_t attempts_per_graph = 10'000;
};

/// Pairwise non-isomorphic connected G(n, p) samples, deterministic per seed.
/// Throws std::runtime_error when the attempt budget runs out.
std::vector<Graph> erdos_renyi_ensemble(int n, double p, int count, std::uint64_t seed,
                                        const EnsembleOptions& opts = {});

/// Edge-list text: header "n=<count>" then one "i j" line per edge.
std::string to_edge_list(const Graph& g);

/// Parses either edge-list text or inline JSON {"n":..., "edges":[[i,j],...]}.
Graph parse_graph(const std::string& text);

}  // namespace spinflow
