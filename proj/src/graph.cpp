#include "spinflow/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spinflow/rng.hpp"

namespace spinflow {

Graph::Graph(int n, std::vector<std::pair<int, int>> edge_list) : n_(n) {
    if (n < 1 || n > max_nodes)
        throw std::invalid_argument("Graph: node count must be in 1.." + std::to_string(max_nodes));
    adj_.assign(static_cast<std::size_t>(n), 0u);
    for (auto& [i, j] : edge_list) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (i == j) throw std::invalid_argument("Graph: self-loops are not allowed");
        if (i > j) std::swap(i, j);
    }
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
    edges_ = std::move(edge_list);
    for (const auto& [i, j] : edges_) {
        adj_[static_cast<std::size_t>(i)] |= 1u << j;
        adj_[static_cast<std::size_t>(j)] |= 1u << i;
    }
}

int Graph::degree(int v) const {
    return std::popcount(adj_[static_cast<std::size_t>(v)]);
}

std::vector<int> Graph::degree_sequence() const {
    std::vector<int> deg(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) deg[static_cast<std::size_t>(v)] = degree(v);
    return deg;
}

bool Graph::operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
}

Graph krackhardt_kite() {
    return Graph(10, {{0, 1}, {0, 2}, {0, 3}, {0, 5}, {1, 3}, {1, 4}, {1, 6}, {2, 3}, {2, 5},
                      {3, 4}, {3, 5}, {3, 6}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {7, 8}, {8, 9}});
}

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

bool is_connected(const Graph& g) {
    const int n = g.node_count();
    std::uint32_t visited = 1u;
    std::uint32_t frontier = 1u;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (std::uint32_t m = frontier; m != 0; m &= m - 1) {
            int v = std::countr_zero(m);
            next |= g.neighbors(v);
        }
        frontier = next & ~visited;
        visited |= next;
    }
    return std::popcount(visited) == n;
}

namespace {

// Iterated neighborhood refinement (1-WL): a node's new color is its old
// color plus the sorted multiset of neighbor colors, remapped to dense ids
// in a canonical (sorted-key) order.
std::vector<int> refine_colors(const Graph& g, std::vector<int> colors) {
    const int n = g.node_count();
    for (;;) {
        std::vector<std::pair<std::vector<int>, int>> keyed(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<int> key;
            key.push_back(colors[static_cast<std::size_t>(v)]);
            for (std::uint32_t m = g.neighbors(v); m != 0; m &= m - 1)
                key.push_back(colors[static_cast<std::size_t>(std::countr_zero(m))]);
            std::sort(key.begin() + 1, key.end());
            keyed[static_cast<std::size_t>(v)] = {std::move(key), v};
        }
        std::map<std::vector<int>, int> ids;
        for (const auto& [key, v] : keyed) ids.emplace(key, 0);
        int next_id = 0;
        for (auto& [key, id] : ids) id = next_id++;
        std::vector<int> refined(static_cast<std::size_t>(n));
        for (const auto& [key, v] : keyed) refined[static_cast<std::size_t>(v)] = ids[key];
        if (refined == colors) return colors;
        colors = std::move(refined);
    }
}

// BFS distance multiset per node; a cheap vertex invariant that separates
// most regular graphs before the backtracking stage.
std::vector<int> distance_profile_colors(const Graph& g) {
    const int n = g.node_count();
    std::vector<std::vector<int>> profiles(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(static_cast<std::size_t>(n), n + 1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::uint32_t frontier = 1u << s, visited = frontier;
        int d = 0;
        while (frontier != 0) {
            ++d;
            std::uint32_t next = 0;
            for (std::uint32_t m = frontier; m != 0; m &= m - 1)
                next |= g.neighbors(std::countr_zero(m));
            next &= ~visited;
            for (std::uint32_t m = next; m != 0; m &= m - 1)
                dist[static_cast<std::size_t>(std::countr_zero(m))] = d;
            visited |= next;
            frontier = next;
        }
        std::sort(dist.begin(), dist.end());
        profiles[static_cast<std::size_t>(s)] = std::move(dist);
    }
    std::map<std::vector<int>, int> ids;
    for (const auto& p : profiles) ids.emplace(p, 0);
    int next_id = 0;
    for (auto& [p, id] : ids) id = next_id++;
    std::vector<int> colors(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) colors[static_cast<std::size_t>(v)] = ids[profiles[static_cast<std::size_t>(v)]];
    return colors;
}

std::vector<std::uint32_t> relabeled_rows(const Graph& g, const std::vector<int>& colors) {
    // Discrete coloring: node with the i-th smallest color gets label i.
    const int n = g.node_count();
    std::vector<int> label(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = colors[static_cast<std::size_t>(v)];
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(n), 0u);
    for (const auto& [i, j] : g.edges()) {
        int li = label[static_cast<std::size_t>(i)];
        int lj = label[static_cast<std::size_t>(j)];
        rows[static_cast<std::size_t>(li)] |= 1u << lj;
        rows[static_cast<std::size_t>(lj)] |= 1u << li;
    }
    return rows;
}

struct CanonicalSearch {
    const Graph& g;
    std::vector<std::uint32_t> best;
    bool have_best = false;
    long leaves = 0;
    static constexpr long leaf_budget = 1'000'000;

    explicit CanonicalSearch(const Graph& graph) : g(graph) {}

    void visit(const std::vector<int>& colors) {
        const int n = g.node_count();
        // smallest non-singleton class, lowest color on ties
        std::vector<int> class_size(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) ++class_size[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])];
        int target = -1;
        for (int c = 0; c < n; ++c) {
            int sz = class_size[static_cast<std::size_t>(c)];
            if (sz > 1 && (target < 0 || sz < class_size[static_cast<std::size_t>(target)])) target = c;
        }
        if (target < 0) {
            if (++leaves > leaf_budget)
                throw std::runtime_error("canonical_form: leaf budget exceeded");
            auto rows = relabeled_rows(g, colors);
            if (!have_best || rows < best) {
                best = std::move(rows);
                have_best = true;
            }
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (colors[static_cast<std::size_t>(v)] != target) continue;
            // individualize v: give it a fresh color just below its class
            std::vector<int> split(static_cast<std::size_t>(n));
            for (int u = 0; u < n; ++u) {
                int c = colors[static_cast<std::size_t>(u)];
                split[static_cast<std::size_t>(u)] = 2 * c + (u == v ? 0 : 1);
            }
            visit(refine_colors(g, split));
        }
    }
};

}  // namespace

std::vector<std::uint32_t> canonical_form(const Graph& g) {
    auto colors = refine_colors(g, distance_profile_colors(g));
    CanonicalSearch search(g);
    search.visit(colors);
    return search.best;
}

bool are_isomorphic(const Graph& g1, const Graph& g2) {
    if (g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count()) return false;
    auto d1 = g1.degree_sequence();
    auto d2 = g2.degree_sequence();
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    if (d1 != d2) return false;
    return canonical_form(g1) == canonical_form(g2);
}

std::vector<Graph> erdos_renyi_ensemble(int n, double p, int count, std::uint64_t seed,
                                        const EnsembleOptions& opts) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("erdos_renyi_ensemble: p must be in (0,1)");
    if (count < 1) throw std::invalid_argument("erdos_renyi_ensemble: count must be >= 1");
    if (n < 2 || n > Graph::max_nodes)
        throw std::invalid_argument("erdos_renyi_ensemble: n out of range");

    SplitMix64 rng(seed);
    std::vector<Graph> accepted;
    std::vector<std::vector<std::uint32_t>> canon;
    const std::uint64_t budget = opts.attempts_per_graph * static_cast<std::uint64_t>(count);
    for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform() < p) edges.emplace_back(i, j);
        Graph candidate(n, std::move(edges));
        if (!is_connected(candidate)) continue;
        auto form = canonical_form(candidate);
        if (std::find(canon.begin(), canon.end(), form) != canon.end()) continue;
        canon.push_back(std::move(form));
        accepted.push_back(std::move(candidate));
        if (static_cast<int>(accepted.size()) == count) return accepted;
    }
    throw std::runtime_error("erdos_renyi_ensemble: attempt budget exhausted after " +
                             std::to_string(budget) + " samples (" +
                             std::to_string(accepted.size()) + "/" + std::to_string(count) +
                             " graphs found)");
}

std::string to_edge_list(const Graph& g) {
    std::ostringstream out;
    out << "n=" << g.node_count() << "\n";
    for (const auto& [i, j] : g.edges()) out << i << " " << j << "\n";
    return out.str();
}

namespace {

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (line.compare(first, 2, "n=") == 0) {
            n = std::stoi(line.substr(first + 2));
            continue;
        }
        std::istringstream row(line);
        int i = 0, j = 0;
        if (!(row >> i >> j)) throw std::invalid_argument("parse_graph: bad edge line: " + line);
        edges.emplace_back(i, j);
    }
    if (n < 0) throw std::invalid_argument("parse_graph: missing n=<count> header");
    return Graph(n, std::move(edges));
}

}  // namespace

Graph parse_graph(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        auto j = nlohmann::json::parse(text);
        int n = j.at("n").get<int>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges"))
            edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        return Graph(n, std::move(edges));
    }
    return parse_edge_list(text);
}

}  // namespace spinflow
