#include "graphrl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

namespace graphrl {

namespace {

using Mask = std::uint64_t;

struct BranchAndBound {
    std::vector<Mask> adj;
    std::size_t best_size = 0;
    Mask best = 0;

    static Mask bit(NodeId v) { return Mask{1} << v; }

    int degree(NodeId v, Mask live) const { return std::popcount(adj[v] & live); }

    int matching_bound(Mask live) const {
        int size = 0;
        Mask free = live;
        while (free) {
            const auto v = static_cast<NodeId>(std::countr_zero(free));
            free &= ~bit(v);
            const Mask nb = adj[v] & free;
            if (nb) {
                free &= ~bit(static_cast<NodeId>(std::countr_zero(nb)));
                ++size;
            }
        }
        return size;
    }

    void search(Mask live, Mask chosen, std::size_t size) {
        // Reductions.
        bool changed = true;
        while (changed) {
            changed = false;
            for (Mask rest = live; rest;) {
                const auto v = static_cast<NodeId>(std::countr_zero(rest));
                rest &= rest - 1;
                if (!(live & bit(v))) continue;
                const Mask nb = adj[v] & live;
                if (nb == 0) {
                    live &= ~bit(v);
                    changed = true;
                } else if (std::popcount(nb) == 1) {
                    const auto u = static_cast<NodeId>(std::countr_zero(nb));
                    chosen |= bit(u);
                    ++size;
                    live &= ~(bit(u) | bit(v));
                    changed = true;
                }
            }
        }
        if (size >= best_size) return;
        if (live == 0) {
            best_size = size;
            best = chosen;
            return;
        }
        if (size + static_cast<std::size_t>(matching_bound(live)) >= best_size) return;

        NodeId pick = 0;
        int pick_deg = -1;
        for (Mask rest = live; rest; rest &= rest - 1) {
            const auto v = static_cast<NodeId>(std::countr_zero(rest));
            const int d = degree(v, live);
            if (d > pick_deg) {
                pick_deg = d;
                pick = v;
            }
        }
        search(live & ~bit(pick), chosen | bit(pick), size + 1);
        const Mask nb = adj[pick] & live;
        search(live & ~(nb | bit(pick)), chosen | nb, size + static_cast<std::size_t>(std::popcount(nb)));
    }
};

std::vector<NodeId> greedy_matching(const Graph& graph) {
    std::vector<std::uint8_t> matched(graph.num_nodes(), 0);
    std::vector<NodeId> endpoints;
    for (const auto& e : graph.edges()) {
        if (matched[e.u] || matched[e.v]) continue;
        matched[e.u] = matched[e.v] = 1;
        endpoints.push_back(e.u);
        endpoints.push_back(e.v);
    }
    return endpoints;
}

}  // namespace

CoverResult exact_mvc(const Graph& graph, NodeId limit) {
    const NodeId n = graph.num_nodes();
    if (limit > kMaxExactLimit) limit = kMaxExactLimit;
    if (n > limit) {
        throw OracleLimitError("exact solver refuses a " + std::to_string(n) + "-node graph (limit " +
                               std::to_string(limit) +
                               "); use the matching or clique-partition lower bounds instead");
    }
    BranchAndBound bb;
    bb.adj.assign(n, 0);
    for (const auto& e : graph.edges()) {
        bb.adj[e.u] |= BranchAndBound::bit(e.v);
        bb.adj[e.v] |= BranchAndBound::bit(e.u);
    }
    // Seed the incumbent with the 2-approximation.
    const auto approx = greedy_matching(graph);
    for (NodeId v : approx) bb.best |= BranchAndBound::bit(v);
    bb.best_size = approx.size();
    const Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
    bb.search(all, 0, 0);

    CoverResult r;
    r.method = "exact";
    r.exact = true;
    for (NodeId v = 0; v < n; ++v) {
        if (bb.best & BranchAndBound::bit(v)) r.cover.push_back(v);
    }
    r.size = r.cover.size();
    return r;
}

CoverResult two_approx_mvc(const Graph& graph) {
    CoverResult r;
    r.cover = greedy_matching(graph);
    std::sort(r.cover.begin(), r.cover.end());
    r.size = r.cover.size();
    r.method = "two_approx";
    return r;
}

std::size_t matching_lower_bound(const Graph& graph) { return greedy_matching(graph).size() / 2; }

std::size_t clique_partition_lower_bound(const Graph& graph) {
    const NodeId n = graph.num_nodes();
    if (n == 0) return 0;
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
    for (const auto& e : graph.edges()) {
        adj[e.u * words + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
        adj[e.v * words + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    }
    auto adjacent = [&](NodeId a, NodeId b) { return (adj[a * words + b / 64] >> (b % 64)) & 1U; };

    // DSATUR on the complement: a colour class is a clique of the graph. A
    // node is blocked from a class once the class holds a non-neighbour.
    std::vector<std::vector<NodeId>> classes;
    std::vector<std::vector<std::uint8_t>> blocked(n);
    std::vector<std::size_t> saturation(n, 0);
    std::vector<std::uint8_t> placed(n, 0);
    for (NodeId step = 0; step < n; ++step) {
        NodeId pick = n;
        for (NodeId v = 0; v < n; ++v) {
            if (placed[v]) continue;
            if (pick == n || saturation[v] > saturation[pick] ||
                (saturation[v] == saturation[pick] && graph.degree(v) < graph.degree(pick))) {
                pick = v;
            }
        }
        std::size_t c = 0;
        while (c < classes.size() && blocked[pick][c]) ++c;
        if (c == classes.size()) {
            classes.emplace_back();
            for (auto& b : blocked) b.push_back(0);
        }
        classes[c].push_back(pick);
        placed[pick] = 1;
        for (NodeId u = 0; u < n; ++u) {
            if (placed[u] || u == pick || adjacent(pick, u) || blocked[u][c]) continue;
            blocked[u][c] = 1;
            ++saturation[u];
        }
    }
    return n - classes.size();
}

Reference reference_size(const Graph& graph, NodeId exact_limit) {
    if (graph.num_nodes() <= std::min(exact_limit, kMaxExactLimit)) {
        return {static_cast<double>(exact_mvc(graph, exact_limit).size), "exact"};
    }
    const auto matching = matching_lower_bound(graph);
    const auto clique = clique_partition_lower_bound(graph);
    if (clique > matching) return {static_cast<double>(clique), "clique_lb"};
    return {static_cast<double>(matching), "matching_lb"};
}

double approx_ratio(const Graph& graph, const CoverResult& cover, const CoverResult& reference) {
    if (!is_vertex_cover(graph, std::span<const NodeId>(cover.cover))) {
        throw DataError("cover from '" + cover.method + "' is not a vertex cover");
    }
    return approx_ratio(cover.size, static_cast<double>(reference.size));
}

double approx_ratio(std::size_t cover_size, double reference_size) {
    if (reference_size <= 0.0) {
        return cover_size == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(cover_size) / reference_size;
}

}  // namespace graphrl
