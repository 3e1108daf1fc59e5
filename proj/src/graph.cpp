#include "graphrl/graph.hpp"

#include <algorithm>
#include <string>

namespace graphrl {

Graph::Graph(NodeId num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
    for (auto& e : edges) {
        if (e.u == e.v) {
            throw DataError("self-loop on node " + std::to_string(e.u));
        }
        if (e.u >= num_nodes || e.v >= num_nodes) {
            throw DataError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") out of range for " + std::to_string(num_nodes) + " nodes");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw DataError("duplicate edge (" + std::to_string(dup->u) + ", " +
                        std::to_string(dup->v) + ")");
    }
    edges_ = std::move(edges);

    std::vector<std::size_t> degree(num_nodes_, 0);
    for (const auto& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
    for (NodeId v = 0; v < num_nodes_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so filling in this order leaves every
    // neighbour list sorted without a second pass.
    for (const auto& e : edges_) neighbors_[fill[e.v]++] = e.u;
    for (const auto& e : edges_) neighbors_[fill[e.u]++] = e.v;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u >= num_nodes_ || v >= num_nodes_) return false;
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<AdjacencyEntry> Graph::coordinate_adjacency() const {
    std::vector<AdjacencyEntry> out;
    out.reserve(neighbors_.size());
    for (NodeId r = 0; r < num_nodes_; ++r) {
        for (NodeId c : neighbors(r)) out.push_back({r, c});
    }
    return out;
}

bool is_vertex_cover(const Graph& graph, std::span<const std::uint8_t> in_cover) {
    if (in_cover.size() != graph.num_nodes()) return false;
    return std::all_of(graph.edges().begin(), graph.edges().end(),
                       [&](const Edge& e) { return in_cover[e.u] || in_cover[e.v]; });
}

bool is_vertex_cover(const Graph& graph, std::span<const NodeId> cover) {
    std::vector<std::uint8_t> flags(graph.num_nodes(), 0);
    for (NodeId v : cover) {
        if (v >= graph.num_nodes()) return false;
        flags[v] = 1;
    }
    return is_vertex_cover(graph, flags);
}

}  // namespace graphrl
